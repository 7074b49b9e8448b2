#include "esopt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "esopt/errors.hpp"

namespace esopt {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sum of a fixed-order sequence, pairwise.
double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += x[j];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t path) : state_(mix64(seed + kGolden) ^ mix64(path * kGolden + 1)) {}

PathRng::result_type PathRng::operator()() {
    state_ += kGolden;
    return mix64(state_);
}

CostEstimate simulate_cost(const PolicyTable& policy, const Grid& grid, const ContinuousParams& cp,
                           const OptionSpec& spec, const SimConfig& sim) {
    if (spec.a_total <= 0) throw EmptyPolicy("option package is empty");
    if (sim.n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
    if (sim.antithetic && sim.n_paths % 2 != 0) throw std::invalid_argument("antithetic sampling needs an even n_paths");
    if (policy.n_steps() != grid.n_steps() || policy.a_total() != spec.a_total)
        throw InconsistentGrid("policy table does not match the grid or the package size");
    if (std::abs(grid.y0() - cp.y0) > 1e-12 * cp.y0) throw InconsistentGrid("grid center differs from y0");
    const double dt = cp.t_max / grid.n_steps();
    if (std::abs(std::log(grid.h()) - cp.beta * std::sqrt(dt)) > 1e-9)
        throw InconsistentGrid("grid spacing differs from beta * sqrt(dt)");

    const int big_n = grid.n_steps();
    const double drift = (-cp.delta - 0.5 * cp.beta * cp.beta) * dt;
    const double vol = cp.beta * std::sqrt(dt);
    const double strike = spec.strike;

    // Payout of one path; `sign` mirrors the normals for the antithetic partner.
    auto run_path = [&](std::uint64_t stream, double sign) {
        PathRng rng(sim.seed, stream);
        std::normal_distribution<double> normal;
        int held = spec.a_total;
        double y = cp.y0;
        double payout = 0.0;
        for (int n = 0; n <= big_n && held > 0; ++n) {
            if (n > 0) y *= std::exp(drift + vol * sign * normal(rng));
            const int a = policy.at(held, grid.snap(y), n);
            if (a > 0) {
                payout += a * std::max(y - strike, 0.0);
                held -= a;
            }
        }
        return payout;
    };

    const long long samples = sim.antithetic ? sim.n_paths / 2 : sim.n_paths;
    std::vector<double> values(static_cast<std::size_t>(samples));
    auto work = [&](long long first, long long last) {
        for (long long j = first; j < last; ++j) {
            const auto stream = static_cast<std::uint64_t>(j);
            values[static_cast<std::size_t>(j)] =
                sim.antithetic ? 0.5 * (run_path(stream, 1.0) + run_path(stream, -1.0)) : run_path(stream, 1.0);
        }
    };

    const int workers = static_cast<int>(std::clamp<long long>(sim.threads, 1, samples));
    if (workers == 1) {
        work(0, samples);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work, samples * w / workers, samples * (w + 1) / workers);
    }

    const double mean = pairwise_sum(values.data(), values.size()) / static_cast<double>(samples);
    std::vector<double> sq(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) sq[j] = (values[j] - mean) * (values[j] - mean);
    const double var = samples > 1 ? pairwise_sum(sq.data(), sq.size()) / static_cast<double>(samples - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(samples)), sim.n_paths};
}

}  // namespace esopt
