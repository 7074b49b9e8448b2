#include "esopt/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "esopt/errors.hpp"

namespace esopt {

namespace {

// Below this value of gamma * |c_h - c_l| the branch price uses its second-order
// expansion in gamma.
constexpr double kSmallGammaSpread = 1e-8;

void require_branches(const StepParams& sp) {
    if (!(sp.p1 + sp.p2 > 0.0)) throw DegenerateBranch("S up-branch has zero probability (p1 + p2 = 0)");
    if (!(sp.p3 + sp.p4 > 0.0)) throw DegenerateBranch("S down-branch has zero probability (p3 + p4 = 0)");
}

// -(1/gamma) log E[exp(-gamma X)] for X in {x_a, x_b} with weights proportional to p_a, p_b.
double branch_certainty_equivalent(double p_a, double p_b, double x_a, double x_b, double gamma) {
    const double mass = p_a + p_b;
    if (p_a == 0.0) return x_b;
    if (p_b == 0.0) return x_a;
    const double low = std::min(x_a, x_b);
    const double spread = std::abs(x_a - x_b);
    if (spread == 0.0) return low;
    const double w_high = (x_a > x_b ? p_a : p_b) / mass;
    const double x = gamma * spread;
    if (x < kSmallGammaSpread) {
        return low + w_high * spread - 0.5 * gamma * w_high * (1.0 - w_high) * spread * spread;
    }
    return low - std::log1p(w_high * std::expm1(-x)) / gamma;
}

// log(p_a exp(-gamma x_a) + p_b exp(-gamma x_b)), zero-weight states skipped.
double log_branch_mgf(double p_a, double p_b, double x_a, double x_b, double gamma) {
    if (p_a == 0.0) return std::log(p_b) - gamma * x_b;
    if (p_b == 0.0) return std::log(p_a) - gamma * x_a;
    const double low = std::min(x_a, x_b);
    return -gamma * low + std::log(p_a * std::exp(-gamma * (x_a - low)) +
                                   p_b * std::exp(-gamma * (x_b - low)));
}

}  // namespace

RiskAversion::RiskAversion(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("risk aversion must be > 0");
}

double price_g(ClaimPair claim, const StepParams& sp, RiskAversion gamma) {
    require_branches(sp);
    const double g = gamma.value();
    const double up = branch_certainty_equivalent(sp.p1, sp.p2, claim.c_h, claim.c_l, g);
    const double down = branch_certainty_equivalent(sp.p3, sp.p4, claim.c_h, claim.c_l, g);
    return sp.q * up + (1.0 - sp.q) * down;
}

double optimal_hedge(ClaimPair claim, const StepParams& sp, RiskAversion gamma, double s0) {
    require_branches(sp);
    if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be > 0");
    const double g = gamma.value();
    const double log_ratio = log_branch_mgf(sp.p3, sp.p4, claim.c_h, claim.c_l, g) -
                             log_branch_mgf(sp.p1, sp.p2, claim.c_h, claim.c_l, g) +
                             std::log((1.0 - sp.d) / (sp.u - 1.0));
    return -log_ratio / (g * (sp.u - sp.d) * s0);
}

double excess_hedge(ClaimPair claim, const StepParams& sp, RiskAversion gamma, double s0) {
    return optimal_hedge(claim, sp, gamma, s0) - optimal_hedge({}, sp, gamma, s0);
}

std::array<double, 4> minimal_measure(const StepParams& sp) {
    require_branches(sp);
    const double up = sp.p1 + sp.p2;
    const double down = sp.p3 + sp.p4;
    return {sp.q * sp.p1 / up, sp.q * sp.p2 / up, (1.0 - sp.q) * sp.p3 / down,
            (1.0 - sp.q) * sp.p4 / down};
}

double minimal_measure_price(ClaimPair claim, const StepParams& sp) {
    const auto m = minimal_measure(sp);
    return (m[0] + m[2]) * claim.c_h + (m[1] + m[3]) * claim.c_l;
}

double exercise_threshold(int a_count, double strike, const StepParams& sp, RiskAversion gamma) {
    if (a_count < 1) throw std::invalid_argument("a_count must be >= 1");
    if (!(strike > 0.0)) throw std::invalid_argument("strike must be > 0");
    require_branches(sp);

    const double a = a_count;
    auto gap = [&](double y) {
        const ClaimPair held{a * std::max(sp.h * y - strike, 0.0), a * std::max(sp.ell * y - strike, 0.0)};
        return a * std::max(y - strike, 0.0) - price_g(held, sp, gamma);
    };

    double lo = std::nextafter(strike, std::numeric_limits<double>::infinity());
    if (gap(lo) >= 0.0) return lo;

    constexpr int kMaxExpansions = 64;
    double hi = lo;
    bool bracketed = false;
    for (int j = 1; j <= kMaxExpansions; ++j) {
        const double candidate = strike * std::pow(sp.h, j);
        if (gap(candidate) >= 0.0) {
            hi = candidate;
            bracketed = true;
            break;
        }
        lo = candidate;
    }
    if (!bracketed) throw NoThreshold("exercise never dominates continuation on (K, K h^64]");

    const double tol = 1e-10 * strike;
    auto done = [tol](double x0, double x1) { return std::abs(x1 - x0) <= tol; };
    const auto [left, right] = boost::math::tools::bisect(gap, lo, hi, done);
    return 0.5 * (left + right);
}

PartialExercise one_period_partial_exercise(int a_total, double y0, double strike,
                                            const StepParams& sp, RiskAversion gamma) {
    if (a_total < 0) throw std::invalid_argument("a_total must be >= 0");
    const double now = std::max(y0 - strike, 0.0);
    const double up = std::max(sp.h * y0 - strike, 0.0);
    const double down = std::max(sp.ell * y0 - strike, 0.0);

    PartialExercise best{0, -std::numeric_limits<double>::infinity()};
    for (int a = 0; a <= a_total; ++a) {
        const double kept = a_total - a;
        const double v = a * now + price_g({kept * up, kept * down}, sp, gamma);
        if (v > best.value) best = {a, v};
    }
    return best;
}

}  // namespace esopt
