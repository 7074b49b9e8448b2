#include "esopt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "esopt/errors.hpp"

namespace esopt {

void ContinuousParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(std::isfinite(mu) && std::isfinite(alpha) && std::isfinite(r) && std::isfinite(delta),
            "drifts and rates must be finite");
    require(sigma > 0.0, "sigma must be > 0");
    require(beta > 0.0, "beta must be > 0");
    require(delta >= 0.0, "delta must be >= 0");
    require(rho >= -1.0 && rho <= 1.0, "rho must lie in [-1, 1]");
    require(s0 > 0.0, "s0 must be > 0");
    require(y0 > 0.0, "y0 must be > 0");
    require(t_max > 0.0, "t_max must be > 0");
}

StepParams StepParams::from_moves(double u, double d, double h, double ell,
                                  double p1, double p2, double p3, double p4, double dt) {
    if (!(0.0 < d && d < 1.0 && 1.0 < u)) throw std::invalid_argument("need 0 < d < 1 < u");
    if (!(0.0 < ell && ell < 1.0 && 1.0 < h)) throw std::invalid_argument("need 0 < ell < 1 < h");
    const double ps[] = {p1, p2, p3, p4};
    const char* names[] = {"p1", "p2", "p3", "p4"};
    for (int j = 0; j < 4; ++j) {
        if (!(ps[j] >= 0.0 && ps[j] <= 1.0)) throw InfeasibleProbabilities(names[j], ps[j]);
    }
    if (std::abs(p1 + p2 + p3 + p4 - 1.0) > 1e-12)
        throw std::invalid_argument("probabilities must sum to 1");

    StepParams sp;
    sp.u = u;
    sp.d = d;
    sp.h = h;
    sp.ell = ell;
    sp.p1 = p1;
    sp.p2 = p2;
    sp.p3 = p3;
    sp.p4 = p4;
    sp.q = (1.0 - d) / (u - d);
    sp.dt = dt;
    return sp;
}

StepParams calibrate(const ContinuousParams& cp, int n_steps) {
    cp.validate();
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");

    const double dt = cp.t_max / n_steps;
    const double sqdt = std::sqrt(dt);
    const double u = std::exp(cp.sigma * sqdt);
    const double d = 1.0 / u;
    const double h = std::exp(cp.beta * sqdt);
    const double ell = 1.0 / h;

    // Marginal S-up and Y-up probabilities from the drift match.
    const double m1 = (std::exp((cp.mu - cp.r) * dt) - d) / (u - d);
    const double m2 = (std::exp((cp.alpha - cp.r - cp.delta) * dt) - ell) / (h - ell);

    // With p2, p3, p4 written through the marginals, p1 p4 - p2 p3 = p1 - m1 m2.
    const double cov = cp.rho * cp.beta * cp.sigma * dt / ((u - d) * (h - ell));
    const double p1 = m1 * m2 + cov;
    const double p2 = m1 - p1;
    const double p3 = m2 - p1;
    const double p4 = 1.0 - m1 - m2 + p1;

    const double ps[] = {p1, p2, p3, p4};
    const char* names[] = {"p1", "p2", "p3", "p4"};
    for (int j = 0; j < 4; ++j) {
        if (!(ps[j] >= 0.0 && ps[j] <= 1.0)) throw InfeasibleProbabilities(names[j], ps[j]);
    }

    StepParams sp;
    sp.u = u;
    sp.d = d;
    sp.h = h;
    sp.ell = ell;
    sp.p1 = p1;
    sp.p2 = p2;
    sp.p3 = p3;
    sp.p4 = p4;
    sp.q = (1.0 - d) / (u - d);
    sp.dt = dt;
    return sp;
}

Grid::Grid(int n_steps, double y0, double h) : n_steps_(n_steps), y0_(y0), h_(h) {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (!(y0 > 0.0)) throw std::invalid_argument("y0 must be > 0");
    if (!(h > 1.0)) throw std::invalid_argument("h must be > 1");
    log_h_ = std::log(h);
    values_.resize(static_cast<std::size_t>(2 * n_steps + 1));
    for (int row = 0; row < n_rows(); ++row) {
        values_[static_cast<std::size_t>(row)] = y0 * std::pow(h, n_steps - row);
    }
    values_[static_cast<std::size_t>(n_steps)] = y0;
}

int Grid::snap(double y) const {
    if (!(y > 0.0)) throw std::invalid_argument("snap requires y > 0");
    const double level = std::floor(std::log(y / y0_) / log_h_ + 0.5);
    const double row = static_cast<double>(n_steps_) - level;
    return static_cast<int>(std::clamp(row, 0.0, static_cast<double>(2 * n_steps_)));
}

}  // namespace esopt
