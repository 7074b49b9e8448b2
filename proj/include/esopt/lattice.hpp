#pragma once

#include <cstddef>
#include <vector>

namespace esopt {

/// Constants of the two-factor market: traded asset S, non-traded asset Y.
/// Drifts and rates are per year, volatilities per square-root year.
struct ContinuousParams {
    double mu = 0.0;      // drift of S
    double sigma = 0.0;   // volatility of S
    double alpha = 0.0;   // drift of Y
    double beta = 0.0;    // volatility of Y
    double r = 0.0;       // riskless rate
    double delta = 0.0;   // dividend yield of Y
    double rho = 0.0;     // correlation between S and Y
    double s0 = 1.0;
    double y0 = 1.0;
    double t_max = 1.0;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

/// One-period joint move of (S, Y):
///   (uS, hY) w.p. p1, (uS, ell Y) w.p. p2, (dS, hY) w.p. p3, (dS, ell Y) w.p. p4.
struct StepParams {
    double u = 0.0;
    double d = 0.0;
    double h = 0.0;
    double ell = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double p4 = 0.0;
    double q = 0.0;   // (1 - d) / (u - d), the martingale weight of the S up-move
    double dt = 0.0;

    /// Builds step parameters directly from multipliers and probabilities.
    /// Fills q, checks ordering of multipliers and that the p's are a distribution.
    static StepParams from_moves(double u, double d, double h, double ell,
                                 double p1, double p2, double p3, double p4,
                                 double dt = 1.0);
};

/// Matches the joint binomial step to the continuous dynamics over dt = t_max / n_steps.
/// Throws InfeasibleProbabilities when the solved law leaves [0, 1].
StepParams calibrate(const ContinuousParams& cp, int n_steps);

/// Geometric ladder of Y values. Row 0 is the top (h^N y0), row N the center,
/// row 2N the bottom (h^-N y0).
class Grid {
public:
    Grid(int n_steps, double y0, double h);

    int n_steps() const noexcept { return n_steps_; }
    int n_rows() const noexcept { return 2 * n_steps_ + 1; }
    int center_row() const noexcept { return n_steps_; }
    double y0() const noexcept { return y0_; }
    double h() const noexcept { return h_; }
    double value(int row) const { return values_.at(static_cast<std::size_t>(row)); }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Nearest row in log space, clamped to the ladder. Geometric midpoints go to
    /// the higher-valued (smaller index) row.
    int snap(double y) const;

private:
    int n_steps_;
    double y0_;
    double h_;
    double log_h_;
    std::vector<double> values_;
};

inline Grid grid_values(int n_steps, double y0, double h) { return Grid(n_steps, y0, h); }

}  // namespace esopt
