#pragma once

#include <array>

#include "esopt/lattice.hpp"

namespace esopt {

/// Coefficient of the exponential utility -exp(-gamma x). Always strictly positive.
class RiskAversion {
public:
    explicit RiskAversion(double gamma);
    double value() const noexcept { return gamma_; }

private:
    double gamma_;
};

/// Payoffs of a one-period claim in the Y-up and Y-down states.
struct ClaimPair {
    double c_h = 0.0;
    double c_l = 0.0;
};

/// Buyer's exponential indifference price of a one-period claim written on Y
/// and hedged with S. Throws DegenerateBranch if either S-branch has zero mass.
double price_g(ClaimPair claim, const StepParams& sp, RiskAversion gamma);

/// Number of S shares held in the optimal hedge of the claim.
double optimal_hedge(ClaimPair claim, const StepParams& sp, RiskAversion gamma, double s0);

/// Merton position (claim-free optimum).
inline double merton_hedge(const StepParams& sp, RiskAversion gamma, double s0) {
    return optimal_hedge({}, sp, gamma, s0);
}

/// Optimal hedge in excess of the Merton position.
double excess_hedge(ClaimPair claim, const StepParams& sp, RiskAversion gamma, double s0);

/// Minimal martingale measure (q1..q4) on the four joint states.
std::array<double, 4> minimal_measure(const StepParams& sp);

/// Zero-risk-aversion price: expectation of the claim under the minimal measure.
double minimal_measure_price(ClaimPair claim, const StepParams& sp);

/// Smallest Y* > strike at which exercising all `a_count` calls now matches holding
/// them one more period. Throws NoThreshold if none exists below strike * h^64.
double exercise_threshold(int a_count, double strike, const StepParams& sp, RiskAversion gamma);

struct PartialExercise {
    int a_star = 0;
    double value = 0.0;
};

/// Optimal integer number of calls to exercise now out of `a_total`, holding the rest
/// for one period. Ties go to the smaller count.
PartialExercise one_period_partial_exercise(int a_total, double y0, double strike,
                                            const StepParams& sp, RiskAversion gamma);

}  // namespace esopt
