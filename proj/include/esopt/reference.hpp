#pragma once

#include <functional>

#include "esopt/exercise.hpp"
#include "esopt/kernel.hpp"
#include "esopt/lattice.hpp"

namespace esopt::reference {

struct BsInputs {
    double spot = 0.0;
    double strike = 0.0;
    double vol = 0.0;
    double rate = 0.0;
    double div = 0.0;
    double tenor = 0.0;
};

/// Black-Scholes call with continuous dividend yield.
double bs_call(const BsInputs& in);

/// Black-Scholes value of one call on Y with cash normalized to 1 (rate 0).
double bs_discounted(const ContinuousParams& cp, double strike);

/// Black-Scholes value of one call on Y discounting at the riskless rate r.
double bs_standard(const ContinuousParams& cp, double strike);

/// Expected terminal payoff on the grid when each step goes up with probability q_y.
double binomial_expectation(const Grid& grid, const std::function<double(double)>& terminal_payoff, double q_y);

/// Probability making the grid process a martingale: (1 - ell) / (h - ell).
inline double martingale_probability(double h) { return (1.0 - 1.0 / h) / (h - 1.0 / h); }

/// Value table computed by plain recursion over the lattice, without tabulation.
/// Exponential in N; throws SizeGuard above N = 6 or A = 4.
ValueTable naive_value(const Grid& grid, const StepParams& sp, RiskAversion gamma, const OptionSpec& spec,
                       ExerciseMode mode);

}  // namespace esopt::reference
