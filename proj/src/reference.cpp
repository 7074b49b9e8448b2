#include "esopt/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "esopt/errors.hpp"

namespace esopt::reference {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

double bs_call(const BsInputs& in) {
    if (!(in.spot > 0.0 && in.strike > 0.0 && in.tenor > 0.0 && in.vol >= 0.0))
        throw std::invalid_argument("bs_call needs spot, strike, tenor > 0 and vol >= 0");
    const double fwd_spot = in.spot * std::exp(-in.div * in.tenor);
    const double pv_strike = in.strike * std::exp(-in.rate * in.tenor);
    const double sd = in.vol * std::sqrt(in.tenor);
    if (sd < 1e-300) return std::max(fwd_spot - pv_strike, 0.0);
    const double d1 = (std::log(fwd_spot / pv_strike) + 0.5 * sd * sd) / sd;
    return fwd_spot * norm_cdf(d1) - pv_strike * norm_cdf(d1 - sd);
}

double bs_discounted(const ContinuousParams& cp, double strike) {
    return bs_call({cp.y0, strike, cp.beta, 0.0, cp.delta, cp.t_max});
}

double bs_standard(const ContinuousParams& cp, double strike) {
    return bs_call({cp.y0, strike, cp.beta, cp.r, cp.delta, cp.t_max});
}

double binomial_expectation(const Grid& grid, const std::function<double(double)>& terminal_payoff, double q_y) {
    if (!(q_y > 0.0 && q_y < 1.0)) throw std::invalid_argument("q_y must lie in (0, 1)");
    const int big_n = grid.n_steps();
    const double log_q = std::log(q_y);
    const double log_1q = std::log1p(-q_y);
    const double log_nfact = std::lgamma(big_n + 1.0);
    double sum = 0.0;
    // j up-moves land on row N - (2j - N) = 2N - 2j.
    for (int j = 0; j <= big_n; ++j) {
        const double log_w = log_nfact - std::lgamma(j + 1.0) - std::lgamma(big_n - j + 1.0) + j * log_q +
                             (big_n - j) * log_1q;
        sum += std::exp(log_w) * terminal_payoff(grid.value(2 * big_n - 2 * j));
    }
    return sum;
}

namespace {

class Recursion {
public:
    Recursion(const Grid& grid, const StepParams& sp, RiskAversion gamma, const OptionSpec& spec, ExerciseMode mode)
        : grid_(grid), sp_(sp), gamma_(gamma), spec_(spec), mode_(mode) {}

    double value(int k, int row, int n) const {
        const int big_n = grid_.n_steps();
        const int bottom = grid_.n_rows() - 1;
        const double pay = std::max(grid_.value(row) - spec_.strike, 0.0);
        if (n == big_n || row == 0) return k * pay;

        const int down = row == bottom ? bottom : row + 1;
        auto cont = [&](int j) {
            return price_g({value(j, row - 1, n + 1), value(j, down, n + 1)}, sp_, gamma_);
        };
        if (row == bottom) return cont(k);

        double best = cont(k);
        if (mode_ == ExerciseMode::Partial) {
            for (int a = 1; a <= k; ++a) best = std::max(best, a * pay + cont(k - a));
        } else if (k > 0) {
            best = std::max(best, k * pay + cont(0));
        }
        return best;
    }

private:
    const Grid& grid_;
    const StepParams& sp_;
    RiskAversion gamma_;
    const OptionSpec& spec_;
    ExerciseMode mode_;
};

}  // namespace

ValueTable naive_value(const Grid& grid, const StepParams& sp, RiskAversion gamma, const OptionSpec& spec,
                       ExerciseMode mode) {
    if (grid.n_steps() > 6 || spec.a_total > 4) throw SizeGuard("naive recursion limited to N <= 6 and A <= 4");
    spec.validate();
    const Recursion rec(grid, sp, gamma, spec, mode);
    ValueTable table(spec.a_total, grid.n_steps(), true);
    for (int n = 0; n <= grid.n_steps(); ++n)
        for (int row = 0; row < grid.n_rows(); ++row)
            for (int k = 0; k <= spec.a_total; ++k) table.at(k, row, n) = rec.value(k, row, n);
    return table;
}

}  // namespace esopt::reference
