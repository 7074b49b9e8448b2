#include "esopt/exercise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "esopt/errors.hpp"

namespace esopt {

void OptionSpec::validate() const {
    if (a_total < 1) throw std::invalid_argument("a_total must be >= 1");
    if (!(strike > 0.0)) throw std::invalid_argument("strike must be > 0");
}

PolicyTable::PolicyTable(int a_total, int n_steps)
    : a_total_(a_total),
      n_steps_(n_steps),
      cells_(static_cast<std::size_t>(a_total + 1) * static_cast<std::size_t>(2 * n_steps + 1) *
                 static_cast<std::size_t>(n_steps + 1),
             0) {}

std::size_t PolicyTable::index(int k, int row, int n) const {
    if (k < 0 || k > a_total_ || row < 0 || row >= n_rows() || n < 0 || n > n_steps_)
        throw std::out_of_range("policy index out of range");
    return (static_cast<std::size_t>(n) * static_cast<std::size_t>(a_total_ + 1) + static_cast<std::size_t>(k)) *
               static_cast<std::size_t>(n_rows()) +
           static_cast<std::size_t>(row);
}

PolicyTable PolicyTable::hold_to_maturity(const Grid& grid, const OptionSpec& spec) {
    PolicyTable table(spec.a_total, grid.n_steps());
    const int n = grid.n_steps();
    for (int row = 0; row < grid.n_rows(); ++row) {
        if (grid.value(row) < spec.strike) continue;
        for (int k = 0; k <= spec.a_total; ++k) table.at(k, row, n) = k;
    }
    return table;
}

ValueTable::ValueTable(int a_total, int n_steps, bool full)
    : a_total_(a_total),
      n_steps_(n_steps),
      full_(full),
      cells_(static_cast<std::size_t>(a_total + 1) * static_cast<std::size_t>(2 * n_steps + 1) *
                 static_cast<std::size_t>(full ? n_steps + 1 : 1),
             0.0) {}

std::size_t ValueTable::index(int k, int row, int n) const {
    if (k < 0 || k > a_total_ || row < 0 || row >= n_rows() || !has_column(n))
        throw std::out_of_range("value index out of range");
    const std::size_t column = full_ ? static_cast<std::size_t>(n) : 0;
    return (column * static_cast<std::size_t>(a_total_ + 1) + static_cast<std::size_t>(k)) *
               static_cast<std::size_t>(n_rows()) +
           static_cast<std::size_t>(row);
}

namespace {

// One (k x row) slab of values at a single time step.
struct Column {
    int rows;
    std::vector<double> c;
    Column(int a_total, int n_rows)
        : rows(n_rows), c(static_cast<std::size_t>(a_total + 1) * static_cast<std::size_t>(n_rows), 0.0) {}
    double& at(int k, int row) { return c[static_cast<std::size_t>(k) * rows + row]; }
    double at(int k, int row) const { return c[static_cast<std::size_t>(k) * rows + row]; }
};

void check_consistency(const Grid& grid, const StepParams& sp) {
    if (std::abs(grid.h() - sp.h) > 1e-12 * sp.h)
        throw DimensionMismatch("grid multiplier h does not match the step parameters");
    if (std::abs(grid.h() * sp.ell - 1.0) > 1e-12)
        throw DimensionMismatch("grid requires ell = 1/h");
}

}  // namespace

Solution solve(const Grid& grid, const StepParams& sp, RiskAversion gamma, const OptionSpec& spec,
               ExerciseMode mode, const SolveOptions& options) {
    spec.validate();
    check_consistency(grid, sp);
    if (!(sp.p1 + sp.p2 > 0.0) || !(sp.p3 + sp.p4 > 0.0))
        throw DegenerateBranch("joint law has an S-branch with zero probability");

    const int big_n = grid.n_steps();
    const int rows = grid.n_rows();
    const int a_total = spec.a_total;
    const int bottom = rows - 1;

    Solution out{PolicyTable(a_total, big_n), ValueTable(a_total, big_n, options.keep_values)};
    PolicyTable& policy = out.policy;

    std::vector<double> payoff(static_cast<std::size_t>(rows));
    for (int row = 0; row < rows; ++row) payoff[row] = std::max(grid.value(row) - spec.strike, 0.0);

    Column next(a_total, rows);
    Column cur(a_total, rows);

    auto store = [&](const Column& col, int n) {
        if (!out.values.has_column(n)) return;
        for (int k = 0; k <= a_total; ++k)
            for (int row = 0; row < rows; ++row) out.values.at(k, row, n) = col.at(k, row);
    };

    // Maturity: exercise everything in the money.
    for (int row = 0; row < rows; ++row) {
        const bool itm = grid.value(row) >= spec.strike;
        for (int k = 0; k <= a_total; ++k) {
            policy.at(k, row, big_n) = itm ? k : 0;
            next.at(k, row) = k * payoff[row];
        }
    }
    store(next, big_n);

    // Rows [first, last) of time column n.
    auto sweep_rows = [&](int n, int first, int last) {
        std::vector<double> cont(static_cast<std::size_t>(a_total + 1));
        for (int row = first; row < last; ++row) {
            if (row == 0) {
                for (int k = 0; k <= a_total; ++k) {
                    policy.at(k, 0, n) = k;
                    cur.at(k, 0) = k * payoff[0];
                }
                continue;
            }
            // Y-up child is one row above; the bottom row reuses itself as its down child.
            const int up = row - 1;
            const int down = row == bottom ? bottom : row + 1;
            for (int j = 0; j <= a_total; ++j)
                cont[j] = price_g({next.at(j, up), next.at(j, down)}, sp, gamma);

            if (row == bottom) {
                for (int k = 0; k <= a_total; ++k) {
                    policy.at(k, row, n) = 0;
                    cur.at(k, row) = cont[k];
                }
                continue;
            }

            const double pay = payoff[row];
            for (int k = 0; k <= a_total; ++k) {
                int best_a = 0;
                double best = cont[k];
                if (mode == ExerciseMode::Partial) {
                    for (int a = 1; a <= k; ++a) {
                        const double v = a * pay + cont[k - a];
                        if (v > best) {
                            best = v;
                            best_a = a;
                        }
                    }
                } else if (k > 0) {
                    const double v = k * pay + cont[0];
                    if (v > best) {
                        best = v;
                        best_a = k;
                    }
                }
                policy.at(k, row, n) = best_a;
                cur.at(k, row) = best;
            }
        }
    };

    const int workers = std::clamp(options.threads, 1, rows);
    for (int n = big_n - 1; n >= 0; --n) {
        if (workers == 1) {
            sweep_rows(n, 0, rows);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                const int first = rows * w / workers;
                const int last = rows * (w + 1) / workers;
                pool.emplace_back([&, n, first, last] { sweep_rows(n, first, last); });
            }
        }
        store(cur, n);
        std::swap(cur, next);
    }
    return out;
}

EmployeeValue employee_value(const ValueTable& values, const OptionSpec& spec) {
    if (spec.a_total == 0) return {0.0, 0.0};
    const double package = values.at(spec.a_total, values.n_steps(), 0);
    return {package, package / spec.a_total};
}

std::vector<std::vector<int>> critical_surface(const PolicyTable& policy, const OptionSpec& spec) {
    const int a_total = spec.a_total;
    std::vector<std::vector<int>> surface(static_cast<std::size_t>(policy.n_rows()),
                                          std::vector<int>(static_cast<std::size_t>(policy.n_steps() + 1)));
    for (int row = 0; row < policy.n_rows(); ++row)
        for (int n = 0; n <= policy.n_steps(); ++n) surface[row][n] = a_total - policy.at(a_total, row, n);
    return surface;
}

double surface_inconsistency(const PolicyTable& policy) {
    const int a_total = policy.a_total();
    const int big_n = policy.n_steps();
    long long total = 0;
    long long mismatched = 0;
    for (int n = 0; n <= big_n; ++n) {
        for (int row = big_n - n; row <= big_n + n; row += 2) {
            const int target = a_total - policy.at(a_total, row, n);
            for (int m = 0; m <= a_total; ++m) {
                const int kept = m - policy.at(m, row, n);
                ++total;
                if (kept != std::max(0, std::min(m, target))) ++mismatched;
            }
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(mismatched) / static_cast<double>(total);
}

}  // namespace esopt
