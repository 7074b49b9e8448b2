#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "esopt/kernel.hpp"
#include "esopt/lattice.hpp"

namespace esopt {

/// A package of identical American calls on Y.
struct OptionSpec {
    int a_total = 0;
    double strike = 0.0;

    void validate() const;
};

enum class ExerciseMode {
    Partial,      // any integer count 0..k
    Constrained,  // all or nothing
};

/// Integer exercise counts a[k][row][n] for holdings k = 0..A,
/// grid rows 0..2N (row 0 = highest Y) and time steps n = 0..N.
class PolicyTable {
public:
    PolicyTable() = default;
    PolicyTable(int a_total, int n_steps);

    int a_total() const noexcept { return a_total_; }
    int n_steps() const noexcept { return n_steps_; }
    int n_rows() const noexcept { return 2 * n_steps_ + 1; }

    std::int32_t at(int k, int row, int n) const { return cells_[index(k, row, n)]; }
    std::int32_t& at(int k, int row, int n) { return cells_[index(k, row, n)]; }

    /// Policy that only exercises at maturity, and then every in-the-money option.
    static PolicyTable hold_to_maturity(const Grid& grid, const OptionSpec& spec);

private:
    std::size_t index(int k, int row, int n) const;

    int a_total_ = 0;
    int n_steps_ = 0;
    std::vector<std::int32_t> cells_;
};

/// Package values c[k][row][n]. Either every time column is retained, or only n = 0.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(int a_total, int n_steps, bool full);

    int a_total() const noexcept { return a_total_; }
    int n_steps() const noexcept { return n_steps_; }
    int n_rows() const noexcept { return 2 * n_steps_ + 1; }
    bool full() const noexcept { return full_; }
    bool has_column(int n) const noexcept { return full_ ? (n >= 0 && n <= n_steps_) : n == 0; }

    /// Throws std::out_of_range for a column that was not retained.
    double at(int k, int row, int n) const { return cells_[index(k, row, n)]; }
    double& at(int k, int row, int n) { return cells_[index(k, row, n)]; }

private:
    std::size_t index(int k, int row, int n) const;

    int a_total_ = 0;
    int n_steps_ = 0;
    bool full_ = true;
    std::vector<double> cells_;
};

struct SolveOptions {
    bool keep_values = true;  // retain all time columns of the value table
    int threads = 1;          // workers per time column; output does not depend on it
};

struct Solution {
    PolicyTable policy;
    ValueTable values;
};

/// Backward dynamic program over holdings, grid rows and time.
/// Throws DimensionMismatch if grid and step parameters disagree on h or N.
Solution solve(const Grid& grid, const StepParams& sp, RiskAversion gamma, const OptionSpec& spec,
               ExerciseMode mode, const SolveOptions& options = {});

struct EmployeeValue {
    double package = 0.0;
    double per_unit = 0.0;
};

/// Root value of the full package (center row, time 0).
EmployeeValue employee_value(const ValueTable& values, const OptionSpec& spec);

/// Number of options still held after optimal exercise, starting from the full
/// package: surface[row][n] = A - a[A][row][n].
std::vector<std::vector<int>> critical_surface(const PolicyTable& policy, const OptionSpec& spec);

/// Rows reachable at time n from the center: [N - n, N + n].
inline bool reachable(int n_steps, int row, int n) {
    return row >= n_steps - n && row <= n_steps + n && ((row - n_steps + n) % 2 == 0);
}

/// Fraction of reachable nodes (all holdings) where m - a[m] differs from the
/// projection of the full-package surface, max(0, min(m, A - a[A])).
double surface_inconsistency(const PolicyTable& policy);

}  // namespace esopt
