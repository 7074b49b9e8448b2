#pragma once

#include <cstdint>
#include <limits>

#include "esopt/exercise.hpp"
#include "esopt/lattice.hpp"

namespace esopt {

struct SimConfig {
    long long n_paths = 100000;
    std::uint64_t seed = 0;
    /// Pairs path 2j with the mirrored normals of path 2j+1. n_paths must then be even.
    bool antithetic = false;
    int threads = 1;
};

/// Mean and standard error of the simulated firm payout. With antithetic
/// sampling the standard error is taken over pair averages.
struct CostEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long n_paths = 0;
};

/// Counter-based generator: output j of stream `key` is a SplitMix64 finalizer
/// applied to key-derived state plus j times the golden-ratio increment. Any
/// (seed, path) pair can be generated independently of all others.
class PathRng {
public:
    using result_type = std::uint64_t;

    PathRng(std::uint64_t seed, std::uint64_t path);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

private:
    std::uint64_t state_;
};

/// Firm cost of the option package: risk-neutral Monte Carlo of Y executing
/// `policy` on the nearest grid node at every step, paying (Y - K)^+ on the
/// simulated Y for each exercised option.
CostEstimate simulate_cost(const PolicyTable& policy, const Grid& grid, const ContinuousParams& cp,
                           const OptionSpec& spec, const SimConfig& sim);

inline int snap_to_grid(double y, const Grid& grid) { return grid.snap(y); }

}  // namespace esopt
