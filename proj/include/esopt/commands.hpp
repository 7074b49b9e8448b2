#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "esopt/config.hpp"
#include "esopt/exercise.hpp"
#include "esopt/lattice.hpp"
#include "esopt/montecarlo.hpp"

namespace esopt {

/// "%.17g" formatting used for every number written to CSV or JSON text.
std::string format_number(double x);

struct PriceReport {
    StepParams step;
    EmployeeValue employee;
    double merton_hedge = 0.0;
    double bs_discounted = 0.0;
    double bs_standard = 0.0;
    double surface_inconsistency = 0.0;
};

PriceReport run_price(const RunConfig& cfg);
nlohmann::json to_json(const PriceReport& report);

struct SurfaceResult {
    std::vector<double> y_values;            // one per grid row, highest first
    std::vector<std::vector<int>> surface;   // [row][n]
};

SurfaceResult run_surface(const RunConfig& cfg);
std::string surface_csv(const SurfaceResult& result);

struct ThresholdRow {
    int a_count = 0;
    std::optional<double> complete;      // p2 = p3 = 0
    std::optional<double> intermediate;  // rho = threshold.rho_mid
    std::optional<double> uncorrelated;  // rho = 0
};

std::vector<ThresholdRow> run_threshold(const RunConfig& cfg);
std::string threshold_csv(const std::vector<ThresholdRow>& rows);

struct FirmCostReport {
    int a_total = 0;
    EmployeeValue employee;
    CostEstimate cost;
    double bs_discounted = 0.0;
    double bs_standard = 0.0;
    double surface_inconsistency = 0.0;
};

FirmCostReport run_firm_cost(const RunConfig& cfg);
nlohmann::json to_json(const FirmCostReport& report);

struct SweepPoint {
    double x = 0.0;
    bool feasible = false;
    double partial = 0.0;       // per-unit value, partial exercise
    double constrained = 0.0;   // per-unit value, all-or-nothing exercise
    double bs_discounted = 0.0;
    double bs_standard = 0.0;
    std::string note;
};

/// Evaluates every sweep point; infeasible calibrations become gaps. Results are
/// ordered by sweep index whatever the number of threads.
std::vector<SweepPoint> run_sweep(const RunConfig& cfg);
std::string sweep_csv(const std::vector<SweepPoint>& points);

/// Largest |v(rho) - v(-rho)| / v(rho), rho > 0, over sweep pairs present on both sides.
std::optional<double> rho_asymmetry(const std::vector<SweepPoint>& points);

/// Writes `content` to dir/name, creating dir if needed.
void write_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace esopt
