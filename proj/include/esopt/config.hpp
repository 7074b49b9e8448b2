#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "esopt/exercise.hpp"
#include "esopt/lattice.hpp"
#include "esopt/montecarlo.hpp"

namespace esopt {

enum class SweepAxis { Maturity, Gamma, Volatility, Rho, PackageSize };

const char* to_string(SweepAxis axis);
const char* to_string(ExerciseMode mode);

struct SweepSpec {
    SweepAxis axis = SweepAxis::Gamma;
    std::vector<double> values;
};

/// One-period threshold table: Y*(A) for A = 1..a_max at three correlation levels.
struct ThresholdSpec {
    int a_max = 20;
    double strike = 2.0;
    double gamma = 1.0;
    double dt = 1.0;
    double rho_mid = 0.5;
};

struct RunConfig {
    ContinuousParams market;
    OptionSpec option;
    double gamma = 0.5;
    int n_steps = 100;
    ExerciseMode mode = ExerciseMode::Partial;
    std::optional<SweepSpec> sweep;
    SimConfig mc;
    ThresholdSpec threshold;
    std::string output_dir = "out";

    /// Fully resolved configuration, echoed into every JSON summary.
    nlohmann::json resolved;
};

/// Names of the shipped parameter sets.
std::vector<std::string> preset_names();

/// Raw JSON of a preset. Throws ConfigError for an unknown name.
nlohmann::json preset(const std::string& name);

/// Validates and converts a JSON configuration. Throws ConfigError naming the
/// first missing or invalid field.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file. Throws ConfigError on I/O or syntax errors.
nlohmann::json load_config_file(const std::string& path);

}  // namespace esopt
