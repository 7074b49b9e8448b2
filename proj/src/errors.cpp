#include "esopt/errors.hpp"

#include <cstdio>

namespace esopt {

namespace {

std::string describe_probability(const std::string& which, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return "infeasible calibration: " + which + " = " + buf + " lies outside [0, 1]";
}

}  // namespace

InfeasibleProbabilities::InfeasibleProbabilities(std::string which, double value)
    : Error(describe_probability(which, value)), which_(std::move(which)), value_(value) {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field + ": " + message), field_(std::move(field)) {}

}  // namespace esopt
