#pragma once

#include <stdexcept>
#include <string>

namespace esopt {

/// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Calibration produced a joint probability outside [0, 1].
class InfeasibleProbabilities : public Error {
public:
    InfeasibleProbabilities(std::string which, double value);

    const std::string& which() const noexcept { return which_; }
    double value() const noexcept { return value_; }

private:
    std::string which_;
    double value_;
};

/// One S-branch of the joint law carries zero mass.
class DegenerateBranch : public Error {
public:
    using Error::Error;
};

/// Exercise value never catches the continuation value inside the search bracket.
class NoThreshold : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class EmptyPolicy : public Error {
public:
    using Error::Error;
};

class InconsistentGrid : public Error {
public:
    using Error::Error;
};

/// Input too large for an exponential-time reference evaluator.
class SizeGuard : public Error {
public:
    using Error::Error;
};

/// Invalid or incomplete run configuration. `field` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message);

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace esopt
