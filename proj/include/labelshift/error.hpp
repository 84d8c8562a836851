#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace labelshift {

/// Invalid configuration or argument (maps to CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for numerical failures (maps to CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The operator to invert has no usable spectrum; carries the singular values.
class SingularOperator : public NumericalError {
public:
    SingularOperator(const std::string& what, std::vector<double> spectrum)
        : NumericalError(what), spectrum_(std::move(spectrum)) {}

    const std::vector<double>& spectrum() const noexcept { return spectrum_; }

private:
    std::vector<double> spectrum_;
};

/// A symmetric solve failed even after jitter escalation.
class IllConditioned : public NumericalError {
public:
    IllConditioned(const std::string& what, double last_jitter)
        : NumericalError(what), last_jitter_(last_jitter) {}

    double last_jitter() const noexcept { return last_jitter_; }

private:
    double last_jitter_;
};

/// An iterative solver hit its iteration cap.
class NonConvergence : public NumericalError {
public:
    NonConvergence(const std::string& what, double objective_gap)
        : NumericalError(what), objective_gap_(objective_gap) {}

    double objective_gap() const noexcept { return objective_gap_; }

private:
    double objective_gap_;
};

}  // namespace labelshift
