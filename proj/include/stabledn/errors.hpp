#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stabledn {

/// A distribution or configuration parameter is outside its admissible domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument is incompatible with the data it refers to (lag too large, series too short).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Vector or matrix dimensions do not agree.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The autoregressive specification violates causality.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// FLOC-based estimators are only defined here for order p >= 2.
class UnsupportedOrderError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear system is singular or too badly conditioned to trust its solution.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}

    /// Estimated 1-norm condition number of the offending matrix (inf if singular).
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// The sample moments do not admit the errors-in-variables search interval.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
class TrainingDivergence : public std::runtime_error {
public:
    TrainingDivergence(const std::string& what, std::size_t epoch)
        : std::runtime_error(what), epoch_(epoch) {}

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

/// File could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stabledn
