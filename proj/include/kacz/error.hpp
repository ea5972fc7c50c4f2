#pragma once

#include <stdexcept>
#include <string>

namespace kacz {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-facing configuration: unknown names, out-of-range parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A matrix or block that must be regular is not (zero row, rank-deficient block).
class SingularityError : public Error {
public:
    using Error::Error;
};

/// The request exceeds a size guard (dense diagnostics, verification oracles).
class CapabilityError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

/// A sequence transformation hit a zero (or numerically negligible) denominator.
///
/// `condition()` carries the estimated condition number for linear-system
/// breakdowns and is infinite for recursive-table breakdowns, where
/// `cell()` names the offending entry instead.
class BreakdownError : public Error {
public:
    BreakdownError(const std::string& what, double condition, std::string cell = {})
        : Error(what), condition_(condition), cell_(std::move(cell)) {}

    double condition() const noexcept { return condition_; }
    const std::string& cell() const noexcept { return cell_; }

private:
    double condition_;
    std::string cell_;
};

}  // namespace kacz
