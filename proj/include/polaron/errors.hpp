#pragma once

#include <stdexcept>
#include <string>

namespace polaron {

// Exit codes used by the command line front end.
enum class ExitCode : int { ok = 0, usage = 2, precondition = 3, accuracy = 4, numeric = 5 };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const { return ExitCode::numeric; }
};

/// An input lies outside the domain of a formula (non-positive radicand, z = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::precondition; }
};

/// The kernel was evaluated exactly at its pole.
class SingularPointError : public DomainError {
public:
    using DomainError::DomainError;
};

class PreconditionError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::precondition; }
};

/// Λ(m) >= 1: the stability bounds do not apply.
class StabilityRegimeError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// 1 - κ/c_T <= Λ(m), or N <= N0.
class ConditionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Refinement did not reach the requested tolerance. Carries the best estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}
    ExitCode exit_code() const override { return ExitCode::accuracy; }
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// The supremum search could not locate an interior or boundary maximum.
class SearchError : public AccuracyError {
public:
    SearchError(const std::string& what, double estimate, std::string grid_dump)
        : AccuracyError(what, estimate, 0.0), grid_dump_(std::move(grid_dump)) {}
    const std::string& grid_dump() const { return grid_dump_; }

private:
    std::string grid_dump_;
};

class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace polaron
