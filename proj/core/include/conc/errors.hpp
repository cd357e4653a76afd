#pragma once

#include <stdexcept>
#include <string>

namespace conc {

// Argument outside the mathematical domain of an operation (negative scale,
// alpha <= 0, zeta <= 4, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Structurally invalid input: mismatched dimensions, non-stochastic matrices,
// partitions that violate admissibility, empty grids.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The interval (T/(n+1), T/n] contains no integer block length.
class BlockingInfeasible : public std::runtime_error {
public:
    BlockingInfeasible(long long T, long long n)
        : std::runtime_error("blocking infeasible: no integer M with T/(n+1) < M <= T/n for T=" +
                             std::to_string(T) + ", n=" + std::to_string(n)),
          T_(T), n_(n) {}

    long long T() const noexcept { return T_; }
    long long n() const noexcept { return n_; }

private:
    long long T_;
    long long n_;
};

// Every restart of an optimizer produced a non-finite objective.
class TrainingFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Experiment / CLI configuration could not be validated.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace conc
