#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace quasispec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated: bad parameters, wrong model shape, invalid input.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation left the representable range of double precision.
class NumericRangeError : public Error {
public:
    using Error::Error;
};

/// The cohomological equation hit a divisor below the configured floor.
class SmallDivisorError : public Error {
public:
    SmallDivisorError(std::int64_t mode, double divisor, double floor)
        : Error("solve_cohomological: divisor |e^{i n step} - 1| = " + std::to_string(divisor) +
                " at mode n = " + std::to_string(mode) + " is below the floor " +
                std::to_string(floor)),
          mode_(mode), divisor_(divisor) {}

    std::int64_t mode() const noexcept { return mode_; }
    double divisor() const noexcept { return divisor_; }

private:
    std::int64_t mode_;
    double divisor_;
};

/// A Liouville construction would need integers beyond the exact-arithmetic budget.
class BudgetExceededError : public Error {
public:
    BudgetExceededError(const std::string& what, int achieved_level)
        : Error(what), achieved_level_(achieved_level) {}

    int achieved_level() const noexcept { return achieved_level_; }

private:
    int achieved_level_;
};

} // namespace quasispec
