#pragma once

#include <stdexcept>
#include <string>

namespace sdspace {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed; `offset` is the byte position.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct OrderMismatchError : Error {
    using Error::Error;
};

struct SingularPointError : Error {
    using Error::Error;
};

struct NonConvergenceError : Error {
    using Error::Error;
};

/// A gauge could not be resolved into a delta-fine partition.
struct GaugeError : Error {
    using Error::Error;
};

struct BudgetExceededError : Error {
    double partial;
    BudgetExceededError(const std::string& msg, double p) : Error(msg), partial(p) {}
};

struct DomainError : Error {
    using Error::Error;
};

}  // namespace sdspace
