#pragma once

#include <stdexcept>
#include <string>

namespace dpnls {

// Input outside the mathematical domain of an operation (bad exponents,
// frequency out of range, malformed grids). Maps to CLI exit code 2.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A computation started on valid input but could not reach the requested
// accuracy or failed to converge. Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency check failed (two independent computations of the
// same quantity disagree). Always a bug. Maps to CLI exit code 4.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace dpnls
