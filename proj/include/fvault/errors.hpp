#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fvault {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent parameters (CLI exit code 2).
struct ParameterError : Error {
    using Error::Error;
};

// Secret does not fit into the polynomial for the chosen (k, crc).
struct CapacityError : ParameterError {
    using ParameterError::ParameterError;
};

// Violated operation precondition, e.g. duplicate abscissae.
struct PreconditionError : ParameterError {
    using ParameterError::ParameterError;
};

// Division or inversion by zero in F_q.
struct ArithmeticError : Error {
    using Error::Error;
};

// Malformed vault/template/truth file.
struct FormatError : ParameterError {
    using ParameterError::ParameterError;
};

// Rejection sampling could not place the requested number of points.
struct PlacementError : Error {
    PlacementError(const std::string& what, std::size_t achieved_count, std::size_t requested_count)
        : Error(what), achieved(achieved_count), requested(requested_count) {}
    std::size_t achieved;
    std::size_t requested;
};

// A genuine minutia found no free lattice site nearby.
struct SnappingError : Error {
    using Error::Error;
};

}  // namespace fvault
