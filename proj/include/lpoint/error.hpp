#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpoint {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated operation precondition (bad argument, off-axis k, unknown name).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Iterative method did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual, std::size_t where = 0)
        : Error(what), last_residual_(last_residual), where_(where) {}

    double last_residual() const noexcept { return last_residual_; }
    // k-point index for eigensolver failures, iteration count for field solves.
    std::size_t where() const noexcept { return where_; }

private:
    double last_residual_;
    std::size_t where_;
};

// File could not be created or written.
class IoError : public Error {
public:
    using Error::Error;
};

class NotImplementedError : public Error {
public:
    using Error::Error;
};

}  // namespace lpoint
