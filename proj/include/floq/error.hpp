#ifndef FLOQ_ERROR_HPP
#define FLOQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace floq {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected input: violated precondition or type invariant.
struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// Problem size exceeds a configured resource limit.
struct ResourceLimit : Error {
    explicit ResourceLimit(const std::string& msg) : Error(msg) {}
};

// A numerical procedure failed to reach its target (solver breakdown,
// unresolved assignment, grid too coarse, ...).
struct NumericFailure : Error {
    explicit NumericFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace floq

#endif
