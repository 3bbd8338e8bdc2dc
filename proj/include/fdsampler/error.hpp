#pragma once

#include <stdexcept>
#include <string>

namespace fds {

// Bad user input (mismatched dimensions, malformed files, out-of-range values).
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Parameter outside the mathematical domain of a transform.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Caller broke an operation precondition (e.g. duplicate edge insert).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Instance too large for brute-force enumeration.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Partition function of the system is zero; no distribution exists.
struct DegenerateSystem : std::runtime_error {
    explicit DegenerateSystem(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fds
