#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace expdyn {

// Rejected constructor or configuration argument.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Sequence queried at an index it does not define.
struct UndefinedIndex : std::out_of_range {
    explicit UndefinedIndex(std::uint64_t n)
        : std::out_of_range("sequence has no value at index " + std::to_string(n)), index(n) {}
    std::uint64_t index;
};

// Iterate crossed the exp() overflow guard.
struct OverflowGuard : std::runtime_error {
    explicit OverflowGuard(std::uint64_t at)
        : std::runtime_error("orbit overflow at step " + std::to_string(at)), step(at) {}
    std::uint64_t step;
};

// Adaptive construction could not place the next block boundary.
struct ConstructionFailure : std::runtime_error {
    ConstructionFailure(std::uint64_t at, const std::string& what)
        : std::runtime_error("construction failed at step " + std::to_string(at) + ": " + what),
          step(at) {}
    std::uint64_t step;
};

}  // namespace expdyn
