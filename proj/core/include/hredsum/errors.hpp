#pragma once

#include <stdexcept>
#include <string>

namespace hredsum {

// Violated precondition or shape contract.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape mismatch between operands; message names both shapes.
struct DimensionError : ContractError {
    using ContractError::ContractError;
};

// Input that is syntactically valid but has no defined result
// (all positions masked, zero attention denominator, ...).
struct DegenerateInputError : ContractError {
    using ContractError::ContractError;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable, truncated, or version-mismatched checkpoint.
struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hredsum
