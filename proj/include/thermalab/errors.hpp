#pragma once

#include <stdexcept>

namespace thermalab {

// Failure modes callers may want to catch individually. Plain argument
// mistakes use std::invalid_argument directly.
struct DimensionGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnattainableEnergyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CacheCorruptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateDistributionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BasisMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace thermalab
