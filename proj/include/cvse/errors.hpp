#pragma once

#include <stdexcept>

namespace cvse {

// Malformed argument or precondition violation.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numeric step failed beyond repair (e.g. singular covariance after
// regularization). The message carries the repetition/fold context.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A CVKM pair never co-occurred in a testing fold and the strict
// zero-denominator policy is active.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cvse
