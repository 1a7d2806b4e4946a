#pragma once

#include <stdexcept>

namespace qcf {

// Argument outside its documented range.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Register too large or wrong qubit count for the operation.
struct SizeError : std::length_error {
    using std::length_error::length_error;
};

struct NonPhysicalError : std::domain_error {
    using std::domain_error::domain_error;
};

// Solver / eigensolver failure.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qcf
