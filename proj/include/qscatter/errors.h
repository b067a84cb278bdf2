#ifndef QSCATTER_ERRORS_H
#define QSCATTER_ERRORS_H

#include <stdexcept>
#include <string>

namespace qscatter {

/// Argument outside the mathematical domain of an operation (index out of
/// range, non-positive wavenumber, duplicate qubit, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Input that is in-domain but fails a numerical validity check (non-unitary
/// gate, non-finite potential sample, excessive negative-momentum weight).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A physical precondition of the simulation does not hold.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transfer matrix with vanishing M11 (total reflection).
struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// (R, T) not consistent with a parity-symmetric potential.
struct AsymmetryError : PreconditionError {
    using PreconditionError::PreconditionError;
};

/// Reference amplitude too small to define a relative phase.
struct UndefinedPhaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qscatter

#endif
