#pragma once

#include <stdexcept>
#include <string>

namespace qtilt {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad input: invalid model, invalid parameters, malformed file.
struct ValidationError : Error {
    using Error::Error;
};

/// Malformed model file (carries line/field context in the message).
struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

/// An iterative solve did not reach its residual target within budget.
struct NonConvergence : Error {
    using Error::Error;
};

/// Operation requires a unifilar machine but the input is not.
struct NotUnifilar : Error {
    using Error::Error;
};

/// A word contains a symbol outside the machine's alphabet.
struct UnknownSymbol : ValidationError {
    using ValidationError::ValidationError;
};

/// Word has probability zero; its decay rate is undefined.
struct ForbiddenWord : Error {
    using Error::Error;
};

/// The tilting map is undefined at beta = 0.
struct BetaZero : ValidationError {
    using ValidationError::ValidationError;
};

/// An entrywise power left the representable double range.
struct Overflow : Error {
    using Error::Error;
};

/// Requested order fails the synchronization check.
struct MarkovOrderMismatch : Error {
    using Error::Error;
};

/// Signal states are (numerically) linearly dependent; construction aborts.
struct LinearlyDependentStates : Error {
    using Error::Error;
};

/// Constructed stationary state fails the channel fixed-point residual.
struct FixedPointViolation : Error {
    using Error::Error;
};

/// Input matrix is not a density matrix within tolerance.
struct NotDensityMatrix : ValidationError {
    using ValidationError::ValidationError;
};

/// Not enough samples in range for a fit.
struct InsufficientData : Error {
    using Error::Error;
};

/// Two independent computations of the same quantity disagree.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Word space A^R exceeds the supported dense-representation cap.
struct StateSpaceTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace qtilt
