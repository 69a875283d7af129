#pragma once

#include <stdexcept>
#include <string>

namespace gme {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An input exceeds a configured size (party count, tensor terms, ...).
class SizeLimitError : public Error {
   public:
    using Error::Error;
};

/// Arguments live on different party sets, unknown labels, malformed text.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// A refinement-order precondition (kappa <= pi) does not hold.
class OrderError : public Error {
   public:
    using Error::Error;
};

/// A structural contract is violated (zero-sum tensors, Kraus completeness, additivity flags).
class ContractError : public Error {
   public:
    using Error::Error;
};

/// A quantity that must be positive-real is not (logarithmic multi-invariants, eigenvalues).
class PositivityError : public Error {
   public:
    using Error::Error;
};

}  // namespace gme
