#pragma once

#include <stdexcept>
#include <string>

namespace hopdim {

/// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented bound (n > n_ru, pf outside (0,1), ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// No divisor pair (p, q) of n_ru with p >= n and q >= n.
class NoFactorizationError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Full enumeration was refused because the joint pattern space is too big.
class StateSpaceError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Argument outside the domain of a special function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Result does not fit the integer range used for resource counts.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Too few Monte-Carlo samples to resolve the requested failure target.
class StatisticalPreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant (e.g. a non-monotone search bracket).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hopdim
