#ifndef HYPERCS_ERRORS_HPP
#define HYPERCS_ERRORS_HPP

#include <stdexcept>

namespace hypercs {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// input problems (ValidationError and friends) exit with 1, numerical
// failures (divergence, unreachable tolerance, quadrature) with 2.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected model parameters or malformed textual input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a scalar function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Mismatched truncation levels or parameter sets between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Requested Fock level above the truncation of the target space.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// Series argument at or beyond the radius of convergence.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Tolerance unreachable within the iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature exceeded its node budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Measure kernel not available in elementary form for this family.
class UnsupportedKernelError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypercs

#endif
