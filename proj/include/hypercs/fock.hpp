#ifndef HYPERCS_FOCK_HPP
#define HYPERCS_FOCK_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "hypercs/model.hpp"

namespace hypercs {

using Complex = std::complex<double>;

/// Truncated Fock-basis expansion.  coeffs[n] multiplies |n>, and
/// tail_bound is the constructor's bound on the weight discarded by the
/// truncation, so sum |coeffs|^2 = 1 +- tail_bound for normalized states.
struct StateVector {
  ModelParams params;
  std::vector<Complex> coeffs;
  double tail_bound = 0.0;

  std::size_t trunc() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

enum class LadderKind { raising, lowering };

/// Banded ladder operator on the truncated space.  band[n] = sqrt(e(n))
/// for n = 1..trunc+1; lowering sends |n> to sqrt(e(n)) |n-1>, raising
/// sends |n> to sqrt(e(n+1)) |n+1>.  The extra band entry at trunc+1
/// prices the amplitude a raise pushes past the truncation.
struct LadderOperator {
  ModelParams params;
  LadderKind kind = LadderKind::lowering;
  std::vector<double> band;
  std::size_t trunc = 0;
};

LadderOperator build_ladder(const ModelParams& params, std::size_t trunc, LadderKind kind);

/// Matrix-vector product.  Raising from the top level records the
/// discarded weight into the result's tail_bound instead of losing it
/// silently.  Throws ShapeError on mismatched truncation or params.
StateVector apply(const LadderOperator& op, const StateVector& v);

/// Unit vector at Fock level n.
StateVector basis_state(const ModelParams& params, std::size_t n, std::size_t trunc);

/// (A_+)^n |0> computed by n successive raises; equals sqrt(rho(n)) |n>.
StateVector raise_vacuum(const ModelParams& params, std::size_t n, std::size_t trunc);

/// <A_+ A_-> = sum_n e(n) |coeffs[n]|^2 for a normalized state.
double number_expectation(const StateVector& v);

Complex inner(const StateVector& u, const StateVector& v);
double norm(const StateVector& v);

}  // namespace hypercs

#endif
