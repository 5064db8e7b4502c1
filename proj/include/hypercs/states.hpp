#ifndef HYPERCS_STATES_HPP
#define HYPERCS_STATES_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "hypercs/fock.hpp"
#include "hypercs/specfun.hpp"

namespace hypercs {

/// Composite label Z = eps * z + lam * sigma for shifted-argument states.
/// eps and lam are arbitrary reals (negative values included).
struct ShiftSpec {
  double eps = 1.0;
  Complex z{};
  double lam = 0.0;
  Complex sigma{};

  Complex label() const { return eps * z + lam * sigma; }
};

/// Generalized Newton binomial [x + y]^l together with its n-indexed
/// summands: terms[n] = func_binom(l, n) x^(l-n) y^n.
struct BinomialPower {
  std::size_t l = 0;
  Complex value{};
  std::vector<Complex> terms;
};

struct StateOptions {
  double tol = 1e-10;
  std::optional<std::size_t> trunc;  // force the truncation level
  std::size_t max_trunc = 2048;
};

/// Coherent state defined as the annihilation eigenvector: coefficients
/// z^n / (sqrt(rho(n)) sqrt(pFq(|z|^2))).  Truncation is chosen so the
/// geometric bound on the discarded amplitude stays below tol.
StateVector bg_state(const ModelParams& params, Complex z, const StateOptions& opts = {});

/// Displacement-type coherent state of the dual family: coefficients
/// z^n / sqrt(rho_KP(n)) with rho_KP(n) = (n!)^2 / rho(n).  For the dual
/// family p and q swap, so e.g. the (0,1) family needs |z|^2 < 1 here.
StateVector kp_state(const ModelParams& params, Complex z, const StateOptions& opts = {});

struct OverlapResult {
  Complex kernel;       // pFq(conj(z) w) / sqrt(pFq(|z|^2) pFq(|w|^2))
  Complex coefficient;  // inner product of the truncated expansions
  double gap;
};

OverlapResult overlap_detail(const ModelParams& params, Complex z, Complex w,
                             const StateOptions& opts = {});
Complex overlap(const ModelParams& params, Complex z, Complex w, const StateOptions& opts = {});

/// || A_- |z> - z |z> || on the truncated space.
double annihilation_residual(const ModelParams& params, Complex z, const StateOptions& opts = {});

/// Bound on the annihilation residual implied by a state's recorded
/// truncation tail: sqrt(tail_bound * e(N+1)).
double annihilation_residual_bound(const StateVector& state);

BinomialPower gen_binom_power(const ModelParams& params, Complex x, Complex y, std::size_t l);

struct ShiftedState {
  StateVector state;
  double norm_module;   // N(z,s) = sum_l |[eps z + lam s]^l|^2 / rho(l)
  double norm_literal;  // pFq(|eps z + lam s|^2); NaN when divergent
  double norm_gap;      // |literal - module| / module; NaN when literal is NaN
};

/// Shifted-argument state: coefficients [eps z + lam s]^l / sqrt(rho(l)),
/// normalized by the module norm N(z,s), which keeps <Z|Z> = 1 term by
/// term.  The literal pFq normalization is reported as a diagnostic; the
/// two agree exactly in the canonical limit.
ShiftedState shifted_state_detail(const ModelParams& params, const ShiftSpec& shift,
                                  const StateOptions& opts = {});
StateVector shifted_state(const ModelParams& params, const ShiftSpec& shift,
                          const StateOptions& opts = {});

struct SequentialDisplacement {
  StateVector state;         // normalized D(lam sigma) D(eps z) |0>
  double proportionality;    // measured norm of the unnormalized product
  double predicted;          // sqrt(N(z,s)) / sqrt(pFq(|eps z|^2) pFq(|lam s|^2))
};

/// Applies pFq(lam sigma A_+) / sqrt(pFq(|lam sigma|^2)) to bg_state(eps z)
/// on the truncated space.  The normalized result must match
/// shifted_state entrywise; the measured factor must match `predicted`.
SequentialDisplacement sequential_displacement(const ModelParams& params, const ShiftSpec& shift,
                                               const StateOptions& opts = {});

struct DisplacementDiagonal {
  Complex formula;         // pFq(z s*) pFq(z* s) / (sqrt(pFq(|z|^2)) pFq(|s|^2))
  Complex matrix_element;  // truncated operator route, A_- factors first
  double gap;
};

DisplacementDiagonal displacement_diagonal_detail(const ModelParams& params, Complex z,
                                                  Complex sigma, const StateOptions& opts = {});
Complex displacement_diagonal(const ModelParams& params, Complex z, Complex sigma,
                              const StateOptions& opts = {});

/// sum_m (w^m / rho(m)) A_-^m v, evaluated by repeated lowering.  Exact on
/// the truncated space (the sum terminates at m = trunc).
StateVector apply_pfq_lowering(const StructureTable& table, Complex w, const StateVector& v);

}  // namespace hypercs

#endif
