#ifndef HYPERCS_KERNELS_HPP
#define HYPERCS_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "hypercs/model.hpp"
#include "hypercs/specfun.hpp"

namespace hypercs {

/// Integration measure of a family represented through its Stieltjes
/// moments: moment(l) = Gamma(b~/a~) rho(l), all Gamma products in log
/// domain.  The normalization is Gamma(b~/a~) = prod Gamma(b_j) / prod
/// Gamma(a_i), the l = 0 moment.
struct MomentFunctional {
  ModelParams params;
  double normalization;
  double normalization_log;

  explicit MomentFunctional(ModelParams p);
};

double moment_exact(const MomentFunctional& mf, std::size_t l);
double moment_exact_log(const MomentFunctional& mf, std::size_t l);

/// Whether the radial measure kernel has an elementary form: exp(-x) for
/// canonical-equivalent families, 2 x^((b-1)/2) K_{b-1}(2 sqrt(x)) for
/// (p, q) = (0, 1).
bool has_quadrature_kernel(const ModelParams& params);

/// The radial weight at x = |z|^2 for a supported family.
double measure_kernel(const ModelParams& params, double x);

/// Numerically integrates kernel(x) x^l over [0, inf); must agree with
/// moment_exact within tol.  Throws UnsupportedKernelError for families
/// without an elementary kernel.
double moment_quadrature(const ModelParams& params, std::size_t l, double tol);

struct ReproducingKernelReport {
  Complex lhs;  // moment-quadrature side
  Complex rhs;  // Gamma(b~/a~) pFq(uv)
  double rel_gap;
  bool passed;
};

/// Scalar reproducing-kernel identity with commuting ladder symbols:
/// int (d^2 z / pi) kernel(|z|^2) pFq(z u) pFq(z* v) = Gamma(b~/a~) pFq(uv),
/// angular part reduced analytically, radial moments by quadrature.
ReproducingKernelReport reproducing_kernel_check(const ModelParams& params, Complex u, Complex v,
                                                 double tol);

struct DerivativeKernelReport {
  std::size_t n = 0, m = 0;
  Complex integral;
  Complex closed_form;
  double abs_gap;
  double rel_gap;
  bool passed;
};

/// Canonical-family identity
/// int (d^2 z / pi) e^{-|z|^2} z^n z*^m e^{z u} e^{z* v}
///   = (d/du)^n (d/dv)^m e^{uv},
/// left side by full 2D polar quadrature (deliberately independent:
/// trapezoid angular rule plus adaptive radial), right side closed form.
DerivativeKernelReport derivative_kernel_check(const ModelParams& params, std::size_t n,
                                               std::size_t m, Complex u, Complex v, double tol);

struct SeriesIdentityRow {
  std::size_t l;
  double lhs;
  double rhs;
  double rel_gap;
};

struct SeriesIdentityReport {
  std::size_t n = 0, m = 0;
  std::vector<SeriesIdentityRow> rows;
  double max_rel_gap = 0.0;
  bool passed = false;
};

/// Term-wise scalar reduction of the z^n z*^m kernel integral: for each l
/// the moment-weighted coefficient rho-ratio equals the series
/// coefficient built from shifted Pochhammer products.  Pure arithmetic,
/// no quadrature.
SeriesIdentityReport series_identity_check(const ModelParams& params, std::size_t n, std::size_t m,
                                           std::size_t l_max, double tol = 1e-12);

struct ClosureReport {
  std::size_t l = 0;
  double closure_sum = 0.0;
  unsigned long long binom_sum = 0;
  unsigned long long binom_expected = 0;
  double gap = 0.0;
  bool passed = false;
};

/// Two-variable resolution-of-identity arithmetic: with the declared
/// integral values Int_z and Int_sigma, the weighted sum over n collapses
/// to 2^{-l} sum_n C(l,n) = 1, and sum_n C(l,n) = 2^l exactly.
ClosureReport two_variable_closure_check(const ModelParams& params, std::size_t l);

/// Diagonal of sum_l (moment(l)/Gamma(b~/a~)) (1/rho(l)) |l><l| on the
/// truncated space; every entry must equal 1.
std::vector<double> resolution_identity_diagonal(const ModelParams& params, std::size_t n_max);

}  // namespace hypercs

#endif
