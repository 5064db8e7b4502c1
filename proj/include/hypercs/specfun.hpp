#ifndef HYPERCS_SPECFUN_HPP
#define HYPERCS_SPECFUN_HPP

#include <complex>
#include <cstddef>
#include <functional>

#include "hypercs/model.hpp"

namespace hypercs {

using Complex = std::complex<double>;

/// Value of a truncated series together with the number of terms summed
/// and a geometric bound on the discarded remainder.
struct SeriesResult {
  Complex value{};
  std::size_t terms_used = 1;
  double tail_bound = 0.0;
};

inline constexpr std::size_t kSeriesMaxTerms = 10000;

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Rising factorial (x)_n = x (x+1) ... (x+n-1); empty product for n = 0.
/// Falls back to log-domain accumulation with sign tracking when the
/// direct product overflows.
double pochhammer(double x, std::size_t n);

/// ln |(x)_n| with the sign returned separately (0 when the product
/// vanishes, in which case -inf is returned).
double log_abs_pochhammer(double x, std::size_t n, int& sign);

/// 1 / Gamma(x) for any real x (entire; zero at nonpositive integers).
double reciprocal_gamma(double x);

/// Generalized hypergeometric series sum_n x^n / rho(n), summed until the
/// ratio-test tail bound drops below tol * max(1, |partial sum|).
/// Throws DivergenceError at or beyond the radius in x, ConvergenceError
/// if the cap of kSeriesMaxTerms terms is hit first.
SeriesResult pfq(const StructureTable& table, Complex x, double tol);
SeriesResult pfq(const ModelParams& params, Complex x, double tol);

/// Real-argument convenience wrapper (the value is real by construction).
double pfq_real(const StructureTable& table, double x, double tol = 1e-15);

/// Modified Bessel function of the first kind, ascending series.
double bessel_i(double nu, double x);

/// Modified Bessel function of the second kind; even in the order.
double bessel_k(double nu, double x);

struct QuadratureOptions {
  double split = 0.0;             // 0 = default split point
  std::size_t max_evals = 8000000;
};

/// Adaptive quadrature of f over [0, inf) for integrands decaying at
/// least exponentially: an adaptive core on [0, split] plus geometric
/// continuation segments until the observed decay bounds the remainder
/// below tol * max(1, |integral|).
double radial_quadrature(const std::function<double(double)>& f, double tol,
                         const QuadratureOptions& opts = {});

}  // namespace hypercs

#endif
