#include "hypercs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypercs {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

MomentFunctional::MomentFunctional(ModelParams p) : params(validate(std::move(p))) {
  double lg = 0.0;
  for (double bj : params.b) lg += log_gamma(bj);
  for (double ai : params.a) lg -= log_gamma(ai);
  normalization_log = lg;
  normalization = std::exp(lg);
}

double moment_exact_log(const MomentFunctional& mf, std::size_t l) {
  return mf.normalization_log + rho_log(mf.params, l);
}

double moment_exact(const MomentFunctional& mf, std::size_t l) {
  return std::exp(moment_exact_log(mf, l));
}

bool has_quadrature_kernel(const ModelParams& params) {
  if (is_canonical_equivalent(params)) return true;
  return params.p() == 0 && params.q() == 1;
}

double measure_kernel(const ModelParams& params, double x) {
  if (x < 0.0) throw DomainError("measure kernel requires x >= 0");
  if (is_canonical_equivalent(params)) return std::exp(-x);
  if (params.p() == 0 && params.q() == 1) {
    const double b = params.b[0];
    if (x == 0.0) {
      if (b > 1.0) return std::exp(log_gamma(b - 1.0));
      throw DomainError("kernel limit at x = 0 diverges for b <= 1");
    }
    const double t = std::sqrt(x);
    return 2.0 * std::pow(x, 0.5 * (b - 1.0)) * bessel_k(b - 1.0, 2.0 * t);
  }
  throw UnsupportedKernelError("no elementary measure kernel for this family");
}

double moment_quadrature(const ModelParams& params, std::size_t l, double tol) {
  if (!has_quadrature_kernel(params))
    throw UnsupportedKernelError("no elementary measure kernel for this family");
  if (!(tol > 0.0)) throw DomainError("moment_quadrature requires tol > 0");

  if (is_canonical_equivalent(params)) {
    const double ld = static_cast<double>(l);
    QuadratureOptions opts;
    opts.split = std::max(10.0, 4.0 * ld);
    return radial_quadrature(
        [ld](double x) { return x > 0.0 ? std::exp(ld * std::log(x) - x) : (ld == 0.0 ? 1.0 : 0.0); },
        tol, opts);
  }

  // (p, q) = (0, 1): substitute x = t^2; the integrand 4 t^{b+2l} K_{b-1}(2t)
  // is regular at the origin for b >= 1 and half-integer-smooth elsewhere.
  const double b = params.b[0];
  const double ld = static_cast<double>(l);
  if (!(b + 2.0 * ld - std::abs(b - 1.0) > 0.0))
    throw UnsupportedKernelError("kernel too singular at the origin for quadrature");
  QuadratureOptions opts;
  opts.split = std::max(5.0, 0.5 * b + ld + 3.0);
  return radial_quadrature(
      [b, ld](double t) {
        if (t == 0.0) return 0.0;
        return 4.0 * std::pow(t, b + 2.0 * ld) * bessel_k(b - 1.0, 2.0 * t);
      },
      tol, opts);
}

ReproducingKernelReport reproducing_kernel_check(const ModelParams& params, Complex u, Complex v,
                                                 double tol) {
  if (!has_quadrature_kernel(params))
    throw UnsupportedKernelError("no elementary measure kernel for this family");
  StructureTable table(params);
  const MomentFunctional mf(params);
  const Complex uv = u * v;
  if (params.p() == params.q() + 1 && !(std::abs(uv) < 1.0))
    throw DivergenceError("reproducing-kernel argument beyond the radius");

  // Angular reduction leaves sum_l (uv)^l / rho(l)^2 * moment(l); the
  // moments come from quadrature, everything else is exact arithmetic.
  Complex lhs{};
  Complex coef{1.0};
  const double auv = std::abs(uv);
  const std::size_t n_safe = table.monotonic_from();
  for (std::size_t l = 0; l <= 80; ++l) {
    if (l > 0) coef *= uv / (table.e(l) * table.e(l));
    const double m_l = moment_quadrature(params, l, 0.25 * tol);
    lhs += coef * m_l;
    if (l < n_safe || auv == 0.0) {
      if (auv == 0.0) break;
      continue;
    }
    // remaining terms of sum (uv)^l / rho(l): ratio auv / e(l+1)
    const double r = auv / table.e(l + 1);
    if (r < 1.0 &&
        std::abs(coef) * m_l * r / (1.0 - r) <= 0.05 * tol * std::max(1.0, std::abs(lhs)))
      break;
  }

  const Complex rhs = mf.normalization * pfq(table, uv, 1e-15).value;
  ReproducingKernelReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.rel_gap = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
  rep.passed = rep.rel_gap <= tol;
  return rep;
}

namespace {

// (d/du)^n (d/dv)^m e^{uv} = e^{uv} sum_k C(n,k) C(m,k) k! u^{m-k} v^{n-k}
Complex derivative_closed_form(std::size_t n, std::size_t m, Complex u, Complex v) {
  const std::size_t kmax = std::min(n, m);
  Complex acc{};
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double c = std::exp(log_gamma(double(n) + 1.0) - log_gamma(double(k) + 1.0) -
                              log_gamma(double(n - k) + 1.0) + log_gamma(double(m) + 1.0) -
                              log_gamma(double(m - k) + 1.0));
    const Complex up = (m - k) == 0 ? Complex{1.0} : std::pow(u, double(m - k));
    const Complex vp = (n - k) == 0 ? Complex{1.0} : std::pow(v, double(n - k));
    acc += c * up * vp;
  }
  return std::exp(u * v) * acc;
}

}  // namespace

DerivativeKernelReport derivative_kernel_check(const ModelParams& params, std::size_t n,
                                               std::size_t m, Complex u, Complex v, double tol) {
  if (!is_canonical_equivalent(params))
    throw UnsupportedKernelError("derivative kernel check is defined for the canonical family");

  const std::size_t M = std::max<std::size_t>(2 * (n + m) + 8, 48);
  const auto angular = [&](double r) {
    Complex acc{};
    for (std::size_t j = 0; j < M; ++j) {
      const double th = 2.0 * kPi * double(j) / double(M);
      const Complex ph{std::cos(th), std::sin(th)};
      acc += std::pow(ph, double(n)) * std::pow(std::conj(ph), double(m)) *
             std::exp(r * (u * ph + v * std::conj(ph)));
    }
    return acc / double(M);
  };
  // x = r^2 radial variable: integrand e^{-x} x^{(n+m)/2} A(sqrt(x))
  const auto integrand = [&](double x) {
    const double r = std::sqrt(x);
    const double w = std::exp(-x) * (x > 0.0 ? std::pow(x, 0.5 * double(n + m))
                                             : (n + m == 0 ? 1.0 : 0.0));
    return w == 0.0 ? Complex{} : w * angular(r);
  };

  QuadratureOptions opts;
  opts.split = 12.0 + 2.0 * double(n + m);
  const double re = radial_quadrature([&](double x) { return integrand(x).real(); }, 0.25 * tol, opts);
  const double im = radial_quadrature([&](double x) { return integrand(x).imag(); }, 0.25 * tol, opts);

  DerivativeKernelReport rep;
  rep.n = n;
  rep.m = m;
  rep.integral = Complex{re, im};
  rep.closed_form = derivative_closed_form(n, m, u, v);
  rep.abs_gap = std::abs(rep.integral - rep.closed_form);
  rep.rel_gap = rep.abs_gap / std::max(1.0, std::abs(rep.closed_form));
  rep.passed = rep.rel_gap <= tol;
  return rep;
}

SeriesIdentityReport series_identity_check(const ModelParams& params, std::size_t n, std::size_t m,
                                           std::size_t l_max, double tol) {
  const MomentFunctional mf(params);
  StructureTable table(params);

  SeriesIdentityReport rep;
  rep.n = n;
  rep.m = m;
  rep.passed = true;

  // Left side, coefficient of the (l-n, l-m) symbol pair after the
  // angular delta: moment(l) / (rho(l-n) rho(l-m)).
  // Right side, the same coefficient from the shifted-parameter series:
  //   Gamma(b~/a~) Q_n Q_m w_l l! / ((l-n)! (l-m)!)
  // with Q_r = prod_j (b_j - r)_r / prod_i (a_i - r)_r and
  //   w_l = prod_i (a_i-n)_l (a_i-m)_l / (a_i)_l
  //       / prod_j (b_j-n)_l (b_j-m)_l / (b_j)_l   (inverted for b).
  for (std::size_t l = std::max(n, m); l <= l_max; ++l) {
    const double lhs_log =
        moment_exact_log(mf, l) - table.rho_log(l - n) - table.rho_log(l - m);

    int sign = 1;
    double rhs_log = mf.normalization_log + log_gamma(double(l) + 1.0) -
                     log_gamma(double(l - n) + 1.0) - log_gamma(double(l - m) + 1.0);
    const auto mul_poch = [&](double x, std::size_t k, bool inverted) {
      int s = 0;
      const double lg = log_abs_pochhammer(x, k, s);
      if (s == 0) throw DomainError("vanishing shifted Pochhammer factor in series identity");
      sign *= s;
      rhs_log += inverted ? -lg : lg;
    };
    for (double bj : params.b) {
      mul_poch(bj - double(n), n, false);   // Q_n numerator
      mul_poch(bj - double(m), m, false);   // Q_m numerator
      mul_poch(bj - double(n), l, true);    // w_l denominator
      mul_poch(bj - double(m), l, true);
      mul_poch(bj, l, false);               // w_l numerator
    }
    for (double ai : params.a) {
      mul_poch(ai - double(n), n, true);
      mul_poch(ai - double(m), m, true);
      mul_poch(ai - double(n), l, false);
      mul_poch(ai - double(m), l, false);
      mul_poch(ai, l, true);
    }

    SeriesIdentityRow row;
    row.l = l;
    row.lhs = std::exp(lhs_log);
    row.rhs = double(sign) * std::exp(rhs_log);
    row.rel_gap = sign != 1 ? std::numeric_limits<double>::infinity()
                            : std::abs(std::expm1(rhs_log - lhs_log));
    rep.rows.push_back(row);
    rep.max_rel_gap = std::max(rep.max_rel_gap, row.rel_gap);
    if (row.rel_gap > tol) rep.passed = false;
  }
  return rep;
}

ClosureReport two_variable_closure_check(const ModelParams& params, std::size_t l) {
  if (l > 40) throw DomainError("two_variable_closure_check supports l <= 40");
  StructureTable table(params, l + 1);
  const auto g_log = [&](std::size_t k) {
    return table.rho_log(k) - log_gamma(double(k) + 1.0);  // ln [g(k)]!
  };
  const double ln2 = std::log(2.0);

  ClosureReport rep;
  rep.l = l;
  rep.binom_expected = 1ull << l;

  unsigned long long binom = 1;  // C(l, 0)
  double sum = 0.0;
  for (std::size_t n = 0; n <= l; ++n) {
    // declared integral values of the two radial integrals
    const double int_z_log =
        -0.5 * (double(l) * ln2 + g_log(l)) + log_gamma(double(l - n) + 1.0) + 2.0 * g_log(l - n);
    const double int_s_log =
        -0.5 * (double(l) * ln2 + g_log(l)) + log_gamma(double(n) + 1.0) + 2.0 * g_log(n);
    const double term_log =
        std::log(double(binom)) +
        (int_z_log - log_gamma(double(l - n) + 1.0) - 2.0 * g_log(l - n)) +
        (int_s_log - log_gamma(double(n) + 1.0) - 2.0 * g_log(n)) + g_log(l);
    sum += std::exp(term_log);
    rep.binom_sum += binom;
    if (n < l) binom = binom * (l - n) / (n + 1);
  }

  rep.closure_sum = sum;
  rep.gap = std::abs(sum - 1.0);
  rep.passed = rep.gap <= 1e-12 && rep.binom_sum == rep.binom_expected;
  return rep;
}

std::vector<double> resolution_identity_diagonal(const ModelParams& params, std::size_t n_max) {
  const MomentFunctional mf(params);
  StructureTable table(params, n_max + 1);
  std::vector<double> diag(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n)
    diag[n] = std::exp(moment_exact_log(mf, n) - mf.normalization_log - table.rho_log(n));
  return diag;
}

}  // namespace hypercs
