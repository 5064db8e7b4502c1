#include "hypercs/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypercs {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double pochhammer(double x, std::size_t n) {
  double prod = 1.0;
  for (std::size_t s = 1; s <= n; ++s) {
    prod *= x + static_cast<double>(s - 1);
    if (!std::isfinite(prod)) {
      int sign = 0;
      const double lg = log_abs_pochhammer(x, n, sign);
      return static_cast<double>(sign) * std::exp(lg);
    }
  }
  return prod;
}

double log_abs_pochhammer(double x, std::size_t n, int& sign) {
  sign = 1;
  double lg = 0.0;
  for (std::size_t s = 1; s <= n; ++s) {
    const double f = x + static_cast<double>(s - 1);
    if (f == 0.0) {
      sign = 0;
      return -kInf;
    }
    if (f < 0.0) sign = -sign;
    lg += std::log(std::abs(f));
  }
  return lg;
}

double reciprocal_gamma(double x) {
  if (x > 0.0) return std::exp(-log_gamma(x));
  const double k = std::round(x);
  if (x == k) return 0.0;  // pole of Gamma
  // sin(pi x) via the reduced argument, exact through the reflection
  const double s = std::sin(kPi * (x - k)) * (std::fmod(k, 2.0) == 0.0 ? 1.0 : -1.0);
  return s * std::exp(log_gamma(1.0 - x)) / kPi;
}

namespace {

// Double-double helpers for the series accumulation: alternating
// arguments condition the sum like e^{2|x|}, which plain doubles cannot
// carry to 1e-12 at |x| = 20.
struct DD {
  double hi = 0.0, lo = 0.0;
};

inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  const DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD dd_mul(DD a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline DD dd_div(DD a, double b) {
  const double q1 = a.hi / b;
  const DD r = two_prod(q1, b);
  const double q2 = ((a.hi - r.hi) - r.lo + a.lo) / b;
  return quick_two_sum(q1, q2);
}

struct CDD {
  DD re, im;
};

inline CDD cdd_mul(const CDD& a, Complex x) {
  CDD out;
  out.re = dd_add(dd_mul(a.re, x.real()), dd_mul(a.im, -x.imag()));
  out.im = dd_add(dd_mul(a.re, x.imag()), dd_mul(a.im, x.real()));
  return out;
}

inline CDD cdd_div(const CDD& a, double b) { return {dd_div(a.re, b), dd_div(a.im, b)}; }

inline CDD cdd_add(const CDD& a, const CDD& b) {
  return {dd_add(a.re, b.re), dd_add(a.im, b.im)};
}

inline double cdd_abs(const CDD& a) { return std::hypot(a.re.hi, a.im.hi); }

}  // namespace

SeriesResult pfq(const StructureTable& table, Complex x, double tol) {
  if (!(tol > 0.0)) throw DomainError("pfq requires tol > 0");
  const ModelParams& params = table.params();
  const double ax = std::abs(x);
  const bool on_boundary = params.p() == params.q() + 1;
  if (on_boundary && !(ax < 1.0))
    throw DivergenceError("pfq argument at or beyond the radius of convergence");

  SeriesResult out;
  out.value = 1.0;
  if (ax == 0.0) return out;

  CDD term{{1.0, 0.0}, {0.0, 0.0}};
  CDD sum = term;
  const std::size_t n_safe = table.monotonic_from();
  for (std::size_t n = 1; n <= kSeriesMaxTerms; ++n) {
    term = cdd_div(cdd_mul(term, x), table.e(n));
    sum = cdd_add(sum, term);
    if (n < n_safe) continue;
    // Once e(.) is monotone, every later term ratio is bounded by the
    // larger of the current ratio and the limiting ratio |x| / lim e.
    const double r_now = ax / table.e(n + 1);
    const double r = std::max(r_now, on_boundary ? ax : 0.0);
    if (r >= 1.0) continue;
    const double tail = cdd_abs(term) * r_now / (1.0 - r);
    if (tail <= tol * std::max(1.0, cdd_abs(sum))) {
      out.value = Complex{sum.re.hi + sum.re.lo, sum.im.hi + sum.im.lo};
      out.terms_used = n + 1;
      out.tail_bound = tail;
      return out;
    }
  }
  throw ConvergenceError("pfq did not reach the requested tolerance within the term cap");
}

SeriesResult pfq(const ModelParams& params, Complex x, double tol) {
  StructureTable table(params);
  return pfq(table, x, tol);
}

double pfq_real(const StructureTable& table, double x, double tol) {
  return pfq(table, Complex(x, 0.0), tol).value.real();
}

double bessel_i(double nu, double x) {
  if (x < 0.0) throw DomainError("bessel_i requires x >= 0");
  if (nu < 0.0 && nu == std::round(nu)) nu = -nu;  // I_{-n} = I_n
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    return kInf;  // negative non-integer order diverges at 0
  }

  const double h = 0.5 * x;
  const double h2 = h * h;
  double term;
  if (nu > -1.0)
    term = std::exp(nu * std::log(h) - log_gamma(nu + 1.0));
  else
    term = std::pow(h, nu) * reciprocal_gamma(nu + 1.0);

  double sum = term;
  for (std::size_t k = 1; k <= 4000; ++k) {
    const double denom = static_cast<double>(k) * (nu + static_cast<double>(k));
    if (denom <= 0.0 || term == 0.0) {
      // sign flips or vanishing factors from nu <= -1: rebuild directly
      term = std::pow(h, nu + 2.0 * static_cast<double>(k)) *
             reciprocal_gamma(nu + static_cast<double>(k) + 1.0) *
             std::exp(-log_gamma(static_cast<double>(k) + 1.0));
    } else {
      term *= h2 / denom;
    }
    sum += term;
    if (static_cast<double>(k) > h && std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw ConvergenceError("bessel_i series did not converge");
}

double bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k requires x > 0");
  return std::cyl_bessel_k(std::abs(nu), x);
}

namespace {

// Adaptive Simpson with the classic 1/15 error estimate.
class SimpsonIntegrator {
 public:
  SimpsonIntegrator(const std::function<double(double)>& f, std::size_t max_evals)
      : f_(f), max_evals_(max_evals) {}

  double integrate(double a, double b, double tol) {
    const double fa = eval(a), fm = eval(0.5 * (a + b)), fb = eval(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return recurse(a, b, fa, fm, fb, whole, tol, 48);
  }

  std::size_t evals() const noexcept { return evals_; }

 private:
  double eval(double t) {
    if (++evals_ > max_evals_) throw QuadratureError("quadrature node budget exhausted");
    return f_(t);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth <= 0) {
      if (depth <= 0 && std::abs(err) > 64.0 * tol)
        throw QuadratureError("quadrature failed to converge at maximum depth");
      return left + right + err;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  const std::function<double(double)>& f_;
  std::size_t max_evals_;
  std::size_t evals_ = 0;
};

}  // namespace

namespace {

// Coarse composite-Simpson magnitude estimate, used to turn the caller's
// absolute-or-relative tolerance into local absolute tolerances.
double coarse_simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace

double radial_quadrature(const std::function<double(double)>& f, double tol,
                         const QuadratureOptions& opts) {
  if (!(tol > 0.0)) throw DomainError("radial_quadrature requires tol > 0");
  SimpsonIntegrator simpson(f, opts.max_evals);
  const double split = opts.split > 0.0 ? opts.split : 16.0;

  double scale = std::max(1.0, std::abs(coarse_simpson(f, 0.0, split, 256)));
  double total = simpson.integrate(0.0, split, 0.25 * tol * scale);
  scale = std::max(scale, std::abs(total));

  // Geometric continuation: segment integrals of an exponentially
  // decaying integrand shrink at least geometrically, so the observed
  // segment ratio bounds the remainder.
  double lo = split;
  double len = std::max(split, 1.0);
  double prev = kInf;
  for (int it = 0; it < 64; ++it) {
    const double seg = simpson.integrate(lo, lo + len, 0.05 * tol * scale);
    total += seg;
    scale = std::max(scale, std::abs(total));
    const double ratio = std::abs(prev) > 0.0 ? std::abs(seg) / std::abs(prev) : 1.0;
    if (std::abs(seg) <= 1e-3 * tol * scale) return total;
    if (it > 0 && ratio < 0.75 && std::abs(seg) * ratio / (1.0 - ratio) <= 0.25 * tol * scale)
      return total;
    prev = seg;
    lo += len;
    len *= 1.6;
  }
  throw QuadratureError("radial_quadrature tail did not decay within the segment budget");
}

}  // namespace hypercs
