#include "hypercs/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "hypercs/fock.hpp"
#include "hypercs/kernels.hpp"
#include "hypercs/specfun.hpp"
#include "hypercs/states.hpp"

namespace hypercs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Complex random_label(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double phi = 2.0 * 3.14159265358979323846 * unit(rng);
  return Complex{r * std::cos(phi), r * std::sin(phi)};
}

double label_radius(const ModelParams& params) {
  return params.p() == params.q() + 1 ? 0.62 : 2.0;
}

struct Outcome {
  bool skipped = false;
  double max_err = 0.0;
  std::string note;
};

struct CheckSpec {
  std::string name;
  std::string identity;
  double tol;
  std::function<Outcome(Rng&)> run;
};

Outcome skip(std::string why) {
  Outcome o;
  o.skipped = true;
  o.note = std::move(why);
  return o;
}

// ---------------------------------------------------------------- states

Outcome check_normalization_sweep(const ModelParams& params, double tol, Rng& rng) {
  const double R = label_radius(params);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Complex z = random_label(rng, R);
    const StateVector v = bg_state(params, z, {tol});
    double n2 = 0.0;
    for (const Complex& c : v.coeffs) n2 += std::norm(c);
    worst = std::max(worst, std::abs(n2 - 1.0) / v.tail_bound);
  }
  return {false, worst, {}};
}

Outcome check_kp_normalization(const ModelParams& params, double tol, Rng& rng) {
  const ModelParams dual = kp_dual(params);
  if (dual.p() > dual.q() + 1) return skip("KP series has zero radius for this family");
  const double R = label_radius(dual);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Complex z = random_label(rng, R);
    const StateVector v = kp_state(params, z, {tol});
    double n2 = 0.0;
    for (const Complex& c : v.coeffs) n2 += std::norm(c);
    worst = std::max(worst, std::abs(n2 - 1.0) / v.tail_bound);
  }
  return {false, worst, {}};
}

Outcome check_annihilation_residual(const ModelParams& params, double tol, Rng& rng) {
  const double R = label_radius(params);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Complex z = random_label(rng, R);
    const double res = annihilation_residual(params, z, {tol});
    const double bound = annihilation_residual_bound(bg_state(params, z, {tol}));
    worst = std::max(worst, bound > 0.0 ? res / bound : res);
  }
  return {false, worst, {}};
}

Outcome check_annihilator_eigenvalue(const ModelParams& params, double tol, Rng& rng) {
  StructureTable table(params);
  const double R = label_radius(params);
  // The lowering series amplifies the state's truncation tail by roughly
  // pFq(|w| sqrt(e(N))), so the state is built much tighter than the
  // identity tolerance being verified.
  const StateOptions build{std::min(tol, 1e-15)};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Complex sigma = random_label(rng, R);
    const Complex w = random_label(rng, R);
    const StateVector v = bg_state(params, sigma, build);
    const StateVector t = apply_pfq_lowering(table, std::conj(w), v);
    const Complex eig = pfq(table, std::conj(w) * sigma, 1e-15).value;
    double diff2 = 0.0;
    for (std::size_t n = 0; n < v.coeffs.size(); ++n)
      diff2 += std::norm(t.coeffs[n] - eig * v.coeffs[n]);
    worst = std::max(worst, std::sqrt(diff2));
  }
  return {false, worst, {}};
}

Outcome check_overlap_routes(const ModelParams& params, double tol, Rng& rng) {
  const double R = label_radius(params);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Complex z = random_label(rng, R);
    const Complex w = random_label(rng, R);
    worst = std::max(worst, overlap_detail(params, z, w, {tol}).gap);
  }
  return {false, worst, {}};
}

Outcome check_binomial_symmetry(const ModelParams& params, double /*tol*/, Rng& rng) {
  std::uniform_int_distribution<std::size_t> lsel(0, 12);
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const Complex x = random_label(rng, 2.0);
    const Complex y = random_label(rng, 2.0);
    const std::size_t l = lsel(rng);
    const BinomialPower fwd = gen_binom_power(params, x, y, l);
    const BinomialPower rev = gen_binom_power(params, y, x, l);
    // gap measured against the term scale: near x = -y the sum cancels
    // and only conditioning-relative agreement is meaningful
    double term_scale = 1.0;
    for (const Complex& t : fwd.terms) term_scale += std::abs(t);
    worst = std::max(worst, std::abs(fwd.value - rev.value) / term_scale);
  }
  return {false, worst, {}};
}

Outcome check_label_continuity(const ModelParams& params, double tol, Rng& rng) {
  const double R = 0.75 * label_radius(params);
  const Complex z = random_label(rng, R);
  const Complex dir = std::exp(Complex{0.0, 1.1});
  double prev_rate = 0.0;
  double worst = 0.0;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const Complex zp = z + delta * dir;
    StateOptions o{tol};
    const std::size_t n = std::max(bg_state(params, z, o).trunc(), bg_state(params, zp, o).trunc());
    o.trunc = n;
    const StateVector a = bg_state(params, z, o);
    const StateVector b = bg_state(params, zp, o);
    double diff2 = 0.0;
    for (std::size_t k = 0; k <= n; ++k) diff2 += std::norm(a.coeffs[k] - b.coeffs[k]);
    const Complex ov = inner(a, b);
    // ||a - b||^2 = 2 - 2 Re<a|b> up to the truncation deficit
    worst = std::max(worst, std::abs(diff2 - (2.0 - 2.0 * ov.real())));
    const double rate = std::sqrt(diff2) / delta;
    if (prev_rate > 0.0 && rate > 2.0 * prev_rate) return {false, kInf, "rate not O(|z - z'|)"};
    prev_rate = rate;
  }
  return {false, worst, {}};
}

Outcome check_two_route(const ModelParams& params, double tol, Rng& rng) {
  const bool boundary = params.p() == params.q() + 1;
  const double zr = boundary ? 0.4 : 1.2;
  const double mag_lo = 0.3, mag_hi = boundary ? 1.0 : 1.5;
  std::uniform_real_distribution<double> mag(mag_lo, mag_hi);
  std::uniform_int_distribution<int> coin(0, 1);

  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    // the first four cases pin every sign combination of (eps, lam)
    const double se = i < 4 ? (i & 1 ? -1.0 : 1.0) : (coin(rng) ? -1.0 : 1.0);
    const double sl = i < 4 ? (i & 2 ? -1.0 : 1.0) : (coin(rng) ? -1.0 : 1.0);
    ShiftSpec shift;
    shift.eps = se * mag(rng);
    shift.lam = sl * mag(rng);
    shift.z = random_label(rng, zr);
    shift.sigma = random_label(rng, zr);

    const SequentialDisplacement seq = sequential_displacement(params, shift, {tol});
    const StateVector direct = shifted_state(params, shift, {tol});

    double gap = 0.0;
    const std::size_t hi = std::max(seq.state.trunc(), direct.trunc());
    for (std::size_t n = 0; n <= hi; ++n) {
      const Complex ca = n < seq.state.coeffs.size() ? seq.state.coeffs[n] : Complex{};
      const Complex cb = n < direct.coeffs.size() ? direct.coeffs[n] : Complex{};
      gap = std::max(gap, std::abs(ca - cb));
    }
    const double fgap = std::abs(seq.proportionality - seq.predicted) /
                        std::max(1.0, std::abs(seq.predicted));
    worst = std::max({worst, gap, fgap});
  }
  return {false, worst, {}};
}

Outcome check_displacement_diagonal(const ModelParams& params, double tol, Rng& rng) {
  const double R = label_radius(params);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const Complex z = random_label(rng, R);
    const Complex sigma = random_label(rng, R);
    worst = std::max(worst, displacement_diagonal_detail(params, z, sigma, {tol}).gap);
  }
  return {false, worst, {}};
}

// ---------------------------------------------------------------- limits

Outcome check_pfq_exp(const ModelParams&, double, Rng& rng) {
  const ModelParams canonical{};
  StructureTable table(canonical);
  // For strongly negative arguments the value is tiny, so the requested
  // tolerance has to be scaled to keep the truncation error relative.
  const auto eval = [&](Complex x) {
    const double want = std::min(1.0, std::exp(x.real()));
    return pfq(table, x, 1e-14 * want).value;
  };
  double worst = 0.0;
  for (int i = -20; i <= 20; ++i) {
    const double x = static_cast<double>(i);
    worst = std::max(worst, std::abs(eval({x, 0.0}) - std::exp(x)) / std::exp(x));
  }
  for (int i = 0; i < 20; ++i) {
    const Complex x = random_label(rng, 20.0);
    worst = std::max(worst, std::abs(eval(x) - std::exp(x)) / std::abs(std::exp(x)));
  }
  return {false, worst, {}};
}

Outcome check_pfq_binomial(const ModelParams&, double, Rng&) {
  double worst = 0.0;
  for (double a : {0.7, 1.5, 2.2}) {
    const ModelParams fam{{a}, {}};
    StructureTable table(fam);
    for (int i = -18; i <= 18; ++i) {
      const double x = 0.05 * static_cast<double>(i);
      const double got = pfq(table, Complex{x, 0.0}, 1e-14).value.real();
      const double want = std::pow(1.0 - x, -a);
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
  }
  return {false, worst, {}};
}

Outcome check_pfq_bessel(const ModelParams&, double, Rng&) {
  double worst = 0.0;
  for (double b : {1.5, 2.5}) {
    const ModelParams fam{{}, {b}};
    StructureTable table(fam);
    for (int i = 1; i <= 25; ++i) {
      const double y = static_cast<double>(i);
      const double got = pfq(table, Complex{y, 0.0}, 1e-15).value.real();
      const double want = std::exp(log_gamma(b)) * std::pow(y, 0.5 * (1.0 - b)) *
                          bessel_i(b - 1.0, 2.0 * std::sqrt(y));
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
  }
  return {false, worst, {}};
}

Outcome check_structure_factorial(const ModelParams& params, double, Rng&) {
  if (!is_canonical_equivalent(params)) return skip("family is not canonical-equivalent");
  double worst = 0.0;
  for (std::size_t n = 0; n <= 50; ++n) {
    const double lhs = rho_log(params, n);
    const double rhs = log_gamma(double(n) + 1.0);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return {false, worst, {}};
}

Outcome check_bg_closed_form(const ModelParams& params, double tol, Rng&) {
  if (!is_canonical_equivalent(params)) return skip("family is not canonical-equivalent");
  const Complex labels[] = {{1.0, 0.0}, {0.5, 0.5}, {-1.3, 0.7}, {0.0, 2.0}, {1.9, -0.4}};
  double worst = 0.0;
  for (const Complex& z : labels) {
    const StateVector v = bg_state(params, z, {tol});
    for (std::size_t n = 0; n <= v.trunc(); ++n) {
      const Complex want = std::exp(-0.5 * std::norm(z)) * std::pow(z, double(n)) *
                           std::exp(-0.5 * log_gamma(double(n) + 1.0));
      worst = std::max(worst, std::abs(v.coeffs[n] - want));
    }
  }
  return {false, worst, {}};
}

Outcome check_shifted_closed_form(const ModelParams& params, double tol, Rng& rng) {
  if (!is_canonical_equivalent(params)) return skip("family is not canonical-equivalent");
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    ShiftSpec shift;
    shift.eps = 1.0;
    shift.lam = 1.0;
    shift.z = random_label(rng, 2.0);
    shift.sigma = random_label(rng, 2.0);
    const StateVector v = shifted_state(params, shift, {tol});
    const Complex zs = shift.z + shift.sigma;
    for (std::size_t n = 0; n <= v.trunc(); ++n) {
      const Complex want = std::exp(-0.5 * std::norm(zs)) *
                           (n == 0 ? Complex{1.0} : std::pow(zs, double(n))) *
                           std::exp(-0.5 * log_gamma(double(n) + 1.0));
      worst = std::max(worst, std::abs(v.coeffs[n] - want));
    }
  }
  return {false, worst, {}};
}

Outcome check_ladder_canonical(const ModelParams& params, double, Rng&) {
  if (!is_canonical_equivalent(params)) return skip("family is not canonical-equivalent");
  const LadderOperator op = build_ladder(params, 40, LadderKind::lowering);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 41; ++n)
    worst = std::max(worst,
                     std::abs(op.band[n] - std::sqrt(double(n))) / std::sqrt(double(n)));
  return {false, worst, {}};
}

Outcome check_kp_equals_bg(const ModelParams& params, double tol, Rng& rng) {
  if (!is_canonical_equivalent(params)) return skip("family is not canonical-equivalent");
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Complex z = random_label(rng, 2.0);
    StateOptions o{tol};
    const StateVector a = bg_state(params, z, o);
    o.trunc = a.trunc();
    const StateVector b = kp_state(params, z, o);
    for (std::size_t n = 0; n <= a.trunc(); ++n)
      worst = std::max(worst, std::abs(a.coeffs[n] - b.coeffs[n]));
  }
  return {false, worst, {}};
}

Outcome check_pho_norm_bessel(const ModelParams& params, double, Rng&) {
  if (!(params.p() == 0 && params.q() == 1)) return skip("family is not of (p,q) = (0,1) type");
  const double b = params.b[0];
  StructureTable table(params);
  double worst = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double az = 0.1 * static_cast<double>(i);  // |z| up to 5
    const double y = az * az;
    const double got = pfq(table, Complex{y, 0.0}, 1e-15).value.real();
    const double want =
        std::exp(log_gamma(b)) * std::pow(y, 0.5 * (1.0 - b)) * bessel_i(b - 1.0, 2.0 * az);
    worst = std::max(worst, std::abs(got - want) / std::abs(want));
  }
  return {false, worst, {}};
}

Outcome check_pho_ladder(const ModelParams& params, double, Rng&) {
  if (!(params.p() == 0 && params.q() == 1)) return skip("family is not of (p,q) = (0,1) type");
  const double varsigma = params.b[0] - 0.5;
  const LadderOperator op = build_ladder(params, 40, LadderKind::raising);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 41; ++n) {
    const double want = std::sqrt(double(n) * (double(n) + varsigma - 0.5));
    worst = std::max(worst, std::abs(op.band[n] - want) / want);
  }
  return {false, worst, {}};
}

// --------------------------------------------------------------- kernels

Outcome check_moment_quadrature(const ModelParams& params, double, Rng&) {
  if (!has_quadrature_kernel(params)) return skip("no elementary measure kernel");
  const MomentFunctional mf(params);
  const std::size_t lmax = is_canonical_equivalent(params) ? 15 : 10;
  double worst = 0.0;
  for (std::size_t l = 0; l <= lmax; ++l) {
    const double quad = moment_quadrature(params, l, 1e-8);
    const double exact = moment_exact(mf, l);
    worst = std::max(worst, std::abs(quad / exact - 1.0));
  }
  return {false, worst, {}};
}

Outcome check_reproducing_grid(const ModelParams& params, double, Rng&) {
  if (!has_quadrature_kernel(params)) return skip("no elementary measure kernel");
  double worst = 0.0;
  for (int iu = 0; iu < 5; ++iu)
    for (int iv = 0; iv < 5; ++iv) {
      const Complex u{0.25 * iu, 0.0}, v{0.25 * iv, 0.0};
      worst = std::max(worst, reproducing_kernel_check(params, u, v, 1e-6).rel_gap);
    }
  return {false, worst, {}};
}

Outcome check_resolution_identity(const ModelParams& params, double, Rng&) {
  const std::vector<double> diag = resolution_identity_diagonal(params, 64);
  double worst = 0.0;
  for (double d : diag) worst = std::max(worst, std::abs(d - 1.0));
  return {false, worst, {}};
}

Outcome check_series_identity(const ModelParams& params, double, Rng&) {
  double worst = 0.0;
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t m = 0; m <= 3; ++m) {
      try {
        worst = std::max(worst, series_identity_check(params, n, m, 30).max_rel_gap);
      } catch (const DomainError& e) {
        return skip(e.what());
      }
    }
  return {false, worst, {}};
}

Outcome check_two_variable_closure(const ModelParams& params, double, Rng&) {
  double worst = 0.0;
  for (std::size_t l = 0; l <= 20; ++l) {
    const ClosureReport rep = two_variable_closure_check(params, l);
    if (rep.binom_sum != rep.binom_expected) return {false, kInf, "binomial sum mismatch"};
    worst = std::max(worst, rep.gap);
  }
  return {false, worst, {}};
}

Outcome check_derivative_kernel(const ModelParams& params, double, Rng&) {
  if (!is_canonical_equivalent(params)) return skip("family is not canonical-equivalent");
  double worst = 0.0;
  for (std::size_t n = 0; n <= 2; ++n)
    for (std::size_t m = 0; m <= 2; ++m)
      for (double u : {0.0, 0.5})
        for (double v : {0.0, 0.5})
          worst = std::max(worst, derivative_kernel_check(params, n, m, Complex{u, 0.0},
                                                          Complex{v, 0.0}, 1e-5)
                                      .rel_gap);
  return {false, worst, {}};
}

Outcome check_pochhammer_reflection(const ModelParams&, double, Rng& rng) {
  std::uniform_real_distribution<double> adist(-8.0, 8.0);
  std::uniform_int_distribution<std::size_t> ndist(0, 10);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double a = adist(rng);
    const std::size_t n = ndist(rng);
    const double lhs = pochhammer(a - double(n), n);
    const double rhs = (n % 2 == 0 ? 1.0 : -1.0) * pochhammer(1.0 - a, n);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-30, std::abs(rhs)));
  }
  return {false, worst, {}};
}

// ----------------------------------------------------------------- suite

void add_states_checks(std::vector<CheckSpec>& out, const ModelParams& p, double tol) {
  out.push_back({"states/normalization_sweep", "<z|z> = 1 within the reported tail bound", 1.0,
                 [p, tol](Rng& r) { return check_normalization_sweep(p, tol, r); }});
  out.push_back({"states/kp_normalization", "<z|z>_KP = 1 within the reported tail bound", 1.0,
                 [p, tol](Rng& r) { return check_kp_normalization(p, tol, r); }});
  out.push_back({"states/annihilation_residual", "A_- |z> = z |z> up to the truncation bound",
                 10.0, [p, tol](Rng& r) { return check_annihilation_residual(p, tol, r); }});
  out.push_back({"states/annihilator_eigenvalue", "pFq(w* A_-) |s> = pFq(w* s) |s>", 1e-9,
                 [p, tol](Rng& r) { return check_annihilator_eigenvalue(p, tol, r); }});
  out.push_back({"states/overlap_routes",
                 "pFq(z* w) / sqrt(pFq(|z|^2) pFq(|w|^2)) equals the coefficient inner product",
                 1e-10, [p, tol](Rng& r) { return check_overlap_routes(p, tol, r); }});
  out.push_back({"states/binomial_symmetry", "[x + y]^l = [y + x]^l", 1e-12,
                 [p, tol](Rng& r) { return check_binomial_symmetry(p, tol, r); }});
  out.push_back({"states/label_continuity", "|| |z> - |z'> || -> 0 linearly as z' -> z", 1e-12,
                 [p, tol](Rng& r) { return check_label_continuity(p, tol, r); }});
  out.push_back({"states/two_route_displacement",
                 "D(lam s) D(eps z) |0> matches the generalized-binomial expansion", 1e-8,
                 [p, tol](Rng& r) { return check_two_route(p, tol, r); }});
  out.push_back({"states/displacement_diagonal",
                 "<s|D(z)|s> formula matches the normal-ordered matrix element", 1e-9,
                 [p, tol](Rng& r) { return check_displacement_diagonal(p, tol, r); }});
}

void add_limits_checks(std::vector<CheckSpec>& out, const ModelParams& p, double tol) {
  out.push_back({"limits/pfq_exp", "0F0(x) = exp(x)", 1e-12,
                 [p](Rng& r) { return check_pfq_exp(p, 0.0, r); }});
  out.push_back({"limits/pfq_binomial", "1F0(a;;x) = (1 - x)^(-a)", 1e-10,
                 [p](Rng& r) { return check_pfq_binomial(p, 0.0, r); }});
  out.push_back({"limits/pfq_bessel",
                 "0F1(;b;y) = Gamma(b) y^((1-b)/2) I_(b-1)(2 sqrt(y))", 1e-10,
                 [p](Rng& r) { return check_pfq_bessel(p, 0.0, r); }});
  out.push_back({"limits/structure_factorial", "rho(n) = n! in the canonical limit", 1e-12,
                 [p](Rng& r) { return check_structure_factorial(p, 0.0, r); }});
  out.push_back({"limits/bg_closed_form",
                 "canonical coefficients e^(-|z|^2/2) z^n / sqrt(n!)", 1e-12,
                 [p, tol](Rng& r) { return check_bg_closed_form(p, tol, r); }});
  out.push_back({"limits/shifted_closed_form",
                 "canonical shifted coefficients e^(-|z+s|^2/2) (z+s)^n / sqrt(n!)", 1e-10,
                 [p, tol](Rng& r) { return check_shifted_closed_form(p, tol, r); }});
  out.push_back({"limits/ladder_canonical", "canonical band sqrt(n)", 1e-12,
                 [p](Rng& r) { return check_ladder_canonical(p, 0.0, r); }});
  out.push_back({"limits/kp_equals_bg", "KP and BG states coincide in the canonical limit", 1e-12,
                 [p, tol](Rng& r) { return check_kp_equals_bg(p, tol, r); }});
  out.push_back({"limits/pho_norm_bessel",
                 "0F1(;s+1/2;|z|^2) matches its Bessel closed form", 1e-10,
                 [p](Rng& r) { return check_pho_norm_bessel(p, 0.0, r); }});
  out.push_back({"limits/pho_ladder", "ladder amplitudes sqrt(n (n + s - 1/2))", 1e-12,
                 [p](Rng& r) { return check_pho_ladder(p, 0.0, r); }});
}

void add_kernels_checks(std::vector<CheckSpec>& out, const ModelParams& p, double) {
  out.push_back({"kernels/moment_quadrature",
                 "int kernel(x) x^l dx = Gamma(b~/a~) rho(l)", 1e-6,
                 [p](Rng& r) { return check_moment_quadrature(p, 0.0, r); }});
  out.push_back({"kernels/reproducing_grid",
                 "int (d2z/pi) kernel |z|^2-diagonal reproduces Gamma(b~/a~) pFq(uv)", 1e-6,
                 [p](Rng& r) { return check_reproducing_grid(p, 0.0, r); }});
  out.push_back({"kernels/resolution_identity",
                 "sum_l (moment(l)/Gamma(b~/a~)) |l><l| / rho(l) = I", 1e-12,
                 [p](Rng& r) { return check_resolution_identity(p, 0.0, r); }});
  out.push_back({"kernels/series_identity",
                 "term-wise z^n z*^m kernel reduction via shifted Pochhammer products", 1e-12,
                 [p](Rng& r) { return check_series_identity(p, 0.0, r); }});
  out.push_back({"kernels/two_variable_closure",
                 "two-variable closure arithmetic sums to 1 and sum C(l,n) = 2^l", 1e-12,
                 [p](Rng& r) { return check_two_variable_closure(p, 0.0, r); }});
  out.push_back({"kernels/derivative_kernel",
                 "Gaussian z^n z*^m kernel integral equals (d/du)^n (d/dv)^m e^(uv)", 1e-5,
                 [p](Rng& r) { return check_derivative_kernel(p, 0.0, r); }});
  out.push_back({"kernels/pochhammer_reflection", "(a-n)_n = (-1)^n (1-a)_n", 1e-12,
                 [p](Rng& r) { return check_pochhammer_reflection(p, 0.0, r); }});
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "all") return Suite::all;
  if (name == "states") return Suite::states;
  if (name == "kernels") return Suite::kernels;
  if (name == "limits") return Suite::limits;
  throw ValidationError("unknown suite '" + name + "'");
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::all: return "all";
    case Suite::states: return "states";
    case Suite::kernels: return "kernels";
    case Suite::limits: return "limits";
  }
  return "all";
}

VerifyReport run_verification(const ModelParams& params, Suite suite, const VerifyOptions& opts) {
  validate(params);
  if (!(opts.tol > 0.0) || opts.tol > 1e-2)
    throw ValidationError("verification tolerance must lie in (0, 1e-2]");

  std::vector<CheckSpec> specs;
  if (suite == Suite::all || suite == Suite::states) add_states_checks(specs, params, opts.tol);
  if (suite == Suite::all || suite == Suite::kernels) add_kernels_checks(specs, params, opts.tol);
  if (suite == Suite::all || suite == Suite::limits) add_limits_checks(specs, params, opts.tol);

  std::vector<CheckResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      const CheckSpec& spec = specs[i];
      CheckResult& res = results[i];
      res.name = spec.name;
      res.identity = spec.identity;
      res.tol = spec.tol;
      Rng rng(opts.seed ^ fnv1a(spec.name));
      try {
        const Outcome o = spec.run(rng);
        res.max_err = o.max_err;
        res.status = o.skipped ? "skip" : (o.max_err <= spec.tol ? "pass" : "fail");
      } catch (const std::exception& e) {
        res.max_err = kInf;
        res.status = "fail";
        res.identity += std::string(" [error: ") + e.what() + "]";
      }
    }
  };

  std::size_t nthreads = opts.threads != 0 ? opts.threads : std::thread::hardware_concurrency();
  nthreads = std::clamp<std::size_t>(nthreads, 1, std::max<std::size_t>(specs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::sort(results.begin(), results.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });

  VerifyReport report;
  report.suite = suite_name(suite);
  report.checks = std::move(results);
  for (const CheckResult& c : report.checks)
    if (c.status == "fail") ++report.failed_count;
  return report;
}

}  // namespace hypercs
