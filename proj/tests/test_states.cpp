#include <doctest.h>

#include <cmath>
#include <random>

#include "hypercs/states.hpp"
#include "test_util.hpp"

using namespace hypercs;

namespace {
constexpr double kPi = 3.14159265358979323846;

double entrywise_gap(const StateVector& a, const StateVector& b) {
  double gap = 0.0;
  const std::size_t hi = std::max(a.trunc(), b.trunc());
  for (std::size_t n = 0; n <= hi; ++n) {
    const Complex ca = n < a.coeffs.size() ? a.coeffs[n] : Complex{};
    const Complex cb = n < b.coeffs.size() ? b.coeffs[n] : Complex{};
    gap = std::max(gap, std::abs(ca - cb));
  }
  return gap;
}
}  // namespace

TEST_CASE("bg_state canonical closed form at z = 1") {
  const StateVector v = bg_state(test_util::canonical(), Complex{1.0, 0.0});
  CHECK(v.coeffs[0].real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
  for (std::size_t n = 0; n <= v.trunc(); ++n) {
    const double want = std::exp(-0.5) / std::sqrt(std::tgamma(double(n) + 1.0));
    CHECK(v.coeffs[n].real() == doctest::Approx(want).epsilon(1e-11));
    CHECK(v.coeffs[n].imag() == 0.0);
  }
  double n2 = 0.0;
  for (const Complex& c : v.coeffs) n2 += std::norm(c);
  CHECK(std::abs(n2 - 1.0) <= v.tail_bound);
}

TEST_CASE("bg_state at z = 0 is the vacuum") {
  const StateVector v = bg_state(test_util::pho(1.5), Complex{});
  CHECK(v.trunc() == 0);
  CHECK(v.coeffs[0] == Complex{1.0, 0.0});
  CHECK(v.tail_bound == 0.0);
}

TEST_CASE("bg_state single-b normalization uses the sinh closed form") {
  const StateVector v = bg_state(test_util::pho(1.5), Complex{1.0, 0.0});
  CHECK(v.coeffs[0].real() == doctest::Approx(1.0 / std::sqrt(std::sinh(2.0) / 2.0)).epsilon(1e-12));
}

TEST_CASE("bg_state rejects labels outside the radius") {
  CHECK_THROWS_AS(bg_state(test_util::boundary(2.0), Complex{1.5, 0.0}), DivergenceError);
  CHECK_NOTHROW(bg_state(test_util::boundary(2.0), Complex{0.6, 0.0}));
}

TEST_CASE("kp_state equals bg_state in the canonical family") {
  const Complex z{0.7, -0.4};
  StateOptions o;
  const StateVector a = bg_state(test_util::canonical(), z, o);
  o.trunc = a.trunc();
  const StateVector b = kp_state(test_util::canonical(), z, o);
  CHECK(entrywise_gap(a, b) <= 1e-13);
}

TEST_CASE("kp_state of the single-b family is a binomial-series state") {
  // normalization 1F0(1.5;;|z|^2) = (1 - |z|^2)^(-1.5)
  const StateVector v = kp_state(test_util::pho(1.5), Complex{0.5, 0.0});
  CHECK(v.coeffs[0].real() ==
        doctest::Approx(1.0 / std::sqrt(std::pow(0.75, -1.5))).epsilon(1e-12));
  // the KP series of this family has radius 1
  CHECK_THROWS_AS(kp_state(test_util::pho(1.5), Complex{1.1, 0.0}), DivergenceError);
  CHECK(kp_state(test_util::pho(1.5), Complex{}).coeffs[0] == Complex{1.0, 0.0});
}

TEST_CASE("kp_state rejects families whose dual series has zero radius") {
  const ModelParams two_b{{}, {1.5, 2.0}};  // dual would have p = q + 2
  CHECK_THROWS_AS(kp_state(two_b, Complex{0.1, 0.0}), DivergenceError);
  CHECK(kp_state(two_b, Complex{}).coeffs[0] == Complex{1.0, 0.0});  // vacuum still fine
}

TEST_CASE("annihilation residual tracks the truncation bound as tol shrinks") {
  const ModelParams p = test_util::pho(1.5);
  const Complex z{1.3, -0.6};
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    const double res = annihilation_residual(p, z, {tol});
    const double bound = annihilation_residual_bound(bg_state(p, z, {tol}));
    CHECK(res <= 10.0 * bound);
  }
  CHECK(annihilation_residual(p, z, {1e-12}) < annihilation_residual(p, z, {1e-6}));
}

TEST_CASE("overlap examples") {
  const ModelParams p = test_util::canonical();
  CHECK(std::abs(overlap(p, Complex{0.8, 0.3}, Complex{0.8, 0.3}) - 1.0) <= 1e-12);
  // z = 0 leaves only the normalization of w
  const Complex w{1.2, -0.5};
  const double fw = pfq(p, std::norm(w), 1e-15).value.real();
  CHECK(overlap(p, Complex{}, w).real() == doctest::Approx(1.0 / std::sqrt(fw)).epsilon(1e-12));
  // modulus of the canonical overlap is exp(-|z - w|^2 / 2)
  const Complex z{0.5, 0.0}, wi{0.0, 0.5};
  CHECK(std::abs(overlap(p, z, wi)) == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
  const OverlapResult detail = overlap_detail(p, z, wi);
  CHECK(detail.gap <= 1e-12);
}

TEST_CASE("annihilation residual shrinks with the truncation tolerance") {
  CHECK(annihilation_residual(test_util::canonical(), Complex{}) == 0.0);
  const double r1 = annihilation_residual(test_util::canonical(), Complex{1.0, 0.0}, {1e-12});
  CHECK(r1 <= 1e-10);
  const double r2 = annihilation_residual(test_util::pho(1.5), Complex{2.0, 0.0}, {1e-12});
  CHECK(r2 <= 1e-9);
  const double loose = annihilation_residual(test_util::pho(1.5), Complex{2.0, 0.0}, {1e-6});
  CHECK(r2 < loose);
  const StateVector v = bg_state(test_util::pho(1.5), Complex{2.0, 0.0}, {1e-12});
  CHECK(r2 <= 10.0 * annihilation_residual_bound(v));
}

TEST_CASE("generalized binomial power examples") {
  // canonical: collapses to the ordinary binomial (1 + 1)^3
  CHECK(gen_binom_power(test_util::canonical(), Complex{1, 0}, Complex{1, 0}, 3).value.real() ==
        doctest::Approx(8.0).epsilon(1e-13));
  // y = 0 leaves the single term x^l
  const BinomialPower edge = gen_binom_power(test_util::pho(1.5), Complex{2, 0}, Complex{}, 4);
  CHECK(edge.value.real() == doctest::Approx(16.0).epsilon(1e-13));
  CHECK(edge.terms[0].real() == doctest::Approx(16.0).epsilon(1e-13));
  for (std::size_t n = 1; n < edge.terms.size(); ++n) CHECK(std::abs(edge.terms[n]) == 0.0);
  // single-b family, l = 2: 1 + 10/3 + 1
  CHECK(gen_binom_power(test_util::pho(1.5), Complex{1, 0}, Complex{1, 0}, 2).value.real() ==
        doctest::Approx(16.0 / 3.0).epsilon(1e-13));
  // terms sum to the value
  const BinomialPower b = gen_binom_power(test_util::pho(2.5), Complex{0.3, 0.7}, Complex{-1.1, 0.2}, 9);
  Complex acc{};
  for (const Complex& t : b.terms) acc += t;
  CHECK(std::abs(acc - b.value) <= 1e-13 * std::max(1.0, std::abs(b.value)));
}

TEST_CASE("shift label modulus and phase decomposition") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> mag(-1.5, 1.5);
  for (int i = 0; i < 25; ++i) {
    ShiftSpec s;
    s.eps = mag(rng);
    s.lam = mag(rng);
    s.z = test_util::random_label(rng, 2.0);
    s.sigma = test_util::random_label(rng, 2.0);
    const Complex Z = s.label();
    const double az = std::abs(s.eps * s.z), as = std::abs(s.lam * s.sigma);
    const double want = az * az + as * as +
                        2.0 * az * as *
                            std::cos(std::arg(s.eps * s.z) - std::arg(s.lam * s.sigma));
    CHECK(std::norm(Z) == doctest::Approx(want).epsilon(1e-10));
    if (std::abs(Z) > 1e-12)
      CHECK(std::arg(Z) == doctest::Approx(std::atan2(Z.imag(), Z.real())).epsilon(1e-14));
  }
}

TEST_CASE("binomial power terms carry func_binom times the label powers") {
  const ModelParams p = test_util::pho(1.5);
  const Complex x{0.8, -0.2}, y{-0.4, 0.9};
  const BinomialPower b = gen_binom_power(p, x, y, 5);
  for (std::size_t n = 0; n <= 5; ++n) {
    const Complex want = func_binom(p, 5, n) * std::pow(x, double(5 - n)) * std::pow(y, double(n));
    CHECK(std::abs(b.terms[n] - want) <= 1e-13 * std::max(1.0, std::abs(want)));
  }
  const BinomialPower unit = gen_binom_power(p, Complex{1, 0}, Complex{1, 0}, 2);
  CHECK(unit.terms[0].real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(unit.terms[1].real() == doctest::Approx(10.0 / 3.0).epsilon(1e-13));
  CHECK(unit.terms[2].real() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("binomial symmetry under exchanging the two labels") {
  std::mt19937_64 rng(5);
  for (const ModelParams& p : {test_util::canonical(), test_util::pho(1.5)}) {
    for (int i = 0; i < 30; ++i) {
      const Complex x = test_util::random_label(rng, 2.0);
      const Complex y = test_util::random_label(rng, 2.0);
      const std::size_t l = std::uniform_int_distribution<std::size_t>(0, 12)(rng);
      const BinomialPower fwd = gen_binom_power(p, x, y, l);
      const BinomialPower rev = gen_binom_power(p, y, x, l);
      double scale = 1.0;
      for (const Complex& t : fwd.terms) scale += std::abs(t);
      CHECK(std::abs(fwd.value - rev.value) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("shifted state: canonical closed form and degenerate cases") {
  ShiftSpec s;
  s.eps = 1.0;
  s.z = Complex{0.3, 0.0};
  s.lam = 1.0;
  s.sigma = Complex{0.2, 0.0};
  const ShiftedState d = shifted_state_detail(test_util::canonical(), s);
  CHECK(d.state.coeffs[0].real() == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));
  CHECK(d.norm_gap <= 1e-12);  // canonical: module and literal norms coincide

  // lam = 0 reduces to the plain coherent state
  ShiftSpec plain;
  plain.eps = 1.0;
  plain.z = Complex{0.4, 0.6};
  plain.lam = 0.0;
  plain.sigma = Complex{5.0, 5.0};  // ignored
  const StateVector via_shift = shifted_state(test_util::pho(1.5), plain);
  StateOptions o;
  o.trunc = via_shift.trunc();
  const StateVector direct = bg_state(test_util::pho(1.5), plain.z, o);
  CHECK(entrywise_gap(via_shift, direct) <= 1e-12);

  // z = sigma = 0 is the vacuum
  const StateVector vac = shifted_state(test_util::pho(1.5), ShiftSpec{});
  CHECK(vac.trunc() == 0);
  CHECK(vac.coeffs[0] == Complex{1.0, 0.0});
}

TEST_CASE("shifted state reports the literal-vs-module norm diagnostic") {
  ShiftSpec s;
  s.eps = 1.0;
  s.z = Complex{0.4, 0.0};
  s.lam = 1.0;
  s.sigma = Complex{0.3, 0.0};
  const ShiftedState d = shifted_state_detail(test_util::pho(1.5), s);
  CHECK(d.norm_module > 0.0);
  CHECK(d.norm_literal > 0.0);
  CHECK(d.norm_gap > 1e-4);  // the two normalizations genuinely differ off the canonical case
  double n2 = 0.0;
  for (const Complex& c : d.state.coeffs) n2 += std::norm(c);
  CHECK(std::abs(n2 - 1.0) <= d.state.tail_bound);
}

TEST_CASE("shifted state rejects divergent composite labels on boundary families") {
  ShiftSpec s;
  s.eps = 1.0;
  s.z = Complex{0.8, 0.0};
  s.lam = 1.0;
  s.sigma = Complex{0.5, 0.0};
  CHECK_THROWS_AS(shifted_state(test_util::boundary(1.3), s), DivergenceError);
}

TEST_CASE("sequential displacement agrees with the binomial route") {
  std::mt19937_64 rng(31);
  for (const ModelParams& p : {test_util::canonical(), test_util::pho(1.5)}) {
    for (int i = 0; i < 8; ++i) {
      ShiftSpec s;
      s.eps = (i % 2 ? -1.0 : 1.0) * (0.4 + 0.1 * i);
      s.lam = (i % 3 ? 1.0 : -1.0) * 0.9;
      s.z = test_util::random_label(rng, 1.2);
      s.sigma = test_util::random_label(rng, 1.2);
      const SequentialDisplacement seq = sequential_displacement(p, s);
      const StateVector direct = shifted_state(p, s);
      CHECK(entrywise_gap(seq.state, direct) <= 1e-10);
      CHECK(std::abs(seq.proportionality - seq.predicted) <=
            1e-10 * std::max(1.0, seq.predicted));
    }
  }
}

TEST_CASE("sequential displacement with lam = 0 is the identity route") {
  ShiftSpec s;
  s.eps = 1.0;
  s.z = Complex{0.5, 0.2};
  s.lam = 0.0;
  const SequentialDisplacement seq = sequential_displacement(test_util::pho(2.5), s);
  CHECK(seq.proportionality == doctest::Approx(1.0).epsilon(1e-10));
  StateOptions o;
  o.trunc = seq.state.trunc();
  CHECK(entrywise_gap(seq.state, bg_state(test_util::pho(2.5), s.z, o)) <= 1e-12);
}

TEST_CASE("displacement diagonal formula and operator cross-check") {
  // sigma = 0: only the normalization of z survives
  const ModelParams p = test_util::pho(1.5);
  const Complex z{0.8, 0.4};
  const double fz = pfq(p, std::norm(z), 1e-15).value.real();
  CHECK(displacement_diagonal(p, z, Complex{}).real() ==
        doctest::Approx(1.0 / std::sqrt(fz)).epsilon(1e-12));
  // z = sigma = 0 is trivially one
  CHECK(displacement_diagonal(p, Complex{}, Complex{}).real() == doctest::Approx(1.0));
  // canonical z = sigma = 1: e^2 e^{-1/2} e^{-1}
  const DisplacementDiagonal d =
      displacement_diagonal_detail(test_util::canonical(), Complex{1, 0}, Complex{1, 0});
  CHECK(d.formula.real() == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
  CHECK(d.gap <= 1e-10);
  // complex labels: operator route still matches the kernel formula
  const DisplacementDiagonal dc =
      displacement_diagonal_detail(p, Complex{0.6, -0.3}, Complex{-0.2, 0.5});
  CHECK(dc.gap <= 1e-10);
  CHECK(std::abs(dc.formula.imag()) <= 1e-12);  // the product pFq(zs*) pFq(z*s) is real
}

TEST_CASE("bg states stay continuous in the label") {
  const ModelParams p = test_util::canonical();
  const Complex z{0.9, 0.2};
  double prev = 1e9;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    StateOptions o;
    const Complex zp = z + delta * std::exp(Complex{0.0, 0.77});
    const std::size_t n = std::max(bg_state(p, z, o).trunc(), bg_state(p, zp, o).trunc());
    o.trunc = n;
    const StateVector a = bg_state(p, z, o);
    const StateVector b = bg_state(p, zp, o);
    double diff2 = 0.0;
    for (std::size_t k = 0; k <= n; ++k) diff2 += std::norm(a.coeffs[k] - b.coeffs[k]);
    CHECK(std::abs(diff2 - (2.0 - 2.0 * inner(a, b).real())) <= 1e-12);
    const double rate = std::sqrt(diff2) / delta;
    CHECK(rate < prev * 1.5 + 1.0);
    prev = rate;
  }
}
