#include <doctest.h>

#include <cmath>
#include <random>

#include "hypercs/specfun.hpp"
#include "test_util.hpp"

using namespace hypercs;
using test_util::brute_pfq;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("log_gamma at integers and against the factorial product") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(4.0 * 3.0 * 2.0)).epsilon(1e-14));
  CHECK(log_gamma(1e6) == doctest::Approx(std::lgamma(1e6)).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-2.5), DomainError);
}

TEST_CASE("pochhammer small cases and overflow fallback") {
  CHECK(pochhammer(2.0, 3) == 24.0);
  CHECK(pochhammer(-7.0, 0) == 1.0);
  CHECK(pochhammer(0.0, 0) == 1.0);
  CHECK(pochhammer(1.5, 2) == doctest::Approx(1.5 * 2.5).epsilon(1e-15));
  CHECK(pochhammer(3.0, 4) == doctest::Approx(3.0 * 4.0 * 5.0 * 6.0).epsilon(1e-15));
  // (1)_200 = 200! overflows double; the log-domain fallback keeps the sign
  CHECK(std::isinf(pochhammer(1.0, 200)));
  CHECK(pochhammer(1.0, 200) > 0.0);
  int sign = 0;
  CHECK(log_abs_pochhammer(1.0, 200, sign) == doctest::Approx(std::lgamma(201.0)).epsilon(1e-13));
  CHECK(sign == 1);
  log_abs_pochhammer(-2.5, 4, sign);
  CHECK(sign == -1);  // factors -2.5, -1.5, -0.5, 0.5
  log_abs_pochhammer(-2.5, 3, sign);
  CHECK(sign == -1);
  log_abs_pochhammer(-3.5, 4, sign);
  CHECK(sign == 1);  // factors -3.5, -2.5, -1.5, -0.5
  log_abs_pochhammer(-2.0, 5, sign);
  CHECK(sign == 0);  // exact zero factor
}

TEST_CASE("pochhammer reflection identity on random draws") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> adist(-8.0, 8.0);
  std::uniform_int_distribution<std::size_t> ndist(0, 10);
  for (int i = 0; i < 200; ++i) {
    const double a = adist(rng);
    const std::size_t n = ndist(rng);
    const double lhs = pochhammer(a - double(n), n);
    const double rhs = (n % 2 == 0 ? 1.0 : -1.0) * pochhammer(1.0 - a, n);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("reciprocal_gamma matches 1/Gamma and vanishes at the poles") {
  CHECK(reciprocal_gamma(3.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(reciprocal_gamma(0.5) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-14));
  CHECK(reciprocal_gamma(0.0) == 0.0);
  CHECK(reciprocal_gamma(-3.0) == 0.0);
  CHECK(reciprocal_gamma(-0.5) == doctest::Approx(1.0 / std::tgamma(-0.5)).epsilon(1e-13));
}

TEST_CASE("pfq reproduces the exponential for the empty family") {
  StructureTable t(test_util::canonical());
  const SeriesResult r = pfq(t, Complex{1.0, 0.0}, 1e-14);
  CHECK(r.value.real() == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  CHECK(r.value.imag() == 0.0);
  CHECK(r.terms_used >= 1);
  for (double x = -20.0; x <= 20.0; x += 2.5) {
    const double want = std::exp(x);
    const double got = pfq(t, Complex{x, 0.0}, 1e-14 * std::min(1.0, want)).value.real();
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("pfq at zero argument is exactly one") {
  for (const ModelParams& p :
       {test_util::canonical(), test_util::pho(1.5), test_util::boundary(1.3)}) {
    const SeriesResult r = pfq(p, Complex{0.0, 0.0}, 1e-12);
    CHECK(r.value == Complex{1.0, 0.0});
    CHECK(r.tail_bound == 0.0);
  }
}

TEST_CASE("pfq of the single-b family matches the sinh closed form") {
  // 0F1(;3/2;x) = sinh(2 sqrt(x)) / (2 sqrt(x))
  StructureTable t(test_util::pho(1.5));
  const double got = pfq(t, Complex{1.0, 0.0}, 1e-14).value.real();
  CHECK(got == doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("pfq binomial series for the single-a family") {
  for (double a : {0.7, 1.5, 2.2}) {
    StructureTable t(ModelParams{{a}, {}});
    for (double x = -0.9; x <= 0.9001; x += 0.1) {
      const double got = pfq(t, Complex{x, 0.0}, 1e-14).value.real();
      CHECK(got == doctest::Approx(std::pow(1.0 - x, -a)).epsilon(1e-10));
    }
  }
}

TEST_CASE("pfq rejects arguments at or beyond the radius") {
  StructureTable t(test_util::boundary(2.0));
  CHECK_THROWS_AS(pfq(t, Complex{1.0, 0.0}, 1e-10), DivergenceError);
  CHECK_THROWS_AS(pfq(t, Complex{1.5, 0.0}, 1e-10), DivergenceError);
  CHECK_NOTHROW(pfq(t, Complex{0.98, 0.0}, 1e-8));
}

TEST_CASE("pfq reports an unreachable tolerance within the term cap") {
  // just inside the radius the terms decay like 0.9999^n, far too slowly
  // for the cap of 10000 terms
  StructureTable t(test_util::boundary(2.0));
  CHECK_THROWS_AS(pfq(t, Complex{0.9999, 0.0}, 1e-12), ConvergenceError);
}

TEST_CASE("pfq tail bound dominates the effect of doubling the terms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xdist(0.1, 3.0);
  const ModelParams families[] = {test_util::canonical(), test_util::pho(1.5),
                                  test_util::pho(2.5), ModelParams{{1.2}, {1.7, 0.8}}};
  for (int i = 0; i < 60; ++i) {
    const ModelParams& p = families[i % 4];
    const Complex x{xdist(rng), 0.0};
    const SeriesResult coarse = pfq(p, x, 1e-6);
    const Complex refined = brute_pfq(p, x, 2 * coarse.terms_used);
    // the slack covers the rounding noise of the double-precision
    // reference sum; the bound itself concerns the truncation remainder
    const double slack = 1e-13 * std::max(1.0, std::abs(coarse.value));
    CHECK(std::abs(refined - coarse.value) <= coarse.tail_bound + slack);
    CHECK(coarse.tail_bound <= 1e-6 * std::max(1.0, std::abs(coarse.value)));
  }
}

TEST_CASE("bessel_i series against elementary closed forms") {
  CHECK(bessel_i(0.5, 2.0) ==
        doctest::Approx(std::sqrt(2.0 / (kPi * 2.0)) * std::sinh(2.0)).epsilon(1e-12));
  CHECK(bessel_i(0.0, 0.0) == 1.0);
  CHECK(bessel_i(1.5, 0.0) == 0.0);
  CHECK(bessel_i(-2.0, 0.0) == 0.0);  // integer symmetry I_{-2} = I_2
  // half-integer closed form at several x
  for (double x : {0.5, 1.0, 5.0, 20.0, 50.0}) {
    const double want = std::sqrt(2.0 / (kPi * x)) * std::sinh(x);
    CHECK(bessel_i(0.5, x) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bessel_i(0.5, -1.0), DomainError);
}

TEST_CASE("bessel_i agrees with the standard library for nonnegative orders") {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.5}) {
    for (double x : {0.1, 1.0, 4.0, 12.0, 30.0}) {
      CHECK(bessel_i(nu, x) == doctest::Approx(std::cyl_bessel_i(nu, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("bessel_k closed forms and order symmetry") {
  CHECK(bessel_k(0.5, 2.0) == doctest::Approx(std::sqrt(kPi / 4.0) * std::exp(-2.0)).epsilon(1e-12));
  CHECK(bessel_k(0.5, 1.0) == doctest::Approx(std::sqrt(kPi / 2.0) * std::exp(-1.0)).epsilon(1e-12));
  CHECK(bessel_k(-1.5, 3.0) == bessel_k(1.5, 3.0));
  for (double x : {0.01, 0.1, 1.0, 10.0, 50.0}) {
    const double want = std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
    CHECK(bessel_k(0.5, x) == doctest::Approx(want).epsilon(1e-8));
  }
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(0.5, -1.0), DomainError);
}

TEST_CASE("radial_quadrature on exponential-decay integrands") {
  CHECK(radial_quadrature([](double x) { return std::exp(-x); }, 1e-10) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(radial_quadrature([](double x) { return x > 0.0 ? std::exp(3.0 * std::log(x) - x) : 0.0; },
                          1e-10) == doctest::Approx(6.0).epsilon(1e-9));
  // 2 sqrt(x) K_1(2 sqrt(x)) x integrates to Gamma(2) Gamma(3) = 2
  const double got = radial_quadrature(
      [](double x) {
        if (x <= 0.0) return 0.0;
        const double t = std::sqrt(x);
        return 2.0 * t * bessel_k(1.0, 2.0 * t) * x;
      },
      1e-9, {20.0});
  CHECK(got == doctest::Approx(2.0).epsilon(1e-7));
  CHECK_THROWS_AS(radial_quadrature([](double) { return 1.0; }, 1e-10), QuadratureError);
}
