#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "satfront/errors.hpp"
#include "satfront/reaction.hpp"

using namespace satfront;

namespace {
double cubic(double s, double a) { return s * (1.0 - s) * (s - a); }
}  // namespace

TEST_CASE("cubic evaluation and sign pattern") {
  auto r = build_cubic(0.4);
  CHECK(r(0.0) == 0.0);
  CHECK(r(0.4) == 0.0);
  CHECK(r(1.0) == 0.0);
  CHECK(r(0.2) < 0.0);
  CHECK(r(0.7) > 0.0);
  for (double s : {0.05, 0.3, 0.55, 0.9})
    CHECK(r(s) == doctest::Approx(cubic(s, 0.4)).epsilon(1e-15));
  // extended by zero outside the unit interval
  CHECK(r(-0.5) == 0.0);
  CHECK(r(1.5) == 0.0);
}

TEST_CASE("cubic derivative and curvature constants") {
  auto r = build_cubic(0.4);
  CHECK(r.alpha() == 0.4);
  CHECK(r.f_prime_alpha() == doctest::Approx(0.24).epsilon(1e-14));
  CHECK(r.f_prime(1.0) == doctest::Approx(-0.6).epsilon(1e-14));
  double h = 1e-6;
  for (double s : {0.1, 0.4, 0.8})
    CHECK(r.f_prime(s) ==
          doctest::Approx((r(s + h) - r(s - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("potential and barrier integrals against quadrature") {
  auto r = build_cubic(0.4);
  auto f = [&](double s) { return r(s); };
  for (double s : {0.2, 0.4, 0.6, 1.0})
    CHECK(r.F(s) == doctest::Approx(oracles::quad(f, 0.0, s)).epsilon(1e-12));

  // eps_bar = integral of the negative part = -F(alpha), exactly 64/7500
  CHECK(r.eps_bar() == doctest::Approx(64.0 / 7500.0).epsilon(1e-12));
  CHECK(r.eps_bar() == doctest::Approx(-r.F(0.4)).epsilon(1e-14));

  // F_minus climbs to eps_bar and freezes there
  CHECK(r.F_minus(0.4) == doctest::Approx(r.eps_bar()).epsilon(1e-14));
  CHECK(r.F_minus(0.0) == 0.0);
  CHECK(r.F_minus(0.2) ==
        doctest::Approx(-oracles::quad(f, 0.0, 0.2)).epsilon(1e-12));

  // F_plus(s) = integral of f over [s, 1]
  CHECK(r.F_plus(1.0) == 0.0);
  CHECK(r.F_plus(0.5) ==
        doctest::Approx(oracles::quad(f, 0.5, 1.0)).epsilon(1e-12));
  CHECK(r.total_integral() ==
        doctest::Approx(oracles::quad(f, 0.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("v_zero is the quadratic-factor root for the cubic") {
  auto r = build_cubic(0.4);
  // F(v) = -v^2/12 (3v^2 - 2(1+a)... ) vanishing inside (alpha, 1): for
  // a = 0.4 the root is exactly 2/3.
  CHECK(r.v_zero() == 2.0 / 3.0);
  CHECK(r.F(r.v_zero()) == doctest::Approx(0.0).epsilon(1e-15));
  // independent bisection on F
  double root =
      oracles::bisect([&](double s) { return r.F(s); }, 0.45, 0.99, 1e-14);
  CHECK(r.v_zero() == doctest::Approx(root).epsilon(1e-12));
}

TEST_CASE("total integral positivity requires a below one half") {
  CHECK_THROWS_AS(build_cubic(0.5), DomainError);
  CHECK_THROWS_AS(build_cubic(0.0), DomainError);
  CHECK_THROWS_AS(build_cubic(1.2), DomainError);
  CHECK_NOTHROW(build_cubic(0.49));
}

TEST_CASE("lipschitz-type linear envelope constant") {
  auto r = build_cubic(0.4);
  double l = r.lipschitz_l();
  for (double s = 0.0; s <= 1.0; s += 1e-3) {
    CHECK(r(s) >= -l * s - 1e-12);
    CHECK(r(s) <= l * (1.0 - s) + 1e-12);
  }
}

TEST_CASE("tabulated reaction reproduces the cubic") {
  std::vector<double> s, f;
  for (int i = 0; i <= 200; ++i) {
    double x = i / 200.0;
    s.push_back(x);
    f.push_back(cubic(x, 0.4));
  }
  auto tab = build_from_table(s, f, 0.4);
  CHECK(!tab.closed_form());
  for (double x : {0.1, 0.35, 0.62, 0.9})
    CHECK(tab(x) == doctest::Approx(cubic(x, 0.4)).epsilon(1e-5));
  CHECK(tab.eps_bar() == doctest::Approx(64.0 / 7500.0).epsilon(1e-5));
  CHECK(tab.v_zero() == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
  CHECK(tab.f_prime_alpha() == doctest::Approx(0.24).epsilon(1e-3));
}

TEST_CASE("table validation rejects shape violations") {
  std::vector<double> s = {0.0, 0.25, 0.5, 0.75, 1.0};
  // wrong sign on (0, alpha)
  CHECK_THROWS_AS(build_from_table(s, {0.0, 0.1, 0.2, 0.1, 0.0}, 0.5),
                  ValidationError);
  // nonzero at the left equilibrium
  CHECK_THROWS_AS(build_from_table(s, {0.1, -0.1, 0.0, 0.1, 0.0}, 0.5),
                  ValidationError);
  // mismatched lengths
  CHECK_THROWS_AS(build_from_table(s, {0.0, -0.1, 0.1, 0.0}, 0.5),
                  ValidationError);
}

TEST_CASE("reflection swaps the equilibrium structure") {
  auto r = build_cubic(0.4);
  auto m = r.reflected();
  CHECK(m.is_reflected());
  CHECK(m.alpha() == doctest::Approx(0.6).epsilon(1e-15));
  for (double s : {0.1, 0.45, 0.8})
    CHECK(m(s) == doctest::Approx(-r(1.0 - s)).epsilon(1e-15));
  // f'(1-alpha) of the reflection equals f'(alpha) of the original
  CHECK(m.f_prime_alpha() == doctest::Approx(r.f_prime_alpha()).epsilon(1e-12));
}

TEST_CASE("linear bound verdict for the cubic") {
  auto r = build_cubic(0.4);
  auto rep = validate_linear_bound(r);
  // the cubic exceeds f'(alpha)|s-alpha| slightly near the middle
  CHECK(!rep.holds);
  CHECK(rep.worst_ratio > 1.0);
  CHECK(rep.worst_ratio < 1.1);
  CHECK(rep.worst_s == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.worst_ratio == doctest::Approx(25.0 / 24.0).epsilon(1e-9));
}
