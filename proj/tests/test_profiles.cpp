#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "satfront/profiles.hpp"
#include "satfront/shooting.hpp"

using namespace satfront;

namespace {
const auto kReaction = build_cubic(0.4);
const auto kFlux = mean_curvature_flux();

WaveProfile landing_front(double eps, double c) {
  ReducedField fld{kReaction, kFlux, eps, c};
  auto traj = snap_landing(shoot(fld, 1.0, Direction::Backward, 0.4), 0.4);
  return reconstruct_front(traj, kFlux, {}, 0.7);
}
}  // namespace

TEST_CASE("single-shot front reconstruction") {
  auto wp = landing_front(0.01, 0.2);
  CHECK(wp.kind == ProfileKind::RegularFront);
  CHECK(wp.eps == 0.01);
  CHECK(wp.speed_c == 0.2);
  CHECK(!wp.has_jump);
  CHECK(wp.eval(0.0) == doctest::Approx(0.7).epsilon(1e-10));

  // monotone increasing from alpha to 1
  double prev = -1.0;
  for (double z = wp.z_min(); z <= wp.z_max(); z += 0.05) {
    double v = wp.eval(z);
    CHECK(v >= prev - 1e-12);
    CHECK(v >= 0.4 - 1e-9);
    CHECK(v <= 1.0 + 1e-9);
    prev = v;
  }
  CHECK(wp.eval(wp.z_min()) == doctest::Approx(0.4).epsilon(1e-4));
  CHECK(wp.eval(wp.z_max()) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("profile slopes match finite differences of the values") {
  auto wp = landing_front(0.01, 0.2);
  double h = 1e-5;
  for (double z : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
    double fd = (wp.eval(z + h) - wp.eval(z - h)) / (2 * h);
    CHECK(wp.eval_slope(z) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("uniform runs sit on the global grid") {
  auto wp = landing_front(0.02, 0.2);
  for (const auto& p : wp.pieces) {
    REQUIRE(p.uniform_end <= p.z.size());
    if (p.uniform_end < p.uniform_begin + 2) continue;
    double h = p.z[p.uniform_begin + 1] - p.z[p.uniform_begin];
    CHECK(h > 0.0);
    // spacing is dz / 2^k for some k
    double ratio = 0.01 / h;
    CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
    for (size_t i = p.uniform_begin; i + 1 < p.uniform_end; ++i) {
      CHECK(p.z[i + 1] - p.z[i] == doctest::Approx(h).epsilon(1e-9));
      double k = p.z[i] / h;
      CHECK(std::abs(k - std::round(k)) < 1e-6);
    }
  }
}

TEST_CASE("second-order residual of a reconstructed front") {
  auto wp = landing_front(0.01, 0.2);
  auto rep = profile_residual(wp, kReaction, kFlux);
  CHECK(rep.n > 100);
  CHECK(rep.sup < 1e-4);
}

TEST_CASE("pair stitching at the bistable critical speed") {
  double eps = 0.01;
  auto sr = critical_speed_bistable(kReaction, kFlux, eps, 1e-12);
  ReducedField fld{kReaction, kFlux, eps, sr.value};
  auto up = shoot(fld, 0.0, Direction::Forward, 1.0);
  auto down = shoot(fld, 1.0, Direction::Backward, 0.0);
  auto wp = reconstruct_front_pair(up, down, kFlux, {}, 0.5);
  CHECK(wp.eval(0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(wp.eval(wp.z_min()) == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(wp.eval(wp.z_max()) == doctest::Approx(1.0).epsilon(1e-4));
  auto rep = profile_residual(wp, kReaction, kFlux);
  CHECK(rep.sup < 1e-4);
  // the layer carries the extreme slope f_max / c
  double smax = 0.0;
  for (double z = -0.1; z <= 0.1; z += 1e-3)
    smax = std::max(smax, wp.eval_slope(z));
  CHECK(smax > 10.0);
}

TEST_CASE("pair stitching demands anchored opposing shots") {
  double eps = 0.01;
  ReducedField fld{kReaction, kFlux, eps, 6.3e-4};
  auto up = shoot(fld, 0.0, Direction::Forward, 1.0);
  CHECK_THROWS_AS(reconstruct_front_pair(up, up, kFlux, {}, 0.5), DomainError);
}

TEST_CASE("reconstruction rejects a ceiling-terminated trajectory") {
  ReducedField fld{kReaction, kFlux, 0.01, 0.1};
  auto blow = shoot(fld, 0.0, Direction::Forward, 1.0);
  CHECK(blow.event.kind == TerminalEvent::Kind::BlowUp);
  CHECK_THROWS_AS(reconstruct_front(blow, kFlux), DomainError);
}

TEST_CASE("discontinuous steady state below the threshold") {
  double eps = 0.005;
  auto wp = build_discontinuous_steady(kReaction, kFlux, eps);
  CHECK(wp.kind == ProfileKind::DiscontinuousSteady);
  CHECK(wp.has_jump);
  CHECK(wp.speed_c == 0.0);

  // jump endpoints against independent bisection on the closed-form branches
  double vm = oracles::bisect(
      [&](double s) { return kReaction.F_minus(s) - eps; }, 1e-6, 0.4, 1e-14);
  double vp = oracles::bisect(
      [&](double s) { return kReaction.F_plus(s) - eps; }, 0.4, 1.0 - 1e-6,
      1e-14);
  CHECK(wp.v_minus == doctest::Approx(vm).epsilon(1e-10));
  CHECK(wp.v_plus == doctest::Approx(vp).epsilon(1e-10));

  // one-sided limits at the jump; the branch slope diverges there, so the
  // approach is sqrt-slow in z
  CHECK(wp.eval(-1e-9) == doctest::Approx(wp.v_minus).epsilon(1e-3));
  CHECK(wp.eval(+1e-9) == doctest::Approx(wp.v_plus).epsilon(1e-3));
  // far tails approach the stable levels
  CHECK(wp.eval(wp.z_min()) == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(wp.eval(wp.z_max()) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("steady state is refused above the threshold") {
  CHECK_THROWS_AS(build_discontinuous_steady(kReaction, kFlux, 0.01),
                  RegimeError);
}

TEST_CASE("border steady state at the exact threshold") {
  auto wp = build_discontinuous_steady(kReaction, kFlux, kReaction.eps_bar());
  CHECK(wp.kind == ProfileKind::BorderSteady);
  // at the border the jump closes on the left: v_minus -> alpha
  CHECK(wp.v_minus == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("glued nonmonotone wave alternates around alpha") {
  double eps = 0.05;
  auto cs = critical_speed_bistable(kReaction, kFlux, eps, 1e-9);
  auto cp = critical_speed_monostable(kReaction, kFlux, eps);
  double c = 0.5 * (cs.value + cp.value);
  auto wp = glue_nonmonotone(kReaction, kFlux, eps, c, GlueStart::FromOne, 8);
  CHECK(wp.kind == ProfileKind::Nonmonotone);
  REQUIRE(wp.junctions.size() >= 5);
  // junctions are reported with ascending z; the first generated one (the
  // rightmost) sits exactly at z = 0
  CHECK(wp.junctions.back().first == 0.0);
  for (size_t i = 1; i < wp.junctions.size(); ++i)
    CHECK(wp.junctions[i - 1].first < wp.junctions[i].first);
  // generation order is right to left: alternation around alpha with
  // shrinking amplitude
  for (size_t i = 1; i + 1 < wp.junctions.size(); ++i) {
    double a = wp.junctions[i].second - 0.4;
    double b = wp.junctions[i + 1].second - 0.4;
    CHECK(a * b < 0.0);
  }
  double d1 = std::abs(wp.junctions.back().second - 0.4);
  double d2 = std::abs(wp.junctions[wp.junctions.size() - 2].second - 0.4);
  CHECK(d2 < d1);
  // flat contact at every junction
  for (const auto& [zj, vj] : wp.junctions)
    CHECK(std::abs(wp.eval_slope(zj)) <= 1e-6);
}

TEST_CASE("standing bounce glues from the zero side") {
  auto wp = glue_nonmonotone(kReaction, kFlux, 0.05, 0.0, GlueStart::FromZero,
                             4);
  CHECK(wp.kind == ProfileKind::Nonmonotone);
  REQUIRE(!wp.junctions.empty());
  // c = 0 bounce turns at the potential zero 2/3
  CHECK(wp.junctions.front().second == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("inviscid transport front") {
  auto wp = inviscid_front(kReaction, 0.2);
  CHECK(wp.kind == ProfileKind::Inviscid);
  CHECK(wp.eval(0.0) == doctest::Approx(0.7).epsilon(1e-10));
  // z(v) = c int_{0.7}^{v} ds / f(s)
  for (double v : {0.5, 0.65, 0.8, 0.95}) {
    double z_ref = 0.2 * oracles::quad(
                             [&](double s) { return 1.0 / kReaction(s); }, 0.7,
                             v, 1e-13);
    CHECK(wp.eval(z_ref) == doctest::Approx(v).epsilon(1e-6));
  }
  // increasing toward 1 on the right, alpha on the left
  CHECK(wp.eval(wp.z_max()) > 0.99);
  CHECK(wp.eval(wp.z_min()) < 0.41);
}

TEST_CASE("kinetic energy by trapezoid and by change of variables") {
  double eps = 0.01, c = 0.2;
  ReducedField fld{kReaction, kFlux, eps, c};
  auto traj = snap_landing(shoot(fld, 1.0, Direction::Backward, 0.4), 0.4);
  auto wp = reconstruct_front(traj, kFlux, {}, 0.7);
  double e_trap = kinetic_energy(wp);
  double e_quad = kinetic_energy_quadrature(traj, kFlux);
  CHECK(e_trap == doctest::Approx(e_quad).epsilon(1e-3));
  // energy identity: c int (v')^2 dz = F(1) - F(alpha)
  double target = kReaction.F(1.0) - kReaction.F(0.4);
  CHECK(c * e_quad == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("halved profile options refine every knob") {
  ProfileOptions opt;
  auto h = opt.halved();
  CHECK(h.dz == doctest::Approx(0.005));
  CHECK(h.integ.abs_tol == doctest::Approx(5e-11));
  CHECK(h.z_window == opt.z_window);
}
