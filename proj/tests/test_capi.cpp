#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "satfront.h"

namespace {

// RAII so a failing CHECK does not leak handles into the next subcase
template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Destroy(p); }
  T** slot() { return &p; }
  operator T*() const { return p; }
};

using Reaction = Handle<sf_reaction, sf_reaction_destroy>;
using Flux = Handle<sf_flux, sf_flux_destroy>;
using Trajectory = Handle<sf_trajectory, sf_trajectory_destroy>;
using Profile = Handle<sf_profile, sf_profile_destroy>;
using Report = Handle<sf_report, sf_report_destroy>;

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out{s};
  sf_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status names and error reporting") {
  CHECK(std::strcmp(sf_status_name(SF_OK), "ok") == 0);
  CHECK(std::strcmp(sf_status_name(SF_ERR_INVALID_ARG), "invalid_argument") == 0);
  CHECK(std::strcmp(sf_status_name(SF_ERR_REGIME), "regime") == 0);
  CHECK(std::strcmp(sf_status_name(SF_ERR_DOMAIN), "domain") == 0);
  CHECK(std::strcmp(sf_status_name(SF_ERR_CONFIG), "config") == 0);

  CHECK(sf_reaction_cubic(0.4, nullptr) == SF_ERR_INVALID_ARG);
  CHECK(std::string(sf_last_error()).find("NULL") != std::string::npos);

  Reaction r;
  CHECK(sf_reaction_cubic(1.7, r.slot()) == SF_ERR_DOMAIN);
  CHECK(std::string(sf_last_error()).size() > 0);
  // destroy tolerates NULL
  sf_reaction_destroy(nullptr);
  sf_flux_destroy(nullptr);
  sf_trajectory_destroy(nullptr);
  sf_profile_destroy(nullptr);
  sf_report_destroy(nullptr);
}

TEST_CASE("reaction handle round trip") {
  Reaction r;
  REQUIRE(sf_reaction_cubic(0.4, r.slot()) == SF_OK);
  double alpha, eps_bar, v_zero, total;
  REQUIRE(sf_reaction_info(r, &alpha, &eps_bar, &v_zero, &total) == SF_OK);
  CHECK(alpha == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(eps_bar == doctest::Approx(64.0 / 7500.0).epsilon(1e-12));
  CHECK(v_zero == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(total == doctest::Approx(1.0 / 60.0).epsilon(1e-12));

  double f, fp, pot;
  REQUIRE(sf_reaction_eval(r, 0.5, &f, &fp, &pot) == SF_OK);
  CHECK(f == doctest::Approx(0.025).epsilon(1e-14));
  // out-slots are optional
  CHECK(sf_reaction_eval(r, 0.5, &f, nullptr, nullptr) == SF_OK);
  CHECK(sf_reaction_eval(nullptr, 0.5, &f, nullptr, nullptr) ==
        SF_ERR_INVALID_ARG);

  Reaction rj;
  REQUIRE(sf_reaction_from_json("{\"type\":\"cubic\",\"a\":0.4}", rj.slot()) ==
          SF_OK);
  double alpha2;
  REQUIRE(sf_reaction_info(rj, &alpha2, nullptr, nullptr, nullptr) == SF_OK);
  CHECK(alpha2 == alpha);

  Reaction bad;
  CHECK(sf_reaction_from_json("{\"type\":\"cubic\"}", bad.slot()) ==
        SF_ERR_CONFIG);
  CHECK(sf_reaction_from_json("not json", bad.slot()) == SF_ERR_CONFIG);
}

TEST_CASE("flux handle round trip") {
  Flux fl;
  REQUIRE(sf_flux_mean_curvature(fl.slot()) == SF_OK);
  double m0, kappa;
  REQUIRE(sf_flux_info(fl, &m0, &kappa) == SF_OK);
  CHECK(m0 == 1.0);
  CHECK(kappa == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  double p, q;
  REQUIRE(sf_flux_eval(fl, 1.0, &p, &q) == SF_OK);
  CHECK(p == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(q == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-14));

  double t;
  REQUIRE(sf_flux_inverse(fl, q, &t) == SF_OK);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sf_flux_inverse(fl, 1.5, &t) == SF_ERR_DOMAIN);

  Flux pw;
  REQUIRE(sf_flux_power(2.0, 1.0, pw.slot()) == SF_OK);
  Flux badf;
  CHECK(sf_flux_power(0.5, 1.0, badf.slot()) == SF_ERR_DOMAIN);
  CHECK(sf_flux_from_json("{\"type\":\"sine\"}", badf.slot()) == SF_ERR_CONFIG);

  Flux fj;
  REQUIRE(sf_flux_from_json("{\"type\":\"power\",\"m\":2,\"delta\":1}",
                            fj.slot()) == SF_OK);
  double m0j;
  REQUIRE(sf_flux_info(fj, &m0j, nullptr) == SF_OK);
  double m0p;
  REQUIRE(sf_flux_info(pw, &m0p, nullptr) == SF_OK);
  CHECK(m0j == m0p);
}

TEST_CASE("model parser falls back to defaults") {
  Reaction r;
  Flux fl;
  REQUIRE(sf_model_from_json(nullptr, r.slot(), fl.slot()) == SF_OK);
  double alpha, m0;
  REQUIRE(sf_reaction_info(r, &alpha, nullptr, nullptr, nullptr) == SF_OK);
  REQUIRE(sf_flux_info(fl, &m0, nullptr) == SF_OK);
  CHECK(alpha == doctest::Approx(0.4));
  CHECK(m0 == 1.0);

  Reaction r2;
  Flux fl2;
  REQUIRE(sf_model_from_json(
              "{\"reaction\":{\"type\":\"cubic\",\"a\":0.3}}", r2.slot(),
              fl2.slot()) == SF_OK);
  double alpha2;
  REQUIRE(sf_reaction_info(r2, &alpha2, nullptr, nullptr, nullptr) == SF_OK);
  CHECK(alpha2 == doctest::Approx(0.3));
}

TEST_CASE("shooting through the C surface") {
  Reaction r;
  Flux fl;
  REQUIRE(sf_model_from_json(nullptr, r.slot(), fl.slot()) == SF_OK);

  Trajectory t;
  REQUIRE(sf_shoot(r, fl, 0.01, 0.2, 1.0, SF_BACKWARD, 0.4, -1.0, -1.0,
                   t.slot()) == SF_OK);
  size_t n = 0;
  REQUIRE(sf_trajectory_size(t, &n) == SF_OK);
  CHECK(n > 50);
  double v, y, yp;
  REQUIRE(sf_trajectory_sample(t, 0, &v, &y, &yp) == SF_OK);
  CHECK(v < 0.5);
  REQUIRE(sf_trajectory_sample(t, n - 1, &v, &y, &yp) == SF_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sf_trajectory_sample(t, n, &v, &y, &yp) == SF_ERR_INVALID_ARG);

  int kind;
  double ev, ey;
  REQUIRE(sf_trajectory_event(t, &kind, &ev, &ey) == SF_OK);
  CHECK(kind == SF_EVENT_ENDPOINT);
  CHECK(ey < 1e-6);

  double ym;
  REQUIRE(sf_trajectory_eval(t, 0.7, &ym) == SF_OK);
  CHECK(ym > 0.0);
  CHECK(ym < 0.01);

  std::string csv = take([&] {
    char* s = nullptr;
    REQUIRE(sf_trajectory_csv(t, &s) == SF_OK);
    return s;
  }());
  CHECK(csv.rfind("v,y\n", 0) == 0);
  std::string side = take([&] {
    char* s = nullptr;
    REQUIRE(sf_trajectory_sidecar_json(t, &s) == SF_OK);
    return s;
  }());
  CHECK(side.find("\"backward\"") != std::string::npos);
  CHECK(side.find("\"reached_endpoint\"") != std::string::npos);

  Trajectory bad;
  CHECK(sf_shoot(r, fl, 0.01, 0.0095, 0.4, SF_FORWARD, 1.0, -1.0, -1.0,
                 bad.slot()) == SF_ERR_SEED);
}

TEST_CASE("speed computations through the C surface") {
  Reaction r;
  Flux fl;
  REQUIRE(sf_model_from_json(nullptr, r.slot(), fl.slot()) == SF_OK);

  sf_speed_result bs;
  REQUIRE(sf_speed_bistable(r, fl, 0.01, 1e-7, &bs) == SF_OK);
  CHECK(bs.kind == SF_SPEED_BISTABLE);
  CHECK(bs.regime == SF_REGIME_REGULAR);
  CHECK(bs.value == doctest::Approx(6.3255e-4).epsilon(1e-3));
  CHECK(bs.bracket_high - bs.bracket_low <= 1e-7);
  CHECK(bs.iterations > 5);

  sf_speed_result below;
  REQUIRE(sf_speed_bistable(r, fl, 0.005, 1e-7, &below) == SF_OK);
  CHECK(below.regime == SF_REGIME_DISCONTINUOUS);
  CHECK(below.value == 0.0);

  sf_speed_result ms;
  REQUIRE(sf_speed_monostable(r, fl, 0.01, 0, &ms) == SF_OK);
  CHECK(ms.kind == SF_SPEED_MONOSTABLE);
  CHECK(ms.value == doctest::Approx(2.0 * std::sqrt(0.0024)).epsilon(1e-12));
  CHECK(sf_speed_monostable(r, fl, 0.01, 1, &ms) == SF_ERR_LINEAR_BOUND);

  sf_speed_result emp;
  REQUIRE(sf_speed_monostable_shooting(r, fl, 0.01, 1e-7, &emp) == SF_OK);
  CHECK(std::abs(emp.value - 2.0 * std::sqrt(0.0024)) <
        0.01 * 2.0 * std::sqrt(0.0024));

  std::string js = take([&] {
    char* s = nullptr;
    REQUIRE(sf_speed_result_json(&bs, &s) == SF_OK);
    return s;
  }());
  CHECK(js.find("\"bistable_star\"") != std::string::npos);
  CHECK(js.find("\"regular_front\"") != std::string::npos);
}

TEST_CASE("profile construction and inspection") {
  Reaction r;
  Flux fl;
  REQUIRE(sf_model_from_json(nullptr, r.slot(), fl.slot()) == SF_OK);

  Profile front;
  REQUIRE(sf_profile_monostable_front(r, fl, 0.01, 0.2, front.slot()) == SF_OK);
  int kind, has_jump;
  double eps, c, norm, vm, vp;
  REQUIRE(sf_profile_info(front, &kind, &eps, &c, &norm, &has_jump, &vm, &vp) ==
          SF_OK);
  CHECK(kind == SF_PROFILE_REGULAR_FRONT);
  CHECK(eps == 0.01);
  CHECK(c == 0.2);
  CHECK(norm == doctest::Approx(0.7));
  CHECK(has_jump == 0);

  double z_min, z_max;
  REQUIRE(sf_profile_extent(front, &z_min, &z_max) == SF_OK);
  CHECK(z_min < -1.0);
  CHECK(z_max > 1.0);

  double v0;
  REQUIRE(sf_profile_eval(front, 0.0, &v0) == SF_OK);
  CHECK(v0 == doctest::Approx(0.7).epsilon(1e-10));

  size_t pieces = 0;
  REQUIRE(sf_profile_num_pieces(front, &pieces) == SF_OK);
  REQUIRE(pieces == 1);
  size_t len = 0;
  REQUIRE(sf_profile_piece_size(front, 0, &len) == SF_OK);
  REQUIRE(len > 100);
  std::vector<double> z(len), v(len), dv(len);
  int increasing = 0;
  REQUIRE(sf_profile_piece_copy(front, 0, z.data(), v.data(), dv.data(), len,
                                &increasing) == SF_OK);
  CHECK(increasing == 1);
  CHECK(z.front() == z_min);
  CHECK(z.back() == z_max);
  for (size_t i = 1; i < len; ++i) CHECK(z[i] > z[i - 1]);

  double sup, at_z;
  long npts;
  REQUIRE(sf_profile_residual(front, r, fl, &sup, &at_z, &npts) == SF_OK);
  CHECK(sup < 1e-4);
  CHECK(npts > 100);

  // below the monostable threshold the front does not exist
  Profile none;
  CHECK(sf_profile_monostable_front(r, fl, 0.01, 0.05, none.slot()) ==
        SF_ERR_REGIME);
  // below the bistable threshold the critical front does not exist either
  CHECK(sf_profile_bistable_front(r, fl, 0.005, -1.0, none.slot()) ==
        SF_ERR_REGIME);

  Profile steady;
  REQUIRE(sf_profile_steady(r, fl, 0.005, steady.slot()) == SF_OK);
  REQUIRE(sf_profile_info(steady, &kind, &eps, &c, &norm, &has_jump, &vm,
                          &vp) == SF_OK);
  CHECK(kind == SF_PROFILE_DISCONTINUOUS_STEADY);
  CHECK(has_jump == 1);
  CHECK(vm > 0.0);
  CHECK(vm < 0.4);
  CHECK(vp > 0.4);
  CHECK(vp < 1.0);
  // residual is undefined across a jump
  CHECK(sf_profile_residual(steady, r, fl, &sup, &at_z, &npts) ==
        SF_ERR_DOMAIN);

  Profile wiggle;
  REQUIRE(sf_profile_nonmonotone(r, fl, 0.05, 0.13, 1, 4, wiggle.slot()) ==
          SF_OK);
  REQUIRE(sf_profile_info(wiggle, &kind, nullptr, nullptr, nullptr, nullptr,
                          nullptr, nullptr) == SF_OK);
  CHECK(kind == SF_PROFILE_NONMONOTONE);
  size_t wiggle_pieces = 0;
  REQUIRE(sf_profile_num_pieces(wiggle, &wiggle_pieces) == SF_OK);
  CHECK(wiggle_pieces >= 3);

  Profile inviscid;
  REQUIRE(sf_profile_inviscid(r, 0.2, std::nan(""), std::nan(""),
                              inviscid.slot()) == SF_OK);
  REQUIRE(sf_profile_info(inviscid, &kind, &eps, nullptr, nullptr, nullptr,
                          nullptr, nullptr) == SF_OK);
  CHECK(kind == SF_PROFILE_INVISCID);
  CHECK(eps == 0.0);
}

TEST_CASE("profile serialization is deterministic") {
  Reaction r;
  Flux fl;
  REQUIRE(sf_model_from_json(nullptr, r.slot(), fl.slot()) == SF_OK);
  Profile p1, p2;
  REQUIRE(sf_profile_monostable_front(r, fl, 0.01, 0.2, p1.slot()) == SF_OK);
  REQUIRE(sf_profile_monostable_front(r, fl, 0.01, 0.2, p2.slot()) == SF_OK);

  auto csv = [&](sf_profile* p) {
    char* s = nullptr;
    REQUIRE(sf_profile_csv(p, &s) == SF_OK);
    return take(s);
  };
  std::string c1 = csv(p1), c2 = csv(p2);
  CHECK(c1 == c2);
  CHECK(c1.rfind("z,v,piece_index,monotonicity\n", 0) == 0);

  auto side = [&](sf_profile* p, int with_residual) {
    char* s = nullptr;
    REQUIRE(sf_profile_sidecar_json(p, r, fl, with_residual, &s) == SF_OK);
    return take(s);
  };
  std::string s1 = side(p1, 1), s2 = side(p2, 1);
  CHECK(s1 == s2);
  CHECK(s1.find("\"residual\"") != std::string::npos);
  CHECK(s1.back() == '\n');
  std::string s_plain = side(p1, 0);
  CHECK(s_plain.find("\"residual\":null") != std::string::npos);
}

TEST_CASE("reports through the C surface") {
  Reaction r;
  Flux fl;
  REQUIRE(sf_model_from_json(nullptr, r.slot(), fl.slot()) == SF_OK);

  const double eps_fixed[] = {0.04, 0.02};
  Report fixed;
  REQUIRE(sf_report_fixed_speed(r, fl, 0.2, eps_fixed, 2, 50.0, 2001,
                                fixed.slot()) == SF_OK);
  size_t n = 0;
  REQUIRE(sf_report_size(fixed, &n) == SF_OK);
  REQUIRE(n == 2);
  double eps0, val0, eps1, val1;
  REQUIRE(sf_report_row(fixed, 0, &eps0, &val0) == SF_OK);
  REQUIRE(sf_report_row(fixed, 1, &eps1, &val1) == SF_OK);
  CHECK(eps0 == 0.04);
  CHECK(val1 < val0);
  CHECK(sf_report_row(fixed, 2, &eps0, &val0) == SF_ERR_INVALID_ARG);

  std::string csv = take([&] {
    char* s = nullptr;
    REQUIRE(sf_report_csv(fixed, &s) == SF_OK);
    return s;
  }());
  CHECK(csv.rfind("eps,value\n", 0) == 0);

  std::string hdr = take([&] {
    char* s = nullptr;
    REQUIRE(sf_report_header_json(fixed, "fixed_speed", std::nan(""), &s) ==
            SF_OK);
    return s;
  }());
  CHECK(hdr.find("\"fixed_speed\"") != std::string::npos);
  CHECK(hdr.find("\"target\":null") != std::string::npos);

  const double eps_speed[] = {0.04, 0.01};
  Report sweep;
  REQUIRE(sf_report_speed_sweep(r, fl, SF_SIDE_MONOSTABLE, 0, eps_speed, 2,
                                1e-7, sweep.slot()) == SF_OK);
  REQUIRE(sf_report_size(sweep, &n) == SF_OK);
  REQUIRE(n == 2);
  REQUIRE(sf_report_row(sweep, 0, &eps0, &val0) == SF_OK);
  REQUIRE(sf_report_row(sweep, 1, &eps1, &val1) == SF_OK);
  CHECK(val0 == doctest::Approx(2.0 * val1).epsilon(1e-10));

  double target = 0.0;
  const double eps_pair[] = {0.05};
  Report pairing;
  REQUIRE(sf_report_pairing(r, fl, SF_SIDE_BISTABLE, 1.0, eps_pair, 1, &target,
                            pairing.slot()) == SF_OK);
  CHECK(target == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const double eps_energy[] = {0.05};
  Report energy;
  REQUIRE(sf_report_energy(r, fl, eps_energy, 1, 1e-7, energy.slot()) == SF_OK);
  REQUIRE(sf_report_row(energy, 0, &eps0, &val0) == SF_OK);
  CHECK(std::abs(val0) < 1e-6);

  Report bad;
  CHECK(sf_report_step(r, fl, SF_SIDE_BISTABLE, nullptr, 0, 0.5, 50.0, 2001,
                       -1.0, bad.slot()) == SF_ERR_DOMAIN);
}
