#include "satfront.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "satfront/config.hpp"
#include "satfront/errors.hpp"
#include "satfront/limits.hpp"
#include "satfront/profiles.hpp"
#include "satfront/reduced_ode.hpp"
#include "satfront/shooting.hpp"

using namespace satfront;

struct sf_reaction { BistableReaction impl; };
struct sf_flux { SaturatingFlux impl; };
struct sf_trajectory { ReducedTrajectory impl; };
struct sf_profile { WaveProfile impl; };
struct sf_report { ConvergenceReport impl; };

namespace {

thread_local std::string tl_error;

sf_status fail(sf_status code, std::string message) {
  tl_error = std::move(message);
  return code;
}

sf_status invalid(const char* what) {
  return fail(SF_ERR_INVALID_ARG, std::string(what) + " must not be NULL");
}

// Every entry point funnels through here so the error taxonomy maps 1:1.
template <typename Fn>
sf_status guarded(Fn&& fn) {
  try {
    fn();
    tl_error.clear();
    return SF_OK;
  } catch (const Error& e) {
    return fail(static_cast<sf_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::exception& e) {
    return fail(SF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SF_ERR_INTERNAL, "unknown failure");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(double* slot, double value) {
  if (slot) *slot = value;
}

SpeedResult from_c(const sf_speed_result& res) {
  SpeedResult r;
  r.kind = res.kind == SF_SPEED_BISTABLE ? SpeedKind::BistableStar
                                         : SpeedKind::MonostablePlus;
  switch (res.regime) {
    case SF_REGIME_BORDER: r.regime = Regime::BorderSteadyState; break;
    case SF_REGIME_DISCONTINUOUS: r.regime = Regime::DiscontinuousSteadyState; break;
    default: r.regime = Regime::RegularFront; break;
  }
  r.eps = res.eps;
  r.value = res.value;
  r.bracket_low = res.bracket_low;
  r.bracket_high = res.bracket_high;
  r.iterations = res.iterations;
  r.tol = res.tol;
  return r;
}

void to_c(const SpeedResult& r, sf_speed_result* out) {
  out->kind = r.kind == SpeedKind::BistableStar ? SF_SPEED_BISTABLE
                                                : SF_SPEED_MONOSTABLE;
  switch (r.regime) {
    case Regime::BorderSteadyState: out->regime = SF_REGIME_BORDER; break;
    case Regime::DiscontinuousSteadyState:
      out->regime = SF_REGIME_DISCONTINUOUS;
      break;
    default: out->regime = SF_REGIME_REGULAR; break;
  }
  out->eps = r.eps;
  out->value = r.value;
  out->bracket_low = r.bracket_low;
  out->bracket_high = r.bracket_high;
  out->iterations = r.iterations;
  out->tol = r.tol;
}

std::vector<double> grid_from(const double* eps, size_t n) {
  if (!eps || n == 0) throw DomainError("empty eps grid");
  return std::vector<double>(eps, eps + n);
}

}  // namespace

extern "C" {

const char* sf_last_error(void) { return tl_error.c_str(); }

const char* sf_status_name(sf_status code) {
  switch (code) {
    case SF_OK: return "ok";
    case SF_ERR_INVALID_ARG: return "invalid_argument";
    case SF_ERR_INTERNAL: return "internal";
    default: break;
  }
  static thread_local std::string name;
  name = error_code_name(static_cast<ErrorCode>(static_cast<int>(code)));
  return name.c_str();
}

void sf_string_free(char* s) { std::free(s); }

/* --------------------------------------------------------------- model --- */

sf_status sf_reaction_cubic(double a, sf_reaction** out) {
  if (!out) return invalid("out");
  return guarded([&] { *out = new sf_reaction{build_cubic(a)}; });
}

sf_status sf_reaction_from_json(const char* json, sf_reaction** out) {
  if (!json) return invalid("json");
  if (!out) return invalid("out");
  return guarded([&] { *out = new sf_reaction{reaction_from_json(json)}; });
}

void sf_reaction_destroy(sf_reaction* r) { delete r; }

sf_status sf_reaction_eval(const sf_reaction* r, double s, double* f,
                           double* f_prime, double* potential) {
  if (!r) return invalid("reaction");
  return guarded([&] {
    if (f) *f = r->impl(s);
    if (f_prime) *f_prime = r->impl.f_prime(s);
    if (potential) *potential = r->impl.F(s);
  });
}

sf_status sf_reaction_info(const sf_reaction* r, double* alpha,
                           double* eps_bar, double* v_zero,
                           double* total_integral) {
  if (!r) return invalid("reaction");
  return guarded([&] {
    put(alpha, r->impl.alpha());
    put(eps_bar, r->impl.eps_bar());
    put(v_zero, r->impl.v_zero());
    put(total_integral, r->impl.total_integral());
  });
}

sf_status sf_flux_mean_curvature(sf_flux** out) {
  if (!out) return invalid("out");
  return guarded([&] { *out = new sf_flux{mean_curvature_flux()}; });
}

sf_status sf_flux_power(double m, double delta, sf_flux** out) {
  if (!out) return invalid("out");
  return guarded([&] { *out = new sf_flux{power_saturating_flux(m, delta)}; });
}

sf_status sf_flux_from_json(const char* json, sf_flux** out) {
  if (!json) return invalid("json");
  if (!out) return invalid("out");
  return guarded([&] { *out = new sf_flux{flux_from_json(json)}; });
}

void sf_flux_destroy(sf_flux* fl) { delete fl; }

sf_status sf_flux_eval(const sf_flux* fl, double s, double* p, double* q) {
  if (!fl) return invalid("flux");
  return guarded([&] {
    if (p) *p = fl->impl.P(s);
    if (q) *q = fl->impl.Q(s);
  });
}

sf_status sf_flux_inverse(const sf_flux* fl, double y, double* r) {
  if (!fl) return invalid("flux");
  if (!r) return invalid("out");
  return guarded([&] { *r = fl->impl.R(y); });
}

sf_status sf_flux_info(const sf_flux* fl, double* m0, double* kappa) {
  if (!fl) return invalid("flux");
  return guarded([&] {
    put(m0, fl->impl.M0());
    put(kappa, fl->impl.kappa());
  });
}

sf_status sf_model_from_json(const char* json, sf_reaction** r, sf_flux** fl) {
  if (!r) return invalid("reaction out");
  if (!fl) return invalid("flux out");
  return guarded([&] {
    ModelConfig cfg = (json && *json) ? model_from_json(json) : default_model();
    *r = new sf_reaction{cfg.reaction};
    *fl = new sf_flux{cfg.flux};
  });
}

/* ---------------------------------------------------------- trajectory --- */

sf_status sf_shoot(const sf_reaction* r, const sf_flux* fl, double eps,
                   double c, double anchor, int direction, double stop_at,
                   double abs_tol, double rel_tol, sf_trajectory** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    IntegratorOptions opt;
    if (abs_tol > 0.0) opt.abs_tol = abs_tol;
    if (rel_tol > 0.0) opt.rel_tol = rel_tol;
    ReducedField field{r->impl, fl->impl, eps, c};
    Direction dir = direction == SF_BACKWARD ? Direction::Backward
                                             : Direction::Forward;
    *out = new sf_trajectory{shoot(field, anchor, dir, stop_at, opt)};
  });
}

void sf_trajectory_destroy(sf_trajectory* t) { delete t; }

sf_status sf_trajectory_size(const sf_trajectory* t, size_t* n) {
  if (!t) return invalid("trajectory");
  if (!n) return invalid("out");
  *n = t->impl.samples.size();
  tl_error.clear();
  return SF_OK;
}

sf_status sf_trajectory_sample(const sf_trajectory* t, size_t i, double* v,
                               double* y, double* yp) {
  if (!t) return invalid("trajectory");
  if (i >= t->impl.samples.size())
    return fail(SF_ERR_INVALID_ARG, "sample index out of range");
  const TrajectorySample& s = t->impl.samples[i];
  put(v, s.v);
  put(y, s.y);
  put(yp, s.yp);
  tl_error.clear();
  return SF_OK;
}

sf_status sf_trajectory_event(const sf_trajectory* t, int* kind, double* v,
                              double* y) {
  if (!t) return invalid("trajectory");
  if (kind) {
    switch (t->impl.event.kind) {
      case TerminalEvent::Kind::HitZero: *kind = SF_EVENT_HIT_ZERO; break;
      case TerminalEvent::Kind::BlowUp: *kind = SF_EVENT_BLOW_UP; break;
      case TerminalEvent::Kind::ReachedEndpoint: *kind = SF_EVENT_ENDPOINT; break;
    }
  }
  put(v, t->impl.event.v);
  put(y, t->impl.event.y);
  tl_error.clear();
  return SF_OK;
}

sf_status sf_trajectory_eval(const sf_trajectory* t, double v, double* y) {
  if (!t) return invalid("trajectory");
  if (!y) return invalid("out");
  return guarded([&] { *y = t->impl.eval(v); });
}

sf_status sf_trajectory_csv(const sf_trajectory* t, char** out) {
  if (!t) return invalid("trajectory");
  if (!out) return invalid("out");
  return guarded([&] { *out = copy_string(trajectory_csv(t->impl)); });
}

sf_status sf_trajectory_sidecar_json(const sf_trajectory* t, char** out) {
  if (!t) return invalid("trajectory");
  if (!out) return invalid("out");
  return guarded([&] { *out = copy_string(trajectory_sidecar_json(t->impl)); });
}

/* ------------------------------------------------------ critical speeds --- */

sf_status sf_speed_bistable(const sf_reaction* r, const sf_flux* fl,
                            double eps, double tol, sf_speed_result* out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    to_c(critical_speed_bistable(r->impl, fl->impl, eps,
                                 tol > 0.0 ? tol : 1e-7),
         out);
  });
}

sf_status sf_speed_monostable(const sf_reaction* r, const sf_flux* fl,
                              double eps, int require_exact,
                              sf_speed_result* out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    to_c(critical_speed_monostable(r->impl, fl->impl, eps, require_exact != 0),
         out);
  });
}

sf_status sf_speed_monostable_shooting(const sf_reaction* r,
                                       const sf_flux* fl, double eps,
                                       double tol, sf_speed_result* out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    to_c(critical_speed_monostable_shooting(r->impl, fl->impl, eps,
                                            tol > 0.0 ? tol : 1e-7),
         out);
  });
}

sf_status sf_speed_result_json(const sf_speed_result* res, char** out) {
  if (!res) return invalid("result");
  if (!out) return invalid("out");
  return guarded([&] { *out = copy_string(speed_json(from_c(*res))); });
}

/* ------------------------------------------------------------- profiles --- */

sf_status sf_profile_bistable_front(const sf_reaction* r, const sf_flux* fl,
                                    double eps, double speed_tol,
                                    sf_profile** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    WaveProfile wp = critical_bistable_profile(
        r->impl, fl->impl, eps, speed_tol > 0.0 ? speed_tol : 1e-9);
    if (wp.kind != ProfileKind::RegularFront)
      throw RegimeError(
          "no 0 -> 1 front at this eps: the critical connection degenerates "
          "to a steady state (use the steady-state constructor)");
    *out = new sf_profile{std::move(wp)};
  });
}

sf_status sf_profile_monostable_front(const sf_reaction* r, const sf_flux* fl,
                                      double eps, double c, sf_profile** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    if (c <= 0.0) {
      *out = new sf_profile{
          critical_monostable_profile(r->impl, fl->impl, eps)};
      return;
    }
    *out = new sf_profile{fixed_speed_profile(r->impl, fl->impl, eps, c)};
  });
}

sf_status sf_profile_steady(const sf_reaction* r, const sf_flux* fl,
                            double eps, sf_profile** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    *out = new sf_profile{build_discontinuous_steady(r->impl, fl->impl, eps, {})};
  });
}

sf_status sf_profile_nonmonotone(const sf_reaction* r, const sf_flux* fl,
                                 double eps, double c, int from_one,
                                 int max_turns, sf_profile** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  if (max_turns < 1) return fail(SF_ERR_INVALID_ARG, "max_turns must be >= 1");
  return guarded([&] {
    GlueStart start = from_one ? GlueStart::FromOne : GlueStart::FromZero;
    *out = new sf_profile{glue_nonmonotone(r->impl, fl->impl, eps, c, start,
                                           static_cast<size_t>(max_turns), {})};
  });
}

sf_status sf_profile_inviscid(const sf_reaction* r, double c, double q1,
                              double q2, sf_profile** out) {
  if (!r) return invalid("reaction");
  if (!out) return invalid("out");
  return guarded([&] {
    *out = new sf_profile{inviscid_front(r->impl, c, q1, q2, {})};
  });
}

void sf_profile_destroy(sf_profile* p) { delete p; }

sf_status sf_profile_info(const sf_profile* p, int* kind, double* eps,
                          double* c, double* normalization, int* has_jump,
                          double* v_minus, double* v_plus) {
  if (!p) return invalid("profile");
  if (kind) {
    switch (p->impl.kind) {
      case ProfileKind::RegularFront: *kind = SF_PROFILE_REGULAR_FRONT; break;
      case ProfileKind::DiscontinuousSteady:
        *kind = SF_PROFILE_DISCONTINUOUS_STEADY;
        break;
      case ProfileKind::BorderSteady: *kind = SF_PROFILE_BORDER_STEADY; break;
      case ProfileKind::Nonmonotone: *kind = SF_PROFILE_NONMONOTONE; break;
      case ProfileKind::Inviscid: *kind = SF_PROFILE_INVISCID; break;
    }
  }
  put(eps, p->impl.eps);
  put(c, p->impl.speed_c);
  put(normalization, p->impl.normalization);
  if (has_jump) *has_jump = p->impl.has_jump ? 1 : 0;
  put(v_minus, p->impl.v_minus);
  put(v_plus, p->impl.v_plus);
  tl_error.clear();
  return SF_OK;
}

sf_status sf_profile_extent(const sf_profile* p, double* z_min, double* z_max) {
  if (!p) return invalid("profile");
  return guarded([&] {
    put(z_min, p->impl.z_min());
    put(z_max, p->impl.z_max());
  });
}

sf_status sf_profile_num_pieces(const sf_profile* p, size_t* n) {
  if (!p) return invalid("profile");
  if (!n) return invalid("out");
  *n = p->impl.pieces.size();
  tl_error.clear();
  return SF_OK;
}

sf_status sf_profile_piece_size(const sf_profile* p, size_t piece, size_t* n) {
  if (!p) return invalid("profile");
  if (!n) return invalid("out");
  if (piece >= p->impl.pieces.size())
    return fail(SF_ERR_INVALID_ARG, "piece index out of range");
  *n = p->impl.pieces[piece].z.size();
  tl_error.clear();
  return SF_OK;
}

sf_status sf_profile_piece_copy(const sf_profile* p, size_t piece, double* z,
                                double* v, double* dvdz, size_t cap,
                                int* increasing) {
  if (!p) return invalid("profile");
  if (piece >= p->impl.pieces.size())
    return fail(SF_ERR_INVALID_ARG, "piece index out of range");
  const ProfilePiece& pc = p->impl.pieces[piece];
  size_t n = pc.z.size() < cap ? pc.z.size() : cap;
  for (size_t i = 0; i < n; ++i) {
    if (z) z[i] = pc.z[i];
    if (v) v[i] = pc.v[i];
    if (dvdz) dvdz[i] = pc.dvdz[i];
  }
  if (increasing) *increasing = pc.increasing ? 1 : 0;
  tl_error.clear();
  return SF_OK;
}

sf_status sf_profile_eval(const sf_profile* p, double z, double* v) {
  if (!p) return invalid("profile");
  if (!v) return invalid("out");
  return guarded([&] { *v = p->impl.eval(z); });
}

sf_status sf_profile_residual(const sf_profile* p, const sf_reaction* r,
                              const sf_flux* fl, double* sup, double* at_z,
                              long* points) {
  if (!p) return invalid("profile");
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  return guarded([&] {
    if (p->impl.has_jump)
      throw DomainError(
          "residual is undefined across a jump; the stencil would straddle "
          "the discontinuity");
    ResidualReport rep = profile_residual(p->impl, r->impl, fl->impl);
    put(sup, rep.sup);
    put(at_z, rep.at_z);
    if (points) *points = static_cast<long>(rep.n);
  });
}

sf_status sf_profile_csv(const sf_profile* p, char** out) {
  if (!p) return invalid("profile");
  if (!out) return invalid("out");
  return guarded([&] { *out = copy_string(profile_csv(p->impl)); });
}

sf_status sf_profile_sidecar_json(const sf_profile* p, const sf_reaction* r,
                                  const sf_flux* fl, int with_residual,
                                  char** out) {
  if (!p) return invalid("profile");
  if (!out) return invalid("out");
  if (with_residual && (!r || !fl))
    return invalid("reaction/flux (required with with_residual)");
  return guarded([&] {
    if (with_residual) {
      ResidualReport rep = profile_residual(p->impl, r->impl, fl->impl);
      *out = copy_string(profile_sidecar_json(p->impl, &rep));
    } else {
      *out = copy_string(profile_sidecar_json(p->impl, nullptr));
    }
  });
}

/* ---------------------------------------------------- convergence sweeps --- */

sf_status sf_report_step(const sf_reaction* r, const sf_flux* fl, int side,
                         const double* eps, size_t n_eps, double exclusion,
                         double half_width, long points, double speed_tol,
                         sf_report** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    std::vector<double> grid = grid_from(eps, n_eps);
    double tol = speed_tol > 0.0 ? speed_tol : 1e-9;
    ConvergenceReport rep =
        side == SF_SIDE_MONOSTABLE
            ? monostable_limit_convergence(r->impl, fl->impl, grid, exclusion,
                                           half_width, points, tol)
            : steady_limit_convergence(r->impl, fl->impl, grid, exclusion,
                                       half_width, points, tol);
    *out = new sf_report{std::move(rep)};
  });
}

sf_status sf_report_fixed_speed(const sf_reaction* r, const sf_flux* fl,
                                double c, const double* eps, size_t n_eps,
                                double half_width, long points,
                                sf_report** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    *out = new sf_report{fixed_speed_convergence(
        r->impl, fl->impl, c, grid_from(eps, n_eps), half_width, points)};
  });
}

sf_status sf_report_pairing(const sf_reaction* r, const sf_flux* fl, int side,
                            double psi_width, const double* eps, size_t n_eps,
                            double* target_out, sf_report** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    BumpFunction psi{psi_width};
    std::vector<double> grid = grid_from(eps, n_eps);
    ConvergenceReport rep;
    double jump;
    if (side == SF_SIDE_MONOSTABLE) {
      rep = pairing_convergence_monostable(r->impl, fl->impl, psi, grid);
      jump = 1.0 - r->impl.alpha();
    } else {
      rep = pairing_convergence_bistable(r->impl, fl->impl, psi, grid);
      jump = 1.0;
    }
    if (target_out) *target_out = jump * psi(0.0);
    *out = new sf_report{std::move(rep)};
  });
}

sf_status sf_report_energy(const sf_reaction* r, const sf_flux* fl,
                           const double* eps, size_t n_eps, double speed_tol,
                           sf_report** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    *out = new sf_report{energy_identity_report(
        r->impl, fl->impl, grid_from(eps, n_eps),
        speed_tol > 0.0 ? speed_tol : 1e-7)};
  });
}

sf_status sf_report_speed_sweep(const sf_reaction* r, const sf_flux* fl,
                                int side, int empirical, const double* eps,
                                size_t n_eps, double tol, sf_report** out) {
  if (!r) return invalid("reaction");
  if (!fl) return invalid("flux");
  if (!out) return invalid("out");
  return guarded([&] {
    std::vector<double> grid = grid_from(eps, n_eps);
    double t = tol > 0.0 ? tol : 1e-7;
    ConvergenceReport rep =
        side == SF_SIDE_MONOSTABLE
            ? sweep_critical_speed_monostable(r->impl, fl->impl, grid, t,
                                              empirical != 0)
            : sweep_critical_speed_bistable(r->impl, fl->impl, grid, t);
    *out = new sf_report{std::move(rep)};
  });
}

void sf_report_destroy(sf_report* rep) { delete rep; }

sf_status sf_report_size(const sf_report* rep, size_t* n) {
  if (!rep) return invalid("report");
  if (!n) return invalid("out");
  *n = rep->impl.rows.size();
  tl_error.clear();
  return SF_OK;
}

sf_status sf_report_row(const sf_report* rep, size_t i, double* eps,
                        double* value) {
  if (!rep) return invalid("report");
  if (i >= rep->impl.rows.size())
    return fail(SF_ERR_INVALID_ARG, "row index out of range");
  put(eps, rep->impl.rows[i].eps);
  put(value, rep->impl.rows[i].value);
  tl_error.clear();
  return SF_OK;
}

sf_status sf_report_csv(const sf_report* rep, char** out) {
  if (!rep) return invalid("report");
  if (!out) return invalid("out");
  return guarded([&] { *out = copy_string(report_csv(rep->impl)); });
}

sf_status sf_report_header_json(const sf_report* rep, const char* metric,
                                double target, char** out) {
  if (!rep) return invalid("report");
  if (!metric) return invalid("metric");
  if (!out) return invalid("out");
  return guarded([&] {
    *out = copy_string(report_header_json(rep->impl, metric, target));
  });
}

}  // extern "C"
