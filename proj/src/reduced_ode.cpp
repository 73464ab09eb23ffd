#include "satfront/reduced_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "satfront/errors.hpp"
#include "satfront/numerics.hpp"

namespace satfront {

double ReducedField::value(double v, double y) const {
  if (y < 0.0 || y >= ceiling())
    throw DomainError("reduced field: y outside [0, eps*M0)");
  return speed_c * flux.R(y / eps) - reaction(v);
}

double ReducedField::value_extended(double v, double y) const {
  double x = y / eps;
  const double m0 = flux.M0();
  double r;
  if (x >= 0.0) {
    if (x > m0 * (1.0 - 1e-13)) x = m0 * (1.0 - 1e-13);
    r = flux.R(x);
  } else {
    double ax = std::min(-x, m0 * (1.0 - 1e-13));
    r = -flux.R(ax);
  }
  return speed_c * r - reaction(v);
}

double ReducedTrajectory::eval(double v) const {
  const auto& s = samples;
  if (v <= s.front().v) return s.front().y;
  if (v >= s.back().v) return s.back().y;
  size_t lo = 0, hi = s.size() - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    (s[mid].v <= v ? lo : hi) = mid;
  }
  return hermite(s[lo].v, s[lo].y, s[lo].yp, s[hi].v, s[hi].y, s[hi].yp, v);
}

namespace {

struct SeedInfo {
  double v_start, y_start;
  bool equilibrium;
  double gamma = 0.0;   // quadratic rate (equilibrium case)
  double lambda = 0.0;  // linear rate (restart case)
};

SeedInfo compute_seed(const ReducedField& field, double anchor, Direction dir,
                      const IntegratorOptions& opt) {
  const double s = (dir == Direction::Forward) ? 1.0 : -1.0;
  const double h = opt.seed_h;  // domain width is 1
  const double fa = field.reaction(anchor);
  SeedInfo out{};
  out.v_start = anchor + s * h;

  if (std::abs(fa) <= opt.equilibrium_f_tol) {
    // quadratic departure: 2 u^2 - s c (kappa/sqrt(eps)) u + f'(anchor) = 0, u = sqrt(gamma)
    const double fpa = field.reaction.f_prime(anchor);
    const double q = field.speed_c * field.flux.kappa() / std::sqrt(field.eps);
    const double A = 2.0, B = -s * q, C = fpa;
    double disc = B * B - 4.0 * A * C;
    double u = -1.0;
    if (C < 0.0) {
      u = (-B + std::sqrt(disc)) / (2.0 * A);     // unique positive root
    } else if (C > 0.0) {
      if (disc < 0.0)
        throw SeedError("seed_offset: no real departure rate (speed below the "
                        "critical value for this anchor)");
      if (-B <= 0.0)
        throw SeedError("seed_offset: no positive departure rate from this "
                        "anchor in this direction");
      u = (-B - std::sqrt(disc)) / (2.0 * A);     // slower of the two rates
    } else {
      if (-B <= 0.0)
        throw SeedError("seed_offset: degenerate anchor with no growth direction");
      u = -B / (2.0 * A);
    }
    if (!(u >= 0.0))
      throw SeedError("seed_offset: departure rate is not nonnegative");
    out.equilibrium = true;
    out.gamma = u * u;
    out.y_start = out.gamma * h * h;
    if (out.y_start <= 0.0)
      throw SeedError("seed_offset: zero departure rate; trajectory does not leave the axis");
  } else {
    // interior restart: y' = -f at y = 0; the trajectory enters y > 0 only if
    // the field pushes it there
    const double lambda = (dir == Direction::Forward) ? -fa : fa;
    if (lambda <= 0.0)
      throw SeedError("shoot: field at the restart anchor does not enter y > 0");
    const double fpa = field.reaction.f_prime(anchor);
    const double ck = field.speed_c * field.flux.kappa();
    const double sigma = s;
    // y(x) = lambda x + sigma (2/3) c kappa sqrt(lambda/eps) x^{3/2} - f'(anchor) x^2 / 2
    out.y_start = lambda * h +
                  sigma * (2.0 / 3.0) * ck * std::sqrt(lambda / field.eps) * h * std::sqrt(h) -
                  0.5 * fpa * h * h;
    out.equilibrium = false;
    out.lambda = lambda;
    if (out.y_start <= 0.0) out.y_start = lambda * h;
  }
  if (out.y_start >= field.ceiling())
    throw SeedError("seed_offset: seed value already at the singular ceiling");
  return out;
}

}  // namespace

std::pair<double, double> seed_offset(const ReducedField& field, double anchor,
                                      Direction dir, const IntegratorOptions& opt) {
  SeedInfo s = compute_seed(field, anchor, dir, opt);
  return {s.v_start, s.y_start};
}

ReducedTrajectory shoot(const ReducedField& field, double anchor, Direction dir,
                        double stop_at, const IntegratorOptions& opt) {
  if (!(field.eps > 0.0)) throw DomainError("shoot: eps must be positive");
  if (anchor < 0.0 || anchor > 1.0 || stop_at < 0.0 || stop_at > 1.0)
    throw DomainError("shoot: anchor and stop_at must lie in [0,1]");
  if (dir == Direction::Forward && !(stop_at > anchor))
    throw DomainError("shoot: forward direction needs stop_at > anchor");
  if (dir == Direction::Backward && !(stop_at < anchor))
    throw DomainError("shoot: backward direction needs stop_at < anchor");

  const double ceiling = field.ceiling();
  const double guard = (1.0 - opt.blowup_margin) * ceiling;
  SeedInfo seed = compute_seed(field, anchor, dir, opt);

  ReducedTrajectory traj;
  traj.direction = dir;
  traj.anchor = anchor;
  traj.seed_v = seed.v_start;
  traj.seed_y = seed.y_start;
  traj.eps = field.eps;
  traj.speed_c = field.speed_c;
  traj.abs_tol = opt.abs_tol;
  traj.rel_tol = opt.rel_tol;

  std::vector<TrajectorySample> samples;  // in integration order
  auto rhs = [&field](double v, double y) { return field.value_extended(v, y); };
  samples.push_back({anchor, 0.0, rhs(anchor, 0.0)});
  samples.push_back({seed.v_start, seed.y_start, rhs(seed.v_start, seed.y_start)});

  TerminalEvent ev;
  bool have_event = false;

  OdeOptions oopt;
  oopt.abs_tol = opt.abs_tol;
  oopt.rel_tol = opt.rel_tol;
  oopt.max_step = opt.max_step;

  auto cap = [&](double /*v*/, double y, double f, double h) {
    double gap = ceiling - y;
    if (gap <= 0.0) return 1e-300;
    double af = std::abs(f);
    if (af > 0.0) h = std::min(h, opt.cap_fraction * gap / af);
    return h;
  };

  auto emit = [&](const DenseStep& ds, double upto) {
    // subdivide the accepted step so sample spacing stays below the cap
    double from = samples.back().v;
    double width = std::abs(upto - from);
    int n = std::max(1, static_cast<int>(std::ceil(width / opt.max_sample_dv)));
    for (int i = 1; i <= n; ++i) {
      double v = from + (upto - from) * i / n;
      double y = (i == n && std::abs(upto - ds.x1) < 1e-300) ? ds.y1 : ds.eval(v);
      if (y < 0.0) y = 0.0;
      samples.push_back({v, y, rhs(v, y)});
    }
  };

  auto observer = [&](const DenseStep& ds) {
    // ceiling guard crossing?
    bool up = (ds.y1 >= guard);
    // zero crossing (from positive into y <= 0)?
    bool down = (ds.y1 <= 0.0);
    if (!up && !down) {
      // interior dip: the quartic can cross inside even if endpoints are inside
      // the strip; cheap scan of the dense polynomial
      for (int i = 1; i < 8 && !down && !up; ++i) {
        double v = ds.x0 + (ds.x1 - ds.x0) * i / 8.0;
        double y = ds.eval(v);
        if (y <= 0.0) down = true;
        if (y >= guard) up = true;
      }
    }
    if (up) {
      double v_star = locate_crossing(ds, guard, opt.event_y_tol * std::max(1.0, ceiling));
      emit(ds, v_star);
      samples.back().v = v_star;
      samples.back().y = guard;
      samples.back().yp = rhs(v_star, guard);
      ev.kind = TerminalEvent::Kind::BlowUp;
      ev.v = v_star;
      ev.y = guard;
      have_event = true;
      return StepControl::Stop;
    }
    if (down) {
      double v_star = locate_crossing(ds, 0.0, opt.event_y_tol);
      emit(ds, v_star);
      samples.back().v = v_star;
      samples.back().y = 0.0;   // transversal return to the axis
      samples.back().yp = rhs(v_star, 0.0);
      ev.kind = TerminalEvent::Kind::HitZero;
      ev.v = v_star;
      ev.y = 0.0;
      have_event = true;
      return StepControl::Stop;
    }
    emit(ds, ds.x1);
    return StepControl::Continue;
  };

  OdeStatus st = dopri5(rhs, seed.v_start, seed.y_start, stop_at, oopt, cap, observer);
  if (!have_event) {
    if (!st.reached_end)
      throw StepError("shoot: integration stopped without a terminal event");
    double y_end = std::max(0.0, st.y);
    ev.kind = TerminalEvent::Kind::ReachedEndpoint;
    ev.v = stop_at;
    ev.y = y_end;
    if (samples.back().v != stop_at)
      samples.push_back({stop_at, y_end, rhs(stop_at, y_end)});
    else {
      samples.back().y = y_end;
      samples.back().yp = rhs(stop_at, y_end);
    }
  }
  traj.event = ev;

  if (dir == Direction::Backward) std::reverse(samples.begin(), samples.end());
  traj.samples = std::move(samples);
  return traj;
}

ReducedTrajectory snap_landing(ReducedTrajectory t, double v_eq, double y_cut) {
  auto& s = t.samples;
  if (s.size() < 2) throw DomainError("snap_landing: trajectory too short");
  if (y_cut < 0.0) y_cut = 1e3 * std::max(t.abs_tol, 1e-16);
  bool low_end = std::abs(s.front().v - v_eq) <= std::abs(s.back().v - v_eq);
  double v_land = low_end ? s.front().v : s.back().v;
  if (std::abs(v_land - v_eq) > 0.02)
    throw DomainError(
        "snap_landing: trajectory does not terminate near the equilibrium");
  if (low_end) {
    size_t i = 0;
    while (i < s.size() && (s[i].v <= v_eq + 1e-12 || s[i].y < y_cut)) ++i;
    if (s.size() - i < 2 || s[i].v - v_eq > 0.05)
      throw DomainError(
          "snap_landing: no clean samples beyond the landing noise");
    s.erase(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i));
    s.insert(s.begin(), {v_eq, 0.0, 0.0});
  } else {
    size_t n = s.size();
    while (n > 0 && (s[n - 1].v >= v_eq - 1e-12 || s[n - 1].y < y_cut)) --n;
    if (n < 2 || v_eq - s[n - 1].v > 0.05)
      throw DomainError(
          "snap_landing: no clean samples beyond the landing noise");
    s.resize(n);
    s.push_back({v_eq, 0.0, 0.0});
  }
  t.event.kind = TerminalEvent::Kind::ReachedEndpoint;
  t.event.v = v_eq;
  t.event.y = 0.0;
  return t;
}

}  // namespace satfront
