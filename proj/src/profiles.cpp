#include "satfront/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "satfront/errors.hpp"
#include "satfront/numerics.hpp"
#include "satfront/ode.hpp"

namespace satfront {
namespace {

constexpr double kTinyT = 1e-12;  // sqrt substitutions start here, not at 0

OdeOptions march_options(const ProfileOptions& opt) {
  OdeOptions oo;
  oo.abs_tol = std::min(1e-12, 0.01 * opt.integ.abs_tol);
  oo.rel_tol = std::min(1e-12, 0.01 * opt.integ.rel_tol);
  oo.max_step = 0.05;
  return oo;
}

// One monotone march of the profile map z(v). Path length zeta = |z - z_anchor|
// grows along the march; a node is emitted at every global multiple of dz the
// march crosses, plus explicit anchor/end nodes.
struct March {
  std::function<double(double)> inv_speed;  // dzeta/dv magnitude
  std::function<double(double)> slope;      // signed global dv/dz
  double dz = 0.01;
  double z_anchor = 0.0;
  int dir_v = 1, dir_z = 1;
  double zeta_max = 50.0;
  OdeOptions oo{};

  std::vector<double> zs, vs, slopes;
  std::vector<char> grid;
  double zeta = 0.0;
  double v_cur = 0.0;
  long long next_k = 0;
  bool window = false;

  void start(double v_anchor, bool push_anchor_node) {
    v_cur = v_anchor;
    double tiny = 1e-9 * dz;
    if (dir_z > 0)
      next_k = static_cast<long long>(std::floor((z_anchor + tiny) / dz)) + 1;
    else
      next_k = static_cast<long long>(std::ceil((z_anchor - tiny) / dz)) - 1;
    if (push_anchor_node) {
      bool on_grid =
          std::abs(z_anchor / dz - std::round(z_anchor / dz)) < 1e-9;
      push(z_anchor, v_anchor, on_grid);
    }
  }

  void push(double z, double v, bool on_grid) {
    zs.push_back(z);
    vs.push_back(v);
    slopes.push_back(slope(v));
    grid.push_back(on_grid ? 1 : 0);
  }

  double target_zeta() const {
    double zt = static_cast<double>(next_k) * dz;
    return dir_z > 0 ? zt - z_anchor : z_anchor - zt;
  }

  double z_end() const { return z_anchor + (dir_z > 0 ? zeta : -zeta); }

  void push_end(double v) { push(z_end(), v, false); }

  // dzeta/dx = g(x) from x0 to x1 with v = v_map(x); false when the window
  // bound cut the march short.
  bool segment(double x0, double x1, const std::function<double(double)>& g,
               const std::function<double(double)>& v_map) {
    if (x0 == x1) return true;
    bool cut = false;
    auto obs = [&](const DenseStep& ds) {
      double za = ds.y0, zb = ds.y1;
      while (true) {
        double zt = target_zeta();
        if (!(zt <= zb) || zt >= zeta_max) break;
        if (zt > za - 1e-15) {
          double xt = locate_crossing(ds, zt, 1e-13);
          push(static_cast<double>(next_k) * dz, v_map(xt), true);
        }
        next_k += dir_z;
      }
      if (zb >= zeta_max) {
        double xw = locate_crossing(ds, zeta_max, 1e-13);
        push(z_anchor + (dir_z > 0 ? zeta_max : -zeta_max), v_map(xw), false);
        cut = true;
        return StepControl::Stop;
      }
      return StepControl::Continue;
    };
    OdeStatus st = dopri5([&](double x, double) { return g(x); }, x0, zeta, x1,
                          oo, no_cap, obs);
    if (cut) {
      zeta = zeta_max;
      window = true;
      return false;
    }
    zeta = st.y;
    return true;
  }

  bool plain_to(double v_stop) {
    if (std::abs(v_stop - v_cur) < 1e-13) {
      v_cur = v_stop;
      return true;
    }
    double d = static_cast<double>(dir_v);
    bool ok = segment(
        v_cur, v_stop, [&, d](double v) { return d * inv_speed(v); },
        [](double v) { return v; });
    if (ok) v_cur = v_stop;
    return ok;
  }

  // leave a junction at v_j: v = v_j + dir_v t^2, t up to sqrt(delta)
  bool cap_from(double v_j, double delta) {
    double t1 = std::sqrt(delta);
    double d = static_cast<double>(dir_v);
    bool ok = segment(
        kTinyT, t1,
        [this, d, v_j](double t) { return 2.0 * t * inv_speed(v_j + d * t * t); },
        [d, v_j](double t) { return v_j + d * t * t; });
    if (ok) v_cur = v_j + d * delta;
    return ok;
  }

  // reach a junction at v_j from distance delta: v = v_j - dir_v t^2
  bool cap_to(double v_j, double delta) {
    double t1 = std::sqrt(delta);
    double d = static_cast<double>(dir_v);
    bool ok = segment(
        t1, kTinyT,
        [this, d, v_j](double t) { return -2.0 * t * inv_speed(v_j - d * t * t); },
        [d, v_j](double t) { return v_j - d * t * t; });
    if (ok) {
      v_cur = v_j;
      push_end(v_j);
    }
    return ok;
  }
};

void mark_uniform(ProfilePiece& p, const std::vector<char>& g) {
  size_t n = g.size(), b = 0;
  while (b < n && !g[b]) ++b;
  size_t e = n;
  while (e > b && !g[e - 1]) --e;
  p.uniform_begin = b;
  p.uniform_end = e;
}

ProfilePiece finish(March&& m) {
  if (m.dir_z < 0) {
    std::reverse(m.zs.begin(), m.zs.end());
    std::reverse(m.vs.begin(), m.vs.end());
    std::reverse(m.slopes.begin(), m.slopes.end());
    std::reverse(m.grid.begin(), m.grid.end());
  }
  ProfilePiece p;
  p.z = std::move(m.zs);
  p.v = std::move(m.vs);
  p.dvdz = std::move(m.slopes);
  p.increasing = p.v.size() < 2 || p.v.back() >= p.v.front();
  mark_uniform(p, m.grid);
  return p;
}

// left march runs toward decreasing z, right toward increasing z; the shared
// anchor node sits between them.
ProfilePiece merge_marches(March&& left, double z_anchor, double v_anchor,
                           double anchor_slope, March&& right, double dz) {
  ProfilePiece p;
  std::vector<char> g;
  size_t nl = left.zs.size(), nr = right.zs.size();
  p.z.reserve(nl + nr + 1);
  p.v.reserve(nl + nr + 1);
  p.dvdz.reserve(nl + nr + 1);
  g.reserve(nl + nr + 1);
  for (size_t i = nl; i-- > 0;) {
    p.z.push_back(left.zs[i]);
    p.v.push_back(left.vs[i]);
    p.dvdz.push_back(left.slopes[i]);
    g.push_back(left.grid[i]);
  }
  bool anchor_on_grid = std::abs(z_anchor / dz - std::round(z_anchor / dz)) < 1e-9;
  p.z.push_back(z_anchor);
  p.v.push_back(v_anchor);
  p.dvdz.push_back(anchor_slope);
  g.push_back(anchor_on_grid ? 1 : 0);
  for (size_t i = 0; i < nr; ++i) {
    p.z.push_back(right.zs[i]);
    p.v.push_back(right.vs[i]);
    p.dvdz.push_back(right.slopes[i]);
    g.push_back(right.grid[i]);
  }
  p.increasing = p.v.size() < 2 || p.v.back() >= p.v.front();
  mark_uniform(p, g);
  return p;
}

std::function<double(double)> make_inv_speed(
    const std::function<double(double)>& y_of_v, const SaturatingFlux& flux,
    double eps) {
  double m0 = flux.M0();
  double floor_r = flux.R(1e-16 * m0);
  return [y_of_v, flux, eps, m0, floor_r](double v) {
    double x = std::max(0.0, y_of_v(v)) / eps;
    if (x > m0 * (1.0 - 1e-13)) x = m0 * (1.0 - 1e-13);
    double r = flux.R(x);
    if (r < floor_r) r = floor_r;
    return 1.0 / r;
  };
}

std::function<double(double)> make_slope(
    const std::function<double(double)>& y_of_v, const SaturatingFlux& flux,
    double eps, int sgn) {
  double m0 = flux.M0();
  return [y_of_v, flux, eps, m0, sgn](double v) {
    double x = std::max(0.0, y_of_v(v)) / eps;
    if (x > m0 * (1.0 - 1e-13)) x = m0 * (1.0 - 1e-13);
    return static_cast<double>(sgn) * flux.R(x);
  };
}

// Near-critical fronts ride close to the flux ceiling through an inner layer:
// an O(1) change of v packed into a few multiples of the reference spacing,
// then a slope collapse at the layer exit on the even shorter z-scale
// 1 / |ds/dv|. Subdivide the output grid by powers of two until one cell
// carries a bounded v-increment and resolves that exit scale, so the sampled
// profile is faithful and the finite-difference residual converges under
// tolerance halving.
struct SlopeScan {
  double s_max = 0.0;
  double ds_dv_max = 0.0;
};

SlopeScan scan_slope(const std::function<double(double)>& slope, double v0,
                     double v1) {
  double lo = std::min(v0, v1), hi = std::max(v0, v1);
  SlopeScan out;
  out.s_max = std::abs(slope(lo));
  if (!(hi > lo)) return out;
  const int n = 8192;
  double h = (hi - lo) / n, prev = out.s_max;
  for (int i = 1; i <= n; ++i) {
    double s = std::abs(slope(lo + i * h));
    out.s_max = std::max(out.s_max, s);
    out.ds_dv_max = std::max(out.ds_dv_max, std::abs(s - prev) / h);
    prev = s;
  }
  return out;
}

double subdivide_for_slope(double dz, const SlopeScan& a,
                           const SlopeScan& b = {}) {
  double s = std::max({a.s_max, b.s_max, 1e-300});
  double dsdv = std::max({a.ds_dv_max, b.ds_dv_max, 1e-300});
  double dz_target = std::min(1.0 / (64.0 * s), 0.125 / dsdv);
  double cells_needed = 0.01 / dz_target;
  int k = 0;
  while (cells_needed > 1.0 && k < 12) {
    cells_needed *= 0.5;
    ++k;
  }
  return dz / static_cast<double>(1 << k);
}

// capped cubic Hermite on one cell; slope capping keeps the interpolant
// monotone next to near-vertical nodes (jump endpoints)
double cell_eval(const ProfilePiece& p, size_t i, double z, bool deriv) {
  double z0 = p.z[i], z1 = p.z[i + 1];
  double h = z1 - z0;
  if (h <= 0.0) return deriv ? 0.0 : p.v[i];
  double dd = (p.v[i + 1] - p.v[i]) / h;
  double lo = std::min(0.0, 3.0 * dd), hi = std::max(0.0, 3.0 * dd);
  double d0 = std::min(hi, std::max(lo, p.dvdz[i]));
  double d1 = std::min(hi, std::max(lo, p.dvdz[i + 1]));
  double t = (z - z0) / h;
  if (!deriv) {
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * p.v[i] + h10 * h * d0 + h01 * p.v[i + 1] + h11 * h * d1;
  }
  double g0 = (6 * t * t - 6 * t) / h;
  return g0 * p.v[i] + (3 * t * t - 4 * t + 1) * d0 - g0 * p.v[i + 1] +
         (3 * t * t - 2 * t) * d1;
}

double piece_eval(const ProfilePiece& p, double z, bool deriv) {
  size_t n = p.z.size();
  if (n == 0) return deriv ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  if (n == 1 || z <= p.z.front()) return deriv ? 0.0 : p.v.front();
  if (z >= p.z.back()) return deriv ? 0.0 : p.v.back();
  size_t i = static_cast<size_t>(
      std::upper_bound(p.z.begin(), p.z.end(), z) - p.z.begin());
  if (i == 0) i = 1;
  if (i > n - 1) i = n - 1;
  return cell_eval(p, i - 1, z, deriv);
}

const ProfilePiece& pick_piece(const std::vector<ProfilePiece>& ps, double z) {
  size_t lo = 0, hi = ps.size();
  while (lo < hi) {  // first piece with back >= z
    size_t mid = (lo + hi) / 2;
    if (ps[mid].z.back() < z)
      lo = mid + 1;
    else
      hi = mid;
  }
  return ps[lo < ps.size() ? lo : ps.size() - 1];
}

}  // namespace

double WaveProfile::eval(double z) const {
  if (pieces.empty()) return normalization;
  if (has_jump && z == 0.0) return normalization;
  if (z <= z_min()) return pieces.front().v.front();
  if (z >= z_max()) return pieces.back().v.back();
  return piece_eval(pick_piece(pieces, z), z, false);
}

double WaveProfile::eval_slope(double z) const {
  if (pieces.empty()) return 0.0;
  if (z <= z_min() || z >= z_max()) return 0.0;
  return piece_eval(pick_piece(pieces, z), z, true);
}

namespace {

// y(v) read off the trajectory. The anchor sample closes the seed gap with an
// exact tangential Hermite cell; what remains are the terminal leftovers
// (integration residue y > 0 at a landed equilibrium), blended away linearly
// so the profile tails close at exactly y = 0.
std::function<double(double)> traj_y_model(const ReducedTrajectory& t) {
  double va = t.samples.front().v, vb = t.samples.back().v;
  double ya = t.samples.front().y, yb = t.samples.back().y;
  if (!(vb > va) || (ya == 0.0 && yb == 0.0))
    return [t](double v) { return t.eval(v); };
  double inv = 1.0 / (vb - va);
  return [t, va, ya, yb, inv](double v) {
    double w = std::clamp((v - va) * inv, 0.0, 1.0);
    return std::max(0.0, t.eval(v) - ya * (1.0 - w) - yb * w);
  };
}

// Pair version: the forward shot governs v below the normalization level, the
// backward shot above it; a smoothstep blend over [v_mid - w, v_mid + w]
// absorbs the O(bracket) mismatch between the two shots without a kink.
std::function<double(double)> pair_y_model(const ReducedTrajectory& left,
                                           const ReducedTrajectory& right,
                                           double v_mid, double w) {
  return [left, right, v_mid, w](double v) {
    if (v <= v_mid - w) return left.eval(v);
    if (v >= v_mid + w) return right.eval(v);
    double t = (v - (v_mid - w)) / (2.0 * w);
    double lam = t * t * (3.0 - 2.0 * t);
    return (1.0 - lam) * left.eval(v) + lam * right.eval(v);
  };
}

struct SideSpec {
  std::function<double(double)> y_of_v;
  double v_end = 0.0;        // outer target in v
  bool transversal = false;  // finite-z approach via the sqrt substitution
};

WaveProfile assemble_front(const SideSpec& left, const SideSpec& right,
                           double v_mid, const SaturatingFlux& flux, double eps,
                           double speed_c, const ProfileOptions& opt) {
  double dz_eff = subdivide_for_slope(
      opt.dz,
      scan_slope(make_slope(left.y_of_v, flux, eps, +1), v_mid, left.v_end),
      scan_slope(make_slope(right.y_of_v, flux, eps, +1), v_mid, right.v_end));
  auto run = [&](const SideSpec& s, int dir) {
    March m;
    m.inv_speed = make_inv_speed(s.y_of_v, flux, eps);
    m.slope = make_slope(s.y_of_v, flux, eps, +1);
    m.dz = dz_eff;
    m.z_anchor = 0.0;
    m.dir_v = dir;
    m.dir_z = dir;
    m.zeta_max = opt.z_window;
    m.oo = march_options(opt);
    m.start(v_mid, false);
    double span = std::abs(s.v_end - v_mid);
    if (s.transversal) {
      double delta = std::min(0.05, 0.4 * span);
      if (m.plain_to(s.v_end - dir * delta)) m.cap_to(s.v_end, delta);
    } else if (span > opt.end_tol) {
      double stop = s.v_end - dir * opt.end_tol;
      if (m.plain_to(stop)) m.push_end(stop);
    }
    return m;
  };

  March right_m = run(right, +1);
  March left_m = run(left, -1);
  double mid_slope = make_slope(right.y_of_v, flux, eps, +1)(v_mid);

  WaveProfile wp;
  wp.pieces.push_back(merge_marches(std::move(left_m), 0.0, v_mid, mid_slope,
                                    std::move(right_m), dz_eff));
  wp.kind = ProfileKind::RegularFront;
  wp.eps = eps;
  wp.speed_c = speed_c;
  wp.normalization = v_mid;
  wp.z_window = opt.z_window;
  return wp;
}

}  // namespace

WaveProfile reconstruct_front(const ReducedTrajectory& traj,
                              const SaturatingFlux& flux,
                              const ProfileOptions& opt, double normalization) {
  if (traj.samples.size() < 2)
    throw DomainError("trajectory too short to reconstruct a profile");
  if (!(traj.eps > 0.0)) throw DomainError("trajectory carries no positive eps");
  double eps = traj.eps;
  double ceiling = eps * flux.M0();
  double va = std::min(traj.v_min(), std::min(traj.anchor, traj.event.v));
  double vb = std::max(traj.v_max(), std::max(traj.anchor, traj.event.v));
  double ya = traj.samples.front().y, yb = traj.samples.back().y;
  if (ya > 1e-5 * ceiling || yb > 1e-5 * ceiling)
    throw DomainError(
        "trajectory does not vanish at its endpoints; nothing to reconstruct");

  double v_mid = std::isnan(normalization) ? 0.5 * (va + vb) : normalization;
  if (!(v_mid > va && v_mid < vb))
    throw DomainError("normalization level outside the trajectory range");

  bool right_transversal = traj.direction == Direction::Forward &&
                           traj.event.kind == TerminalEvent::Kind::HitZero;
  bool left_transversal = traj.direction == Direction::Backward &&
                          traj.event.kind == TerminalEvent::Kind::HitZero;

  auto y_of_v = traj_y_model(traj);
  SideSpec left{y_of_v, va, left_transversal};
  SideSpec right{y_of_v, vb, right_transversal};
  return assemble_front(left, right, v_mid, flux, eps, traj.speed_c, opt);
}

WaveProfile reconstruct_front_pair(const ReducedTrajectory& left,
                                   const ReducedTrajectory& right,
                                   const SaturatingFlux& flux,
                                   const ProfileOptions& opt,
                                   double normalization) {
  if (left.samples.size() < 2 || right.samples.size() < 2)
    throw DomainError("trajectory too short to reconstruct a profile");
  if (!(left.eps > 0.0) || left.eps != right.eps)
    throw DomainError("trajectory pair carries inconsistent eps");
  if (left.direction != Direction::Forward ||
      right.direction != Direction::Backward)
    throw DomainError(
        "front pair needs a forward left shot and a backward right shot");
  double eps = left.eps;
  double ceiling = eps * flux.M0();
  if (left.seed_y > 1e-5 * ceiling || right.seed_y > 1e-5 * ceiling)
    throw DomainError("pair shots must seed off vanishing anchors");

  double v_lo = left.anchor, v_hi = right.anchor;
  double v_mid = std::isnan(normalization) ? 0.5 * (v_lo + v_hi) : normalization;
  if (!(v_mid > v_lo && v_mid < v_hi))
    throw DomainError("normalization level outside the anchor range");

  // Each shot tracks the connection only until it peels away toward its own
  // terminal event, so the leg extents say nothing about where the data is
  // good.  Measure the mismatch between the two shots directly and pick the
  // blend half-width minimizing the slope penalty max|dy| / w.
  double w_cap = std::min({0.1, 0.98 * (left.v_max() - v_mid),
                           0.98 * (v_mid - right.v_min())});
  if (!(w_cap >= 1e-3))
    throw DomainError("pair shots do not overlap the normalization level");
  const int nscan = 512;
  std::vector<double> gap(2 * nscan + 1);
  for (int i = -nscan; i <= nscan; ++i) {
    double v = v_mid + w_cap * i / nscan;
    gap[static_cast<size_t>(i + nscan)] = std::abs(left.eval(v) - right.eval(v));
  }
  double bw = w_cap, best = std::numeric_limits<double>::infinity();
  double run = gap[nscan];
  for (int i = 1; i <= nscan; ++i) {
    run = std::max({run, gap[static_cast<size_t>(nscan - i)],
                    gap[static_cast<size_t>(nscan + i)]});
    double w = w_cap * i / nscan;
    if (w < 1e-3) continue;
    if (run / w < best) {
      best = run / w;
      bw = w;
    }
  }

  auto y_of_v = pair_y_model(left, right, v_mid, bw);
  SideSpec ls{y_of_v, v_lo, false};
  SideSpec rs{y_of_v, v_hi, false};
  return assemble_front(ls, rs, v_mid, flux, eps, left.speed_c, opt);
}

WaveProfile build_discontinuous_steady(const BistableReaction& reaction,
                                       const SaturatingFlux& flux, double eps,
                                       const ProfileOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  double level = eps * flux.M0();
  double eb = reaction.eps_bar();
  if (level > eb + 1e-9)
    throw RegimeError("eps * M0 = " + std::to_string(level) +
                      " exceeds the discontinuity bound " + std::to_string(eb) +
                      "; no jump steady state in this regime");
  bool border = std::abs(level - eb) <= 1e-9;
  double alpha = reaction.alpha();

  double v_minus =
      border ? alpha
             : brent_root(
                   [&](double v) { return reaction.F_minus(v) - level; }, 0.0,
                   alpha);
  double v_plus = brent_root(
      [&](double v) { return reaction.F_plus(v) - level; }, alpha, 1.0);

  auto y_left = [reaction](double v) { return reaction.F_minus(v); };
  auto y_right = [reaction](double v) { return reaction.F_plus(v); };

  March lm;
  lm.inv_speed = make_inv_speed(y_left, flux, eps);
  lm.slope = make_slope(y_left, flux, eps, +1);
  lm.dz = opt.dz;
  lm.z_anchor = 0.0;
  lm.dir_v = -1;
  lm.dir_z = -1;
  lm.zeta_max = opt.z_window;
  lm.oo = march_options(opt);
  lm.start(v_minus, true);
  if (v_minus > opt.end_tol && lm.plain_to(opt.end_tol)) lm.push_end(opt.end_tol);

  March rm;
  rm.inv_speed = make_inv_speed(y_right, flux, eps);
  rm.slope = make_slope(y_right, flux, eps, +1);
  rm.dz = opt.dz;
  rm.z_anchor = 0.0;
  rm.dir_v = +1;
  rm.dir_z = +1;
  rm.zeta_max = opt.z_window;
  rm.oo = march_options(opt);
  rm.start(v_plus, true);
  if (v_plus < 1.0 - opt.end_tol && rm.plain_to(1.0 - opt.end_tol))
    rm.push_end(1.0 - opt.end_tol);

  WaveProfile wp;
  wp.pieces.push_back(finish(std::move(lm)));
  wp.pieces.push_back(finish(std::move(rm)));
  wp.kind = border ? ProfileKind::BorderSteady : ProfileKind::DiscontinuousSteady;
  wp.eps = eps;
  wp.speed_c = 0.0;
  wp.has_jump = true;
  wp.v_minus = v_minus;
  wp.v_plus = v_plus;
  wp.normalization = (v_minus < 0.5 && 0.5 < v_plus)
                         ? 0.5
                         : 0.5 * (v_minus + v_plus);
  wp.z_window = opt.z_window;
  return wp;
}

WaveProfile glue_nonmonotone(const BistableReaction& reaction,
                             const SaturatingFlux& flux, double eps, double c,
                             GlueStart start, int max_turns,
                             const ProfileOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (max_turns < 1) throw DomainError("max_turns must be at least 1");

  struct Leg {
    ReducedTrajectory traj;
    int s = 1;             // sign of v' on the piece
    double v_from = 0.0;   // junction the piece grows out of
    double v_to = 0.0;
    bool to_junction = false;
  };
  std::vector<Leg> legs;
  std::vector<double> junction_v;
  double ceiling = eps * flux.M0();
  double y_finish_tol = 1e-6 * ceiling;

  {
    Leg lg;
    lg.s = +1;
    ReducedField fld{reaction, flux, eps, c};
    if (start == GlueStart::FromOne) {
      lg.traj = shoot(fld, 1.0, Direction::Backward, 0.0, opt.integ);
      lg.v_from = 1.0;
    } else {
      lg.traj = shoot(fld, 0.0, Direction::Forward, 1.0, opt.integ);
      lg.v_from = 0.0;
    }
    const TerminalEvent& ev = lg.traj.event;
    if (ev.kind != TerminalEvent::Kind::HitZero)
      throw RegimeError(
          ev.kind == TerminalEvent::Kind::BlowUp
              ? "first piece hit the ceiling before the derivative vanished"
              : "first piece reached the opposite equilibrium monotonically; "
                "no interior zero to glue at");
    lg.v_to = ev.v;
    lg.to_junction = true;
    junction_v.push_back(ev.v);
    legs.push_back(std::move(lg));
  }

  int s = +1;
  bool extend_up = start == GlueStart::FromOne;
  bool truncated = false;
  while (legs.back().to_junction) {
    if (static_cast<int>(junction_v.size()) >= max_turns) {
      truncated = true;
      break;
    }
    s = -s;
    double w = junction_v.back();
    ReducedField fld{reaction, flux, eps, static_cast<double>(s) * c};
    Leg lg;
    lg.s = s;
    lg.v_from = w;
    lg.traj = extend_up ? shoot(fld, w, Direction::Forward, 1.0, opt.integ)
                        : shoot(fld, w, Direction::Backward, 0.0, opt.integ);
    const TerminalEvent& ev = lg.traj.event;
    if (ev.kind == TerminalEvent::Kind::HitZero && ev.v > 1e-6 &&
        ev.v < 1.0 - 1e-6) {
      if (std::abs(ev.v - w) <= opt.junction_gap_tol) {
        truncated = true;  // reversals collapse; stop the spiral here
        break;
      }
      lg.v_to = ev.v;
      lg.to_junction = true;
      junction_v.push_back(ev.v);
      legs.push_back(std::move(lg));
      extend_up = !extend_up;
      continue;
    }
    bool at_equilibrium =
        (ev.kind == TerminalEvent::Kind::ReachedEndpoint &&
         ev.y <= y_finish_tol) ||
        (ev.kind == TerminalEvent::Kind::HitZero &&
         (ev.v <= 1e-6 || ev.v >= 1.0 - 1e-6));
    if (at_equilibrium) {
      lg.v_to = extend_up ? 1.0 : 0.0;
      if (ev.kind == TerminalEvent::Kind::HitZero)
        lg.v_to = ev.v <= 1e-6 ? 0.0 : 1.0;
      lg.to_junction = false;
      legs.push_back(std::move(lg));
      break;
    }
    throw RegimeError(
        std::string("gluing failed at piece ") + std::to_string(legs.size()) +
        (ev.kind == TerminalEvent::Kind::BlowUp
             ? ": hit the ceiling"
             : ": reached the opposite equilibrium with nonvanishing y"));
  }
  (void)truncated;

  int dir_z0 = start == GlueStart::FromOne ? +1 : -1;
  std::vector<ProfilePiece> built;
  std::vector<std::pair<double, double>> jlist;
  jlist.emplace_back(0.0, junction_v[0]);
  double z_junction = 0.0;
  bool window_hit = false;

  for (size_t k = 0; k < legs.size() && !window_hit; ++k) {
    const Leg& lg = legs[k];
    int dz_dir = k == 0 ? dir_z0 : -dir_z0;
    int dv_dir = lg.s * dz_dir;
    double v_anchor, v_far;
    bool far_junction;
    if (k == 0) {
      v_anchor = lg.v_to;  // first junction; the march runs back to the anchor
      v_far = start == GlueStart::FromOne ? 1.0 : 0.0;
      far_junction = false;
    } else {
      v_anchor = lg.v_from;
      v_far = lg.v_to;
      far_junction = lg.to_junction;
    }

    March m;
    auto y_of_v = traj_y_model(lg.traj);
    m.inv_speed = make_inv_speed(y_of_v, flux, eps);
    m.slope = make_slope(y_of_v, flux, eps, lg.s);
    m.dz = subdivide_for_slope(opt.dz, scan_slope(m.slope, v_anchor, v_far));
    m.z_anchor = z_junction;
    m.dir_v = dv_dir;
    m.dir_z = dz_dir;
    m.zeta_max = opt.z_window - std::abs(z_junction);
    m.oo = march_options(opt);
    if (m.zeta_max <= 0.0) break;
    m.start(v_anchor, true);

    double span = std::abs(v_far - v_anchor);
    double delta = std::min(0.05, 0.4 * span);
    bool alive = m.cap_from(v_anchor, delta);
    if (alive) {
      if (far_junction) {
        alive = m.plain_to(v_far - dv_dir * delta);
        if (alive) alive = m.cap_to(v_far, delta);
      } else {
        double stop = v_far - dv_dir * opt.end_tol;
        if ((dv_dir > 0 && stop > m.v_cur) || (dv_dir < 0 && stop < m.v_cur)) {
          if (m.plain_to(stop)) m.push_end(stop);
        }
      }
    }
    window_hit = m.window;
    double z_far = m.z_end();
    built.push_back(finish(std::move(m)));
    if (k >= 1 && far_junction && alive) {
      z_junction = z_far;
      jlist.emplace_back(z_junction, v_far);
    }
  }

  WaveProfile wp;
  wp.kind = ProfileKind::Nonmonotone;
  wp.eps = eps;
  wp.speed_c = c;
  wp.normalization = junction_v[0];
  wp.z_window = opt.z_window;
  if (dir_z0 > 0) {
    wp.pieces.assign(std::make_move_iterator(built.rbegin()),
                     std::make_move_iterator(built.rend()));
    wp.junctions.assign(jlist.rbegin(), jlist.rend());
  } else {
    wp.pieces = std::move(built);
    wp.junctions = std::move(jlist);
  }
  return wp;
}

WaveProfile inviscid_front(const BistableReaction& reaction, double c,
                           double q1, double q2, const ProfileOptions& opt) {
  if (std::isnan(q1)) q1 = reaction.alpha();
  if (std::isnan(q2)) q2 = 1.0;
  if (!(q1 >= 0.0 && q2 <= 1.0 && q1 < q2))
    throw DomainError("equilibria out of order");
  if (std::abs(reaction(q1)) > 1e-9 || std::abs(reaction(q2)) > 1e-9)
    throw DomainError("interval ends are not equilibria of f");
  if (c == 0.0) throw DomainError("zero speed: the transport profile needs c != 0");
  double mid = 0.5 * (q1 + q2);
  double f_mid = reaction(mid);
  if (f_mid == 0.0) throw DomainError("f vanishes inside the interval");
  int sgn_f = f_mid > 0 ? 1 : -1;
  for (int i = 1; i < 100; ++i) {
    double sv = q1 + (q2 - q1) * i / 100.0;
    if (reaction(sv) * sgn_f <= 0.0)
      throw DomainError("f changes sign inside the interval");
  }

  int slope_sign = c * sgn_f > 0 ? +1 : -1;  // v' = f / c
  auto inv_sp = [reaction, c](double v) {
    double w = std::abs(reaction(v) / c);
    return 1.0 / std::max(w, 1e-300);
  };
  auto slp = [reaction, c](double v) { return reaction(v) / c; };
  double dz_eff = subdivide_for_slope(opt.dz, scan_slope(slp, q1, q2));

  auto halfm = [&](int dv_dir) {
    March m;
    m.inv_speed = inv_sp;
    m.slope = slp;
    m.dz = dz_eff;
    m.z_anchor = 0.0;
    m.dir_v = dv_dir;
    m.dir_z = dv_dir * slope_sign;
    m.zeta_max = opt.z_window;
    m.oo = march_options(opt);
    m.start(mid, false);
    double v_e = dv_dir > 0 ? q2 : q1;
    if (std::abs(v_e - mid) > opt.end_tol) {
      double stop = v_e - dv_dir * opt.end_tol;
      if (m.plain_to(stop)) m.push_end(stop);
    }
    return m;
  };

  March up = halfm(+1);
  March down = halfm(-1);
  March& left = slope_sign > 0 ? down : up;
  March& right = slope_sign > 0 ? up : down;

  WaveProfile wp;
  wp.pieces.push_back(merge_marches(std::move(left), 0.0, mid, slp(mid),
                                    std::move(right), dz_eff));
  wp.kind = ProfileKind::Inviscid;
  wp.eps = 0.0;
  wp.speed_c = c;
  wp.normalization = mid;
  wp.z_window = opt.z_window;
  return wp;
}

ResidualReport profile_residual(const WaveProfile& wp,
                                const BistableReaction& reaction,
                                const SaturatingFlux& flux) {
  ResidualReport rep;
  for (const ProfilePiece& p : wp.pieces) {
    size_t b = p.uniform_begin, e = p.uniform_end;
    if (e < b + 9) continue;
    double h = p.z[b + 1] - p.z[b];
    size_t n = e - b;
    std::vector<double> w(n, 0.0), pw(n, 0.0);
    for (size_t i = b + 2; i + 2 < e; ++i)
      w[i - b] =
          (p.v[i - 2] - 8 * p.v[i - 1] + 8 * p.v[i + 1] - p.v[i + 2]) / (12 * h);
    for (size_t i = b + 2; i + 2 < e; ++i) pw[i - b] = flux.P(w[i - b]);
    for (size_t i = b + 4; i + 4 < e; ++i) {
      double dp = (pw[i - b - 2] - 8 * pw[i - b - 1] + 8 * pw[i - b + 1] -
                   pw[i - b + 2]) /
                  (12 * h);
      double r = wp.eps * dp - wp.speed_c * w[i - b] + reaction(p.v[i]);
      if (std::abs(r) > rep.sup) {
        rep.sup = std::abs(r);
        rep.at_z = p.z[i];
      }
      ++rep.n;
    }
  }
  return rep;
}

double kinetic_energy(const WaveProfile& wp) {
  double total = 0.0;
  for (const ProfilePiece& p : wp.pieces)
    for (size_t i = 0; i + 1 < p.z.size(); ++i)
      total += 0.5 * (p.dvdz[i] * p.dvdz[i] + p.dvdz[i + 1] * p.dvdz[i + 1]) *
               (p.z[i + 1] - p.z[i]);
  return total;
}

double kinetic_energy_quadrature(const ReducedTrajectory& traj,
                                 const SaturatingFlux& flux) {
  double eps = traj.eps;
  double m0 = flux.M0();
  auto g = [&](double v) {
    double x = std::max(0.0, traj.eval(v)) / eps;
    if (x > m0 * (1.0 - 1e-13)) x = m0 * (1.0 - 1e-13);
    return flux.R(x);
  };
  return integrate(g, traj.v_min(), traj.v_max(), 1e-11, 1e-10);
}

}  // namespace satfront
