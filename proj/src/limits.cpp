#include "satfront/limits.hpp"

#include <cmath>
#include <string>

#include "satfront/errors.hpp"
#include "satfront/numerics.hpp"

namespace satfront {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_eps_grid(const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) throw DomainError("empty eps grid");
  for (double e : eps_grid)
    if (!(e > 0.0)) throw DomainError("eps grid entries must be positive");
}

void check_sup_grid(double exclusion, double half_width, long n) {
  if (!(half_width > 0.0)) throw DomainError("grid half-width must be positive");
  if (n < 2) throw DomainError("need at least two grid points");
  if (exclusion < 0.0) throw DomainError("exclusion must be nonnegative");
  if (exclusion >= half_width)
    throw WindowError("exclusion interval swallows the whole grid");
}

}  // namespace

// critical 0-1 connection: jump steady state below the threshold, otherwise
// the near-critical front stitched from the two one-sided shots (neither can
// vanish at both equilibria at once at a bisected speed), through 1/2
WaveProfile critical_bistable_profile(const BistableReaction& reaction,
                                      const SaturatingFlux& flux, double eps,
                                      double speed_tol,
                                      const ProfileOptions& popt) {
  // bisect well below the requested tolerance: the y-mismatch the blend has
  // to absorb at the normalization level is proportional to the bracket width
  SpeedResult sr = critical_speed_bistable(
      reaction, flux, eps, std::min(speed_tol, 1e-12), popt.integ);
  if (sr.regime != Regime::RegularFront)
    return build_discontinuous_steady(reaction, flux, eps, popt);
  ReducedField fld{reaction, flux, eps, sr.value};
  ReducedTrajectory up = shoot(fld, 0.0, Direction::Forward, 1.0, popt.integ);
  ReducedTrajectory down = shoot(fld, 1.0, Direction::Backward, 0.0, popt.integ);
  return reconstruct_front_pair(up, down, flux, popt, 0.5);
}

// critical alpha-1 front from the landing side of the empirical bisection
WaveProfile critical_monostable_profile(const BistableReaction& reaction,
                                        const SaturatingFlux& flux, double eps,
                                        double speed_tol,
                                        const ProfileOptions& popt,
                                        double* c_out,
                                        ReducedTrajectory* traj_out) {
  SpeedResult sr = critical_speed_monostable_shooting(reaction, flux, eps,
                                                      speed_tol, popt.integ);
  double c = sr.bracket_high;
  ReducedField fld{reaction, flux, eps, c};
  ReducedTrajectory traj = snap_landing(
      shoot(fld, 1.0, Direction::Backward, reaction.alpha(), popt.integ),
      reaction.alpha());
  if (c_out) *c_out = c;
  if (traj_out) *traj_out = traj;
  return reconstruct_front(traj, flux, popt,
                           0.5 * (reaction.alpha() + 1.0));
}

WaveProfile fixed_speed_profile(const BistableReaction& reaction,
                                const SaturatingFlux& flux, double eps,
                                double c, const ProfileOptions& popt) {
  if (!(c > 0.0)) throw DomainError("fixed speed must be positive");
  if (!monostable_front_exists(reaction, flux, eps, c, popt.integ))
    throw RegimeError("speed " + std::to_string(c) +
                      " does not sustain an alpha -> 1 front at eps = " +
                      std::to_string(eps) + " (below the critical speed)");
  double alpha = reaction.alpha();
  ReducedField fld{reaction, flux, eps, c};
  ReducedTrajectory traj = snap_landing(
      shoot(fld, 1.0, Direction::Backward, alpha, popt.integ), alpha);
  return reconstruct_front(traj, flux, popt, 0.5 * (alpha + 1.0));
}

namespace {

double sup_against(const WaveProfile& prof,
                   const std::function<double(double)>& limit, double exclusion,
                   double half_width, long n) {
  double sup = 0.0;
  for (long i = 0; i < n; ++i) {
    double z = -half_width + 2.0 * half_width * i / (n - 1);
    if (std::abs(z) < exclusion) continue;
    sup = std::max(sup, std::abs(prof.eval(z) - limit(z)));
  }
  return sup;
}

}  // namespace

double BumpFunction::mass() const {
  if (!(width > 0.0)) throw WindowError("bump width must be positive");
  BumpFunction copy = *this;
  return integrate([copy](double z) { return copy(z); }, -width, width, 1e-12,
                   1e-10);
}

double distributional_pairing(const std::function<double(double)>& u,
                              const BumpFunction& psi, double split_at) {
  if (!(psi.width > 0.0)) throw WindowError("bump width must be positive");
  double w = psi.width;
  auto g = [&](double z) { return u(z) * psi(z); };
  if (std::isfinite(split_at) && split_at > -w && split_at < w)
    return integrate(g, -w, split_at, 1e-12, 1e-10) +
           integrate(g, split_at, w, 1e-12, 1e-10);
  return integrate(g, -w, w, 1e-12, 1e-10);
}

double distributional_pairing(const WaveProfile& profile,
                              const BumpFunction& psi) {
  if (!(psi.width > 0.0)) throw WindowError("bump width must be positive");
  if (profile.pieces.empty()) throw DomainError("empty profile");
  double w = psi.width;
  bool left_ok = profile.z_min() <= -w ||
                 std::abs(profile.pieces.front().dvdz.front()) < 1e-6;
  bool right_ok = profile.z_max() >= w ||
                  std::abs(profile.pieces.back().dvdz.back()) < 1e-6;
  if (!left_ok || !right_ok)
    throw WindowError(
        "test function support exceeds the resolved profile window");
  auto u = [&](double z) { return profile.eval(z); };
  return distributional_pairing(u, psi, profile.has_jump ? 0.0 : kNaN);
}

double derivative_pairing(const WaveProfile& profile, const BumpFunction& psi) {
  if (!(psi.width > 0.0)) throw WindowError("bump width must be positive");
  if (profile.pieces.empty()) throw DomainError("empty profile");
  double w = psi.width;
  // -int v psi' only needs v on the support; flat tails contribute the exact
  // constant continuation because eval clamps outside the computed window.
  bool left_ok = profile.z_min() <= -w ||
                 std::abs(profile.pieces.front().dvdz.front()) < 1e-6;
  bool right_ok = profile.z_max() >= w ||
                  std::abs(profile.pieces.back().dvdz.back()) < 1e-6;
  if (!left_ok || !right_ok)
    throw WindowError(
        "test function support exceeds the resolved profile window");
  auto g = [&](double z) { return profile.eval(z) * psi.derivative(z); };
  double split = profile.has_jump ? 0.0 : kNaN;
  double acc;
  if (std::isfinite(split) && split > -w && split < w)
    acc = integrate(g, -w, split, 1e-12, 1e-10) +
          integrate(g, split, w, 1e-12, 1e-10);
  else
    acc = integrate(g, -w, w, 1e-12, 1e-10);
  return -acc;
}

ConvergenceReport steady_limit_convergence(const BistableReaction& reaction,
                                           const SaturatingFlux& flux,
                                           const std::vector<double>& eps_grid,
                                           double exclusion, double half_width,
                                           long grid_points, double speed_tol,
                                           const ProfileOptions& popt) {
  check_eps_grid(eps_grid);
  check_sup_grid(exclusion, half_width, grid_points);
  ConvergenceReport rep;
  rep.exclusion = exclusion;
  rep.half_width = half_width;
  rep.grid_points = grid_points;
  auto step = [](double z) { return z < 0.0 ? 0.0 : (z > 0.0 ? 1.0 : 0.5); };
  for (double eps : eps_grid) {
    WaveProfile prof =
        critical_bistable_profile(reaction, flux, eps, speed_tol, popt);
    rep.rows.push_back(
        {eps, sup_against(prof, step, exclusion, half_width, grid_points)});
  }
  return rep;
}

ConvergenceReport monostable_limit_convergence(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const std::vector<double>& eps_grid, double exclusion, double half_width,
    long grid_points, double speed_tol, const ProfileOptions& popt) {
  check_eps_grid(eps_grid);
  check_sup_grid(exclusion, half_width, grid_points);
  ConvergenceReport rep;
  rep.exclusion = exclusion;
  rep.half_width = half_width;
  rep.grid_points = grid_points;
  double alpha = reaction.alpha();
  auto step = [alpha](double z) {
    return z < 0.0 ? alpha : (z > 0.0 ? 1.0 : 0.5 * (alpha + 1.0));
  };
  for (double eps : eps_grid) {
    WaveProfile prof = critical_monostable_profile(reaction, flux, eps,
                                                   speed_tol, popt, nullptr,
                                                   nullptr);
    rep.rows.push_back(
        {eps, sup_against(prof, step, exclusion, half_width, grid_points)});
  }
  return rep;
}

ConvergenceReport fixed_speed_convergence(const BistableReaction& reaction,
                                          const SaturatingFlux& flux, double c,
                                          const std::vector<double>& eps_grid,
                                          double half_width, long grid_points,
                                          const ProfileOptions& popt) {
  check_eps_grid(eps_grid);
  check_sup_grid(0.0, half_width, grid_points);
  if (!(c > 0.0)) throw DomainError("fixed speed must be positive");
  WaveProfile v0 = inviscid_front(reaction, c, kNaN, kNaN, popt);
  ConvergenceReport rep;
  rep.half_width = half_width;
  rep.grid_points = grid_points;
  for (double eps : eps_grid) {
    WaveProfile prof = fixed_speed_profile(reaction, flux, eps, c, popt);
    auto lim = [&](double z) { return v0.eval(z); };
    rep.rows.push_back(
        {eps, sup_against(prof, lim, 0.0, half_width, grid_points)});
  }
  return rep;
}

ConvergenceReport pairing_convergence_bistable(const BistableReaction& reaction,
                                               const SaturatingFlux& flux,
                                               const BumpFunction& psi,
                                               const std::vector<double>& eps_grid,
                                               double speed_tol,
                                               const ProfileOptions& popt) {
  check_eps_grid(eps_grid);
  if (!(psi.width > 0.0)) throw WindowError("bump width must be positive");
  double limit_pair = psi(0.0);  // jump 0 -> 1 concentrates a unit Dirac mass
  ConvergenceReport rep;
  for (double eps : eps_grid) {
    WaveProfile prof =
        critical_bistable_profile(reaction, flux, eps, speed_tol, popt);
    double p = derivative_pairing(prof, psi);
    rep.rows.push_back({eps, std::abs(p - limit_pair)});
  }
  return rep;
}

ConvergenceReport pairing_convergence_monostable(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const BumpFunction& psi, const std::vector<double>& eps_grid,
    double speed_tol, const ProfileOptions& popt) {
  check_eps_grid(eps_grid);
  if (!(psi.width > 0.0)) throw WindowError("bump width must be positive");
  double alpha = reaction.alpha();
  double limit_pair = (1.0 - alpha) * psi(0.0);  // jump alpha -> 1
  ConvergenceReport rep;
  for (double eps : eps_grid) {
    WaveProfile prof = critical_monostable_profile(reaction, flux, eps,
                                                   speed_tol, popt, nullptr,
                                                   nullptr);
    double p = derivative_pairing(prof, psi);
    rep.rows.push_back({eps, std::abs(p - limit_pair)});
  }
  return rep;
}

ConvergenceReport energy_identity_report(const BistableReaction& reaction,
                                         const SaturatingFlux& flux,
                                         const std::vector<double>& eps_grid,
                                         double speed_tol,
                                         const IntegratorOptions& opt) {
  check_eps_grid(eps_grid);
  double alpha = reaction.alpha();
  double delta_F = reaction.F(1.0) - reaction.F(alpha);
  ConvergenceReport rep;
  for (double eps : eps_grid) {
    SpeedResult sr =
        critical_speed_monostable_shooting(reaction, flux, eps, speed_tol, opt);
    double c = sr.bracket_high;
    ReducedField fld{reaction, flux, eps, c};
    ReducedTrajectory traj =
        snap_landing(shoot(fld, 1.0, Direction::Backward, alpha, opt), alpha);
    double kin = kinetic_energy_quadrature(traj, flux);
    rep.rows.push_back({eps, c * kin - delta_F});
  }
  return rep;
}

double energy_identity_defect(const BistableReaction& reaction,
                              const SaturatingFlux& flux, double eps, double c,
                              const IntegratorOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("energy_identity_defect: eps must be positive");
  if (!monostable_front_exists(reaction, flux, eps, c, opt))
    throw RegimeError("speed " + std::to_string(c) +
                      " does not sustain a front at eps = " + std::to_string(eps));
  double alpha = reaction.alpha();
  ReducedField fld{reaction, flux, eps, c};
  ReducedTrajectory traj =
      snap_landing(shoot(fld, 1.0, Direction::Backward, alpha, opt), alpha);
  double kin = kinetic_energy_quadrature(traj, flux);
  return c * kin - (reaction.F(1.0) - reaction.F(alpha));
}

ConvergenceReport sweep_critical_speed_bistable(const BistableReaction& reaction,
                                                const SaturatingFlux& flux,
                                                const std::vector<double>& eps_grid,
                                                double tol,
                                                const IntegratorOptions& opt) {
  check_eps_grid(eps_grid);
  ConvergenceReport rep;
  for (double eps : eps_grid)
    rep.rows.push_back(
        {eps, critical_speed_bistable(reaction, flux, eps, tol, opt).value});
  return rep;
}

ConvergenceReport sweep_critical_speed_monostable(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const std::vector<double>& eps_grid, double tol, bool empirical,
    const IntegratorOptions& opt) {
  check_eps_grid(eps_grid);
  ConvergenceReport rep;
  for (double eps : eps_grid) {
    double value =
        empirical
            ? critical_speed_monostable_shooting(reaction, flux, eps, tol, opt)
                  .value
            : critical_speed_monostable(reaction, flux, eps, false).value;
    rep.rows.push_back({eps, value});
  }
  return rep;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0))
    throw DomainError("log grid needs positive endpoints");
  if (n < 2) throw DomainError("log grid needs at least two points");
  std::vector<double> g(static_cast<size_t>(n));
  double r = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo * std::exp(r * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace satfront
