#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "satfront/profiles.hpp"
#include "satfront/shooting.hpp"

namespace satfront {

// Smooth compactly supported test function exp(1/((z/w)^2 - 1)) on (-w, w).
struct BumpFunction {
  double width = 1.0;

  double operator()(double z) const {
    double u = z / width;
    double d = u * u - 1.0;
    if (d >= 0.0) return 0.0;
    return std::exp(1.0 / d);
  }
  double derivative(double z) const {
    double u = z / width;
    double d = u * u - 1.0;
    if (d >= 0.0) return 0.0;
    return -2.0 * u / (width * d * d) * std::exp(1.0 / d);
  }
  double mass() const;  // integral over the support
};

// <u, psi> by adaptive quadrature; pass split_at to break the integral at an
// interior discontinuity of u.
double distributional_pairing(
    const std::function<double(double)>& u, const BumpFunction& psi,
    double split_at = std::numeric_limits<double>::quiet_NaN());

// Profile pairing; splits at the jump automatically. WindowError if the
// support is not covered and the profile does not end in resolved flat tails.
double distributional_pairing(const WaveProfile& profile,
                              const BumpFunction& psi);

// Pairing of the profile derivative: <v', psi> = -int v psi'. Finite for
// jump profiles, where v' carries a Dirac mass at the jump.
double derivative_pairing(const WaveProfile& profile, const BumpFunction& psi);

// Critical 0-1 connection as a z-profile: the discontinuous/border steady
// state below the existence threshold, the near-critical front above it.
WaveProfile critical_bistable_profile(const BistableReaction& reaction,
                                      const SaturatingFlux& flux, double eps,
                                      double speed_tol = 1e-9,
                                      const ProfileOptions& popt = {});

// Critical alpha -> 1 front at the empirical threshold speed; optionally
// reports the speed used and the underlying reduced trajectory.
WaveProfile critical_monostable_profile(const BistableReaction& reaction,
                                        const SaturatingFlux& flux, double eps,
                                        double speed_tol = 1e-9,
                                        const ProfileOptions& popt = {},
                                        double* c_out = nullptr,
                                        ReducedTrajectory* traj_out = nullptr);

// alpha -> 1 front at a prescribed supercritical speed; RegimeError when c
// is below the threshold for this eps.
WaveProfile fixed_speed_profile(const BistableReaction& reaction,
                                const SaturatingFlux& flux, double eps,
                                double c, const ProfileOptions& popt = {});

struct ConvergenceRow {
  double eps = 0.0;
  double value = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double exclusion = 0.0;    // half-width of the interval around 0 left out
  double half_width = 0.0;   // sup taken on [-H, H] minus the exclusion
  long grid_points = 0;
};

// sup |v_eps - step| outside (-exclusion, exclusion) for the critical 0-1
// connection: discontinuous steady states below the threshold, near-critical
// fronts above it; the limit is the unit step through 1/2 at z = 0.
ConvergenceReport steady_limit_convergence(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const std::vector<double>& eps_grid, double exclusion, double half_width,
    long grid_points, double speed_tol = 1e-9, const ProfileOptions& popt = {});

// Same experiment on the alpha -> 1 side at the empirical critical speed;
// the limit is the step from alpha to 1 through (alpha+1)/2.
ConvergenceReport monostable_limit_convergence(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const std::vector<double>& eps_grid, double exclusion, double half_width,
    long grid_points, double speed_tol = 1e-9, const ProfileOptions& popt = {});

// sup |v_eps - v_0| over the whole grid for fronts at a fixed supercritical
// speed; v_0 is the transport profile z(v) = c int dv/f. RegimeError when the
// backward shot fails to land at alpha (speed below critical for that eps).
ConvergenceReport fixed_speed_convergence(
    const BistableReaction& reaction, const SaturatingFlux& flux, double c,
    const std::vector<double>& eps_grid, double half_width, long grid_points,
    const ProfileOptions& popt = {});

// |<v_eps', psi> - jump * psi(0)| along the eps grid: the derivative pairing
// -int v psi' approaches the Dirac mass the interface carries in the limit.
// Jump height: 1 for the 0-1 fronts, 1 - alpha for the alpha-1 fronts.
ConvergenceReport pairing_convergence_bistable(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const BumpFunction& psi, const std::vector<double>& eps_grid,
    double speed_tol = 1e-9, const ProfileOptions& popt = {});

ConvergenceReport pairing_convergence_monostable(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const BumpFunction& psi, const std::vector<double>& eps_grid,
    double speed_tol = 1e-9, const ProfileOptions& popt = {});

// c int (v')^2 dz - (F(1) - F(alpha)) for the critical alpha -> 1 front,
// with the kinetic integral taken through the exact change of variables.
ConvergenceReport energy_identity_report(const BistableReaction& reaction,
                                         const SaturatingFlux& flux,
                                         const std::vector<double>& eps_grid,
                                         double speed_tol = 1e-7,
                                         const IntegratorOptions& opt = {});

// Same defect for a single alpha -> 1 front at a fixed supercritical speed.
// RegimeError if the backward shot does not land at alpha.
double energy_identity_defect(const BistableReaction& reaction,
                              const SaturatingFlux& flux, double eps, double c,
                              const IntegratorOptions& opt = {});

// Speed tables c(eps).
ConvergenceReport sweep_critical_speed_bistable(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const std::vector<double>& eps_grid, double tol = 1e-7,
    const IntegratorOptions& opt = {});

ConvergenceReport sweep_critical_speed_monostable(
    const BistableReaction& reaction, const SaturatingFlux& flux,
    const std::vector<double>& eps_grid, double tol = 1e-7, bool empirical = false,
    const IntegratorOptions& opt = {});

// Geometric grid from lo to hi (either order), n >= 2 points.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace satfront
