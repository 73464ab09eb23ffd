#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "satfront/reduced_ode.hpp"

namespace satfront {

struct ProfileOptions {
  double z_window = 50.0;          // maximal |z| extent of any piece
  double end_tol = 1e-8;           // cut tails when |v - equilibrium| drops below this
  double dz = 0.01;                // uniform output grid spacing (global multiples of dz)
  double junction_gap_tol = 1e-6;  // gluing stops when successive zeros are this close
  IntegratorOptions integ{};

  ProfileOptions halved() const {
    ProfileOptions o = *this;
    o.dz *= 0.5;
    o.integ = o.integ.halved();
    return o;
  }
};

enum class ProfileKind {
  RegularFront,
  DiscontinuousSteady,
  BorderSteady,
  Nonmonotone,
  Inviscid,
};

struct ProfilePiece {
  std::vector<double> z, v, dvdz;        // nodes ascending in z; dvdz = analytic slope
  bool increasing = true;
  size_t uniform_begin = 0, uniform_end = 0;  // [begin,end) = run on the global z grid
};

struct WaveProfile {
  std::vector<ProfilePiece> pieces;      // ascending, abutting in z
  ProfileKind kind = ProfileKind::RegularFront;
  double eps = 0.0;
  double speed_c = 0.0;
  double normalization = std::numeric_limits<double>::quiet_NaN();  // v at z = 0
  bool has_jump = false;
  double v_minus = std::numeric_limits<double>::quiet_NaN();
  double v_plus = std::numeric_limits<double>::quiet_NaN();
  double z_window = 0.0;
  std::vector<std::pair<double, double>> junctions;  // (z, v) of interior zeros

  double z_min() const { return pieces.front().z.front(); }
  double z_max() const { return pieces.back().z.back(); }
  double eval(double z) const;        // clamped beyond the covered range
  double eval_slope(double z) const;
};

// Profile z -> v from a trajectory that vanishes at both ends of its v-range:
// integrates dz/dv = 1/R(y(v)/eps) from the midpoint (z = 0, v = normalization).
// Equilibrium ends produce logarithmic tails cut at end_tol or z_window;
// a transversal end (HitZero) is reached at finite z through a sqrt
// substitution. Across the seed gap next to the anchor, y follows the power
// fit matching the recorded seed value and derivative instead of the clamped
// sample. NaN normalization means the midpoint of the covered range.
WaveProfile reconstruct_front(const ReducedTrajectory& traj,
                              const SaturatingFlux& flux,
                              const ProfileOptions& opt = {},
                              double normalization =
                                  std::numeric_limits<double>::quiet_NaN());

// Near-critical heteroclinic stitched from two shots anchored at the two end
// equilibria: the left (forward) shot governs v below the normalization
// level, the right (backward) shot governs v above it, so each side keeps
// its own tangential tail; the O(bracket width) mismatch sits at the join.
WaveProfile reconstruct_front_pair(const ReducedTrajectory& left,
                                   const ReducedTrajectory& right,
                                   const SaturatingFlux& flux,
                                   const ProfileOptions& opt = {},
                                   double normalization =
                                       std::numeric_limits<double>::quiet_NaN());

// Steady 0-1 connection with a jump for eps * M0 <= eps_bar: branch levels
// y = F_minus (left) and y = F_plus (right), jump endpoints from
// F_minus(v_minus) = eps*M0 = F_plus(v_plus), jump placed at z = 0.
WaveProfile build_discontinuous_steady(const BistableReaction& reaction,
                                       const SaturatingFlux& flux, double eps,
                                       const ProfileOptions& opt = {});

enum class GlueStart { FromOne, FromZero };

// Nonmonotone wave glued from alternating shots; every direction reversal
// flips the sign of the speed in the reduced field. FromOne starts backward
// from 1 at speed c; FromZero starts forward from 0 at speed -c. The first
// interior zero sits at z = 0.
WaveProfile glue_nonmonotone(const BistableReaction& reaction,
                             const SaturatingFlux& flux, double eps, double c,
                             GlueStart start, int max_turns,
                             const ProfileOptions& opt = {});

// Limit profile of the first-order transport reduction: z(v) = c * int dv/f(v)
// between two adjacent equilibria (defaults alpha and 1), normalized through
// the interval midpoint at z = 0.
WaveProfile inviscid_front(const BistableReaction& reaction, double c,
                           double q1 = std::numeric_limits<double>::quiet_NaN(),
                           double q2 = std::numeric_limits<double>::quiet_NaN(),
                           const ProfileOptions& opt = {});

// Sup of |eps (P(v'))' - c v' + f(v)| over the uniform interior nodes,
// derivatives by 5-point finite differences on the sampled profile.
struct ResidualReport {
  double sup = 0.0;
  double at_z = 0.0;
  long n = 0;
};

ResidualReport profile_residual(const WaveProfile& profile,
                                const BistableReaction& reaction,
                                const SaturatingFlux& flux);

// int (v')^2 dz from the stored slopes (trapezoid on the sampled profile).
double kinetic_energy(const WaveProfile& profile);

// Same quantity through the exact change of variables int R(y(v)/eps) dv.
double kinetic_energy_quadrature(const ReducedTrajectory& traj,
                                 const SaturatingFlux& flux);

}  // namespace satfront
