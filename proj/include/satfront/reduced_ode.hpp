#pragma once

#include <utility>
#include <vector>

#include "satfront/flux.hpp"
#include "satfront/ode.hpp"
#include "satfront/reaction.hpp"

namespace satfront {

// Options shared by the shooting integrator and its consumers.
struct IntegratorOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 0.05;
  double seed_h = 1e-4;            // offset of the starting abscissa from the anchor
  double blowup_margin = 1e-6;     // ceiling guard at (1 - margin) * eps * M0
  double cap_fraction = 0.25;      // step <= fraction * (gap to ceiling) / |field|
  double equilibrium_f_tol = 1e-9; // |f(anchor)| below this -> quadratic seed
  double event_y_tol = 1e-12;      // polish tolerance for zero crossings
  double max_sample_dv = 1.0 / 128.0;  // sample spacing cap for dense evaluation

  IntegratorOptions halved() const {
    IntegratorOptions o = *this;
    o.abs_tol *= 0.5;
    o.rel_tol *= 0.5;
    o.max_sample_dv *= 0.5;
    return o;
  }
};

// First-order reduced field y'(v) = c R(y/eps) - f(v) on 0 <= y < eps*M0.
// Increasing profile pieces use c = wave speed; decreasing pieces use the
// negated speed. The (b, g) = (c/eps, f/eps) scaling is exposed read-only.
struct ReducedField {
  BistableReaction reaction;
  SaturatingFlux flux;
  double eps = 0.0;
  double speed_c = 0.0;

  double ceiling() const { return eps * flux.M0(); }
  double scaled_speed() const { return speed_c / eps; }
  double value(double v, double y) const;            // throws DomainError outside the strip
  double value_extended(double v, double y) const;   // odd continuation below 0, clamped near ceiling
};

enum class Direction { Forward, Backward };

struct TerminalEvent {
  enum class Kind { HitZero, BlowUp, ReachedEndpoint };
  Kind kind = Kind::ReachedEndpoint;
  double v = 0.0;
  double y = 0.0;
};

struct TrajectorySample {
  double v = 0.0, y = 0.0, yp = 0.0;   // yp = field value at (v, y)
};

struct ReducedTrajectory {
  std::vector<TrajectorySample> samples;   // ascending in v
  Direction direction = Direction::Forward;
  TerminalEvent event;
  double anchor = 0.0;
  double seed_v = 0.0, seed_y = 0.0;       // integration start produced by the seed
  double eps = 0.0, speed_c = 0.0;
  double abs_tol = 0.0, rel_tol = 0.0;

  double v_min() const { return samples.front().v; }
  double v_max() const { return samples.back().v; }
  double eval(double v) const;             // cubic Hermite between samples, clamped
};

// Departure point from an equilibrium anchor: y = gamma (v - anchor)^2 with
// 2 gamma = s c kappa sqrt(gamma/eps) - f'(anchor), s = +1 forward / -1
// backward. With two admissible rates the slower one is chosen (the rate the
// connecting trajectory actually attains). Returns (v_start, y_start).
std::pair<double, double> seed_offset(const ReducedField& field, double anchor,
                                      Direction dir,
                                      const IntegratorOptions& opt = {});

// Integrate the reduced field from the anchor toward stop_at. Terminal events:
// HitZero (transversal return to y = 0), BlowUp (ceiling guard reached with
// positive field), ReachedEndpoint (stop_at reached).
ReducedTrajectory shoot(const ReducedField& field, double anchor, Direction dir,
                        double stop_at, const IntegratorOptions& opt = {});

// Close the landing end of a trajectory that terminated within integration
// noise of the equilibrium v_eq: residue samples with y below y_cut (default
// 1e3 * abs_tol) are dropped and the exact sample {v_eq, 0, 0} takes their
// place, so the terminal Hermite cell reproduces the tangential contact
// instead of a spurious flat stop at f != 0. Throws DomainError when the
// trajectory ends elsewhere.
ReducedTrajectory snap_landing(ReducedTrajectory t, double v_eq,
                               double y_cut = -1.0);

}  // namespace satfront
