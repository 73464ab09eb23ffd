#pragma once

#include <utility>

#include "satfront/reduced_ode.hpp"

namespace satfront {

enum class SpeedKind { BistableStar, MonostablePlus };

enum class Regime { RegularFront, BorderSteadyState, DiscontinuousSteadyState };

enum class Classification { TooLow, TooHigh, Critical };

struct SpeedResult {
  SpeedKind kind = SpeedKind::BistableStar;
  double value = 0.0;
  double bracket_low = 0.0, bracket_high = 0.0;
  Regime regime = Regime::RegularFront;
  int iterations = 0;
  double eps = 0.0;
  double tol = 0.0;
  double scaled_value() const { return value / eps; }   // b = c/eps view
};

// Forward shot 0 -> 1 at the field's speed:
//   HitZero before 1      -> TooLow   (speed too small for the 0-1 connection)
//   BlowUp                -> TooHigh
//   ReachedEndpoint       -> Critical if |y(1)| below tolerance, else TooHigh
Classification classify_bistable(const ReducedField& field,
                                 const IntegratorOptions& opt = {});

// Critical speed of the 0 -> 1 front by bisection on the classification.
// If already c = 0 is TooHigh the connection is a steady state: value 0 with
// regime discontinuous (or border when eps*M0 is within 1e-9 of eps_bar).
SpeedResult critical_speed_bistable(const BistableReaction& reaction,
                                    const SaturatingFlux& flux, double eps,
                                    double tol = 1e-7,
                                    const IntegratorOptions& opt = {});

// Closed-form critical speed of the alpha -> 1 connection from the seed
// quadratic's zero-discriminant condition: c = sqrt(8 eps f'(alpha)) / kappa.
// Exact under the linear bound |f| <= f'(alpha)|s-alpha|; when that bound
// fails the value is returned with the non-collapsed bracket from
// estimate_speed_bracket unless require_exact is set (then LinearBoundError).
SpeedResult critical_speed_monostable(const BistableReaction& reaction,
                                      const SaturatingFlux& flux, double eps,
                                      bool require_exact = false);

// True when the backward shot from 1 at fixed speed c lands tangentially at
// alpha, i.e. a monotone alpha -> 1 front exists at this speed. The landing
// closes quadratically, so instead of terminal-event location (unreliable
// near the threshold) this follows the blow-up variable w = y/(v-alpha)^2
// into the autonomous regime and tests it against the basin of the stable
// root of 2w - c kappa sqrt(w/eps) + f'(alpha) = 0.
bool monostable_front_exists(const BistableReaction& reaction,
                             const SaturatingFlux& flux, double eps, double c,
                             const IntegratorOptions& opt = {});

// Empirical critical speed: bisection of monostable_front_exists in c.
SpeedResult critical_speed_monostable_shooting(const BistableReaction& reaction,
                                               const SaturatingFlux& flux,
                                               double eps, double tol = 1e-7,
                                               const IntegratorOptions& opt = {});

// Bracket [sqrt(8 eps f'(alpha))/kappa, sqrt(8 eps M)/kappa] where M is the
// smallest constant with f(s) <= M (s-alpha)/sqrt(1 - min(M,1)(s-alpha)^2) on
// (alpha, 1]. Returns +inf as the upper end if no M below the scan cap works.
std::pair<double, double> estimate_speed_bracket(const BistableReaction& reaction,
                                                 const SaturatingFlux& flux,
                                                 double eps);

// The envelope constant M described above (exposed for testing).
double envelope_constant(const BistableReaction& reaction);

}  // namespace satfront
