#pragma once

#include <memory>

namespace satfront {

// Saturating diffusion flux P: odd, increasing, bounded. Derived objects:
//   Q(t) = int_0^t s P'(s) ds   (increasing, Q(inf) = M0 < inf),
//   R = Q^{-1} on [0, M0)       (R(y) -> inf as y -> M0^-),
//   kappa with R(y) ~ kappa sqrt(y) as y -> 0 when P'(0) > 0.
// Immutable value type; copies share cached tables.
class SaturatingFlux {
public:
  SaturatingFlux() = default;

  double P(double s) const;
  double P_prime(double s) const;
  double Q(double t) const;       // t >= 0
  double R(double y) const;       // y in [0, M0)
  double M0() const;
  double kappa() const;
  bool closed_form() const;
  bool is_power() const;
  double power_m() const;         // NaN unless power flux
  double power_delta() const;

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit SaturatingFlux(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend SaturatingFlux mean_curvature_flux();
  friend SaturatingFlux power_saturating_flux(double m, double delta);
};

// P(s) = s / sqrt(1 + s^2): Q(t) = 1 - 1/sqrt(1+t^2), M0 = 1,
// R(y) = sqrt(y(2-y))/(1-y), kappa = sqrt(2).
SaturatingFlux mean_curvature_flux();

// P(s) = s^m / sqrt(1 + delta s^{2m}) (odd extension), m >= 1, delta > 0.
// Q by quadrature on a cached log grid with an analytic tail, R by bracketed
// root solves (relative tolerance 1e-12). For m > 1 the small-y rate of R is
// steeper than sqrt(y); the recorded kappa is then a small-y estimate only.
SaturatingFlux power_saturating_flux(double m, double delta);

}  // namespace satfront
