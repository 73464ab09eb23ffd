#include "satfront/shooting.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "satfront/errors.hpp"

namespace satfront {

namespace {

double terminal_y_tol(const ReducedField& field) {
  return 1e-8 * field.ceiling();
}

}  // namespace

Classification classify_bistable(const ReducedField& field,
                                 const IntegratorOptions& opt) {
  ReducedTrajectory t = shoot(field, 0.0, Direction::Forward, 1.0, opt);
  switch (t.event.kind) {
    case TerminalEvent::Kind::HitZero:
      return Classification::TooLow;
    case TerminalEvent::Kind::BlowUp:
      return Classification::TooHigh;
    case TerminalEvent::Kind::ReachedEndpoint:
      return (std::abs(t.event.y) <= terminal_y_tol(field)) ? Classification::Critical
                                                            : Classification::TooHigh;
  }
  return Classification::TooHigh;
}

SpeedResult critical_speed_bistable(const BistableReaction& reaction,
                                    const SaturatingFlux& flux, double eps,
                                    double tol, const IntegratorOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("critical_speed_bistable: eps must be positive");
  if (!(tol > 0.0)) throw DomainError("critical_speed_bistable: tol must be positive");
  if (!(reaction.total_integral() > 0.0))
    throw DomainError("critical_speed_bistable: reaction must have positive total integral");

  SpeedResult res;
  res.kind = SpeedKind::BistableStar;
  res.eps = eps;
  res.tol = tol;

  ReducedField field{reaction, flux, eps, 0.0};
  int iters = 0;
  auto classify = [&](double c) {
    field.speed_c = c;
    ++iters;
    return classify_bistable(field, opt);
  };

  Classification at_zero = classify(0.0);
  if (at_zero == Classification::TooHigh) {
    // blow-up at zero speed: the 0-1 connection is a steady state with a jump
    res.value = 0.0;
    res.bracket_low = res.bracket_high = 0.0;
    res.iterations = iters;
    res.regime = (std::abs(eps * flux.M0() - reaction.eps_bar()) <= 1e-9)
                     ? Regime::BorderSteadyState
                     : Regime::DiscontinuousSteadyState;
    return res;
  }
  if (at_zero == Classification::Critical) {
    res.value = 0.0;
    res.bracket_low = res.bracket_high = 0.0;
    res.iterations = iters;
    res.regime = Regime::BorderSteadyState;
    return res;
  }

  // expand to a TooHigh speed starting from the alpha -> 1 critical value
  double c_seed = std::sqrt(8.0 * eps * reaction.f_prime_alpha()) / flux.kappa();
  double hi = c_seed;
  const double cap = std::max(10.0, 100.0 * c_seed);
  while (true) {
    Classification cl = classify(hi);
    if (cl == Classification::TooHigh) break;
    if (cl == Classification::Critical) {
      res.value = hi;
      res.bracket_low = res.bracket_high = hi;
      res.iterations = iters;
      res.regime = Regime::RegularFront;
      return res;
    }
    hi *= 2.0;
    if (hi > cap)
      throw BracketError("critical_speed_bistable: no blow-up speed below the search cap");
  }

  double lo = 0.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    Classification cl = classify(mid);
    if (cl == Classification::Critical) {
      res.value = mid;
      res.bracket_low = res.bracket_high = mid;
      res.iterations = iters;
      res.regime = Regime::RegularFront;
      return res;
    }
    (cl == Classification::TooLow ? lo : hi) = mid;
  }
  res.value = 0.5 * (lo + hi);
  res.bracket_low = lo;
  res.bracket_high = hi;
  res.iterations = iters;
  res.regime = Regime::RegularFront;
  return res;
}

SpeedResult critical_speed_monostable(const BistableReaction& reaction,
                                      const SaturatingFlux& flux, double eps,
                                      bool require_exact) {
  if (!(eps > 0.0)) throw DomainError("critical_speed_monostable: eps must be positive");
  LinearBoundReport lb = validate_linear_bound(reaction);
  if (!lb.holds && require_exact)
    throw LinearBoundError(
        "critical_speed_monostable: |f(s)| <= f'(alpha)|s-alpha| fails at s = " +
        std::to_string(lb.worst_s) + " (ratio " + std::to_string(lb.worst_ratio) +
        "); only a bracket is available");

  SpeedResult res;
  res.kind = SpeedKind::MonostablePlus;
  res.eps = eps;
  res.value = std::sqrt(8.0 * eps * reaction.f_prime_alpha()) / flux.kappa();
  auto br = estimate_speed_bracket(reaction, flux, eps);
  res.bracket_low = br.first;
  res.bracket_high = lb.holds ? br.first : br.second;
  res.regime = Regime::RegularFront;
  return res;
}

bool monostable_front_exists(const BistableReaction& reaction,
                             const SaturatingFlux& flux, double eps, double c,
                             const IntegratorOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("monostable_front_exists: eps must be positive");
  if (!(c > 0.0)) return false;
  const double alpha = reaction.alpha();
  const double gamma = reaction.f_prime_alpha();
  const double kappa = flux.kappa();

  // Near alpha the landing trajectory closes quadratically, y ~ w (v-alpha)^2,
  // so terminal events cannot separate speeds closer than a few percent (the
  // first zero of y recedes exponentially as c approaches the threshold).
  // Instead: march to v = alpha + u_match, then relax w = y/(v-alpha)^2 in
  // tau = ln(v-alpha) until the u-dependent terms are negligible, and test w
  // against the separatrix root of 2w - c kappa sqrt(w/eps) + f'(alpha) = 0.
  // Landing = the trajectory enters the basin of the small root.
  const double u_match =
      std::min(0.1 * (1.0 - alpha), 0.3 * std::sqrt(eps * flux.M0() / gamma));
  const double w_cap = 4.0 * gamma;       // clearly escaped upward
  const double w_floor = 1e-4 * gamma;    // y collapsed: deep inside the basin
  const double tau_end = std::log(1e-8);

  ReducedField field{reaction, flux, eps, c};
  ReducedTrajectory t =
      shoot(field, 1.0, Direction::Backward, alpha + u_match, opt);
  if (t.event.kind != TerminalEvent::Kind::ReachedEndpoint)
    return false;  // turned around or blew up before the local regime
  double w = t.event.y / (u_match * u_match);
  auto G = [&](double tau, double w_) {
    double u = std::exp(tau);
    double x = u * u * w_ / eps;
    double transport = x < 1e-18 ? c * kappa * std::sqrt(w_ / eps)
                                 : c * flux.R(x) / u;
    double fu = u >= 1e-8 ? reaction(alpha + u) / u : gamma;
    return transport - fu - 2.0 * w_;
  };
  const double h = 1.0 / 256.0;
  double tau = std::log(u_match);
  while (tau > tau_end) {
    if (w >= w_cap) return false;
    if (w <= w_floor) return true;
    double k1 = G(tau, w);
    double k2 = G(tau - 0.5 * h, w - 0.5 * h * k1);
    double k3 = G(tau - 0.5 * h, w - 0.5 * h * k2);
    double k4 = G(tau - h, w - h * k3);
    w -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tau -= h;
  }
  double disc = c * c * kappa * kappa / eps - 8.0 * gamma;
  if (disc <= 0.0) return false;
  double root_hi = (c * kappa / std::sqrt(eps) + std::sqrt(disc)) / 4.0;
  return w <= root_hi * root_hi;
}

SpeedResult critical_speed_monostable_shooting(const BistableReaction& reaction,
                                               const SaturatingFlux& flux,
                                               double eps, double tol,
                                               const IntegratorOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("critical_speed_monostable_shooting: eps must be positive");
  int iters = 0;
  auto lands = [&](double c) {
    ++iters;
    return monostable_front_exists(reaction, flux, eps, c, opt);
  };

  double guess = std::sqrt(8.0 * eps * reaction.f_prime_alpha()) / flux.kappa();
  double lo = 0.0, hi = guess;
  const double cap = std::max(10.0, 100.0 * guess);
  while (!lands(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap)
      throw BracketError("critical_speed_monostable_shooting: no landing speed below the cap");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (lands(mid) ? hi : lo) = mid;
  }

  SpeedResult res;
  res.kind = SpeedKind::MonostablePlus;
  res.eps = eps;
  res.tol = tol;
  res.value = 0.5 * (lo + hi);
  res.bracket_low = lo;
  res.bracket_high = hi;
  res.iterations = iters;
  res.regime = Regime::RegularFront;
  return res;
}

double envelope_constant(const BistableReaction& reaction) {
  const double alpha = reaction.alpha();
  const int n = 4096;
  const double cap = 1e6;

  auto admissible = [&](double M) {
    double mm = std::min(M, 1.0);
    for (int i = 1; i <= n; ++i) {
      double s = alpha + (1.0 - alpha) * i / n;
      double d = s - alpha;
      double under = 1.0 - mm * d * d;
      if (under <= 0.0) return false;
      if (reaction(s) > M * d / std::sqrt(under) + 1e-15) return false;
    }
    return true;
  };

  if (!admissible(cap)) return std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::pair<double, double> estimate_speed_bracket(const BistableReaction& reaction,
                                                 const SaturatingFlux& flux,
                                                 double eps) {
  if (!(eps > 0.0)) throw DomainError("estimate_speed_bracket: eps must be positive");
  double low = std::sqrt(8.0 * eps * reaction.f_prime_alpha()) / flux.kappa();
  double M = envelope_constant(reaction);
  double high = std::isinf(M) ? M : std::sqrt(8.0 * eps * M) / flux.kappa();
  if (high < low) high = low;
  return {low, high};
}

}  // namespace satfront
