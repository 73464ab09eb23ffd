#include "satfront/flux.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "satfront/errors.hpp"
#include "satfront/numerics.hpp"

namespace satfront {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

struct SaturatingFlux::Impl {
  bool mean_curvature = false;
  bool power = false;
  double m = kNaN, delta = kNaN;
  double M0 = 1.0;
  double kappa = std::sqrt(2.0);

  // cached log grid for the power flux: Q values at t_grid
  std::vector<double> t_grid, Q_grid;
  double t_lo = 0.0, t_hi = 0.0;   // series region below t_lo, tail above t_hi

  double P(double s) const {
    double a = std::abs(s);
    double v;
    if (mean_curvature) v = a / std::sqrt(1.0 + a * a);
    else v = std::pow(a, m) / std::sqrt(1.0 + delta * std::pow(a, 2.0 * m));
    return s < 0 ? -v : v;
  }

  double P_prime(double s) const {
    double a = std::abs(s);
    if (mean_curvature) {
      double r = 1.0 + a * a;
      return 1.0 / (r * std::sqrt(r));
    }
    // m a^{m-1} / (1 + delta a^{2m})^{3/2}
    double r = 1.0 + delta * std::pow(a, 2.0 * m);
    return m * std::pow(a, m - 1.0) / (r * std::sqrt(r));
  }

  double sPp(double s) const { return s * P_prime(s); }

  // series for Q near 0: int m s^m (1 - 1.5 delta s^{2m} + ...) ds
  double Q_series(double t) const {
    double t1 = std::pow(t, m + 1.0);
    double lead = m * t1 / (m + 1.0);
    double corr = 1.5 * delta * m * std::pow(t, 3.0 * m + 1.0) / (3.0 * m + 1.0);
    return lead - corr;
  }

  // tail of int_t^inf s P'(s) ds for large t
  double tail(double t) const {
    double d32 = delta * std::sqrt(delta);
    double lead = m * std::pow(t, 1.0 - 2.0 * m) / (d32 * (2.0 * m - 1.0));
    double corr = 1.5 * m * std::pow(t, 1.0 - 4.0 * m) / (d32 * delta * (4.0 * m - 1.0));
    return lead - corr;
  }

  double Q(double t) const {
    if (t <= 0.0) return 0.0;
    if (mean_curvature) {
      double x = t * t;
      double r = std::sqrt(1.0 + x);
      return x / (r * (r + 1.0));      // cancellation-free 1 - 1/sqrt(1+t^2)
    }
    if (t < t_lo) return Q_series(t);
    if (t > t_hi) return M0 - tail(t);
    // locate the grid segment and integrate from its left node
    size_t lo = 0, hi = t_grid.size() - 1;
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      (t_grid[mid] <= t ? lo : hi) = mid;
    }
    return Q_grid[lo] + integrate([this](double s) { return sPp(s); },
                                  t_grid[lo], t, 1e-15, 1e-13);
  }

  double R(double y) const {
    if (y < 0.0 || y >= M0)
      throw DomainError("flux R: argument outside [0, M0)");
    if (y == 0.0) return 0.0;
    if (mean_curvature) return std::sqrt(y * (2.0 - y)) / (1.0 - y);
    if (y <= Q_series(t_lo)) {
      // invert the leading series then polish
      double t = std::pow((m + 1.0) * y / m, 1.0 / (m + 1.0));
      for (int i = 0; i < 4; ++i) {
        double g = Q_series(t) - y;
        double dg = sPp(t);          // dQ/dt = t P'(t)
        if (dg <= 0.0) break;
        t -= g / dg;
        if (t <= 0.0) { t = std::pow((m + 1.0) * y / m, 1.0 / (m + 1.0)); break; }
      }
      return t;
    }
    if (y > Q_grid.back()) {
      // invert the analytic tail: M0 - y = m t^{1-2m} / (delta^{3/2} (2m-1))
      double d32 = delta * std::sqrt(delta);
      double t = std::pow((M0 - y) * d32 * (2.0 * m - 1.0) / m, 1.0 / (1.0 - 2.0 * m));
      return t;
    }
    size_t lo = 0, hi = t_grid.size() - 1;
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      (Q_grid[mid] <= y ? lo : hi) = mid;
    }
    double t = brent_root([this, y](double x) { return Q(x) - y; },
                          t_grid[lo], t_grid[hi], 1e-12 * t_grid[lo]);
    return t;
  }
};

double SaturatingFlux::P(double s) const { return impl_->P(s); }
double SaturatingFlux::P_prime(double s) const { return impl_->P_prime(s); }
double SaturatingFlux::Q(double t) const {
  if (t < 0.0) throw DomainError("flux Q: negative argument");
  return impl_->Q(t);
}
double SaturatingFlux::R(double y) const { return impl_->R(y); }
double SaturatingFlux::M0() const { return impl_->M0; }
double SaturatingFlux::kappa() const { return impl_->kappa; }
bool SaturatingFlux::closed_form() const { return impl_->mean_curvature; }
bool SaturatingFlux::is_power() const { return impl_->power; }
double SaturatingFlux::power_m() const { return impl_->m; }
double SaturatingFlux::power_delta() const { return impl_->delta; }

SaturatingFlux mean_curvature_flux() {
  auto impl = std::make_shared<SaturatingFlux::Impl>();
  impl->mean_curvature = true;
  impl->M0 = 1.0;
  impl->kappa = std::sqrt(2.0);
  return SaturatingFlux(std::move(impl));
}

SaturatingFlux power_saturating_flux(double m, double delta) {
  if (!(m >= 1.0))
    throw DomainError("power flux: m < 1 is weakly saturating (unbounded Q); need m >= 1");
  if (!(delta > 0.0))
    throw DomainError("power flux: delta must be positive");

  auto impl = std::make_shared<SaturatingFlux::Impl>();
  impl->power = true;
  impl->m = m;
  impl->delta = delta;
  impl->t_lo = 1e-4;
  impl->t_hi = 1e6;

  // cached cumulative quadrature on a log grid
  const int per_decade = 16;
  const int decades = 10;  // 1e-4 .. 1e6
  int n = per_decade * decades + 1;
  impl->t_grid.resize(n);
  impl->Q_grid.resize(n);
  double q = impl->Q_series(impl->t_lo);
  impl->t_grid[0] = impl->t_lo;
  impl->Q_grid[0] = q;
  for (int i = 1; i < n; ++i) {
    impl->t_grid[i] = impl->t_lo * std::pow(10.0, static_cast<double>(i) / per_decade);
    q += integrate([&](double s) { return impl->sPp(s); }, impl->t_grid[i - 1],
                   impl->t_grid[i], 1e-15, 1e-13);
    impl->Q_grid[i] = q;
  }

  // M0 from the grid top plus the analytic tail; verify the tail correction
  // is genuinely small (strong saturation)
  double tl = impl->tail(impl->t_hi);
  impl->M0 = impl->Q_grid.back() + tl;
  if (!(std::isfinite(impl->M0)) || tl > 1e-4 * impl->M0)
    throw QuadratureError("power flux: tail estimate did not converge; flux is not strongly saturating");

  // small-y rate; exact sqrt(2) when m = 1 (independent of delta)
  if (m == 1.0) {
    impl->kappa = std::sqrt(2.0);
  } else {
    double y0 = 1e-10 * impl->M0;
    impl->kappa = impl->R(y0) / std::sqrt(y0);
  }
  return SaturatingFlux(std::move(impl));
}

}  // namespace satfront
