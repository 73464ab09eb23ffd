#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "satfront/errors.hpp"

namespace satfront {

// Scalar adaptive Dormand-Prince 5(4) with a 4th-order continuous extension.
// The observer sees every accepted step as a dense-output record and may stop
// the integration; a step-cap hook lets callers shrink steps near a singular
// boundary (distance-to-ceiling capping for the reduced equation).

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 0.05;
  double min_step = 1e-14;       // relative to the span; underflow -> StepError
  double initial_step = 0.0;     // 0 = choose automatically
};

struct DenseStep {
  double x0 = 0, x1 = 0;         // x1 - x0 carries the march direction sign
  double y0 = 0, y1 = 0;
  double f0 = 0, f1 = 0;         // derivatives at the step ends
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;

  double eval(double x) const {
    double h = x1 - x0;
    double th = (x - x0) / h;
    double th1 = 1.0 - th;
    return c1 + th * (c2 + th1 * (c3 + th * (c4 + th1 * c5)));
  }
};

enum class StepControl { Continue, Stop };

struct OdeStatus {
  bool reached_end = false;      // integrated all the way to x_end
  double x = 0, y = 0;           // final point
  long steps = 0, rejected = 0, evals = 0;
};

// F:       double(double x, double y)
// CapFn:   double(double x, double y, double f, double h_proposed) -> h_allowed (>0 magnitude)
// Observer:StepControl(const DenseStep&)
template <class F, class CapFn, class Observer>
OdeStatus dopri5(F&& f, double x0, double y0, double x_end, const OdeOptions& opt,
                 CapFn&& cap, Observer&& observe) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static const double d1 = -12715105075.0 / 11282082432.0,
                      d3 = 87487479700.0 / 32700410799.0,
                      d4 = -10690763975.0 / 1880347072.0,
                      d5 = 701980252875.0 / 199316789632.0,
                      d6 = -1453857185.0 / 822651844.0,
                      d7 = 69997945.0 / 29380423.0;

  OdeStatus st;
  const double span = std::abs(x_end - x0);
  if (span == 0.0) { st.reached_end = true; st.x = x0; st.y = y0; return st; }
  const double dir = (x_end > x0) ? 1.0 : -1.0;
  const double hmin = opt.min_step * std::max(1.0, span);

  double x = x0, y = y0;
  double k1 = f(x, y);
  ++st.evals;
  double h = opt.initial_step > 0 ? opt.initial_step
                                  : std::min(opt.max_step, std::max(1e-6, 1e-3 * span));

  while (true) {
    double remaining = std::abs(x_end - x);
    if (remaining <= 0) { st.reached_end = true; break; }
    h = std::min(h, opt.max_step);
    h = std::min(h, cap(x, y, k1, h));
    bool last = false;
    if (h >= remaining) { h = remaining; last = true; }
    if (h < hmin)
      throw StepError("integrator step underflow at x = " + std::to_string(x));

    double hs = dir * h;
    double k2 = f(x + c2 * hs, y + hs * a21 * k1);
    double k3 = f(x + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    double k4 = f(x + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    double k5 = f(x + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    double k6 = f(x + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    double y1 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    double k7 = f(x + hs, y1);
    st.evals += 6;

    double err_raw = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y), std::abs(y1));
    double err = std::abs(err_raw) / sc;

    if (!std::isfinite(err) || err > 1.0) {
      ++st.rejected;
      double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      continue;
    }

    DenseStep ds;
    ds.x0 = x; ds.x1 = x + hs;
    ds.y0 = y; ds.y1 = y1;
    ds.f0 = k1; ds.f1 = k7;
    double ydiff = y1 - y;
    double bspl = hs * k1 - ydiff;
    ds.c1 = y;
    ds.c2 = ydiff;
    ds.c3 = bspl;
    ds.c4 = ydiff - hs * k7 - bspl;
    ds.c5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    ++st.steps;
    x += hs; y = y1; k1 = k7;

    StepControl ctl = observe(ds);
    if (ctl == StepControl::Stop) { st.reached_end = false; st.x = x; st.y = y; return st; }
    if (last) { st.reached_end = true; break; }

    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::min(5.0, std::max(0.2, fac));
  }
  st.x = x; st.y = y;
  return st;
}

inline double no_cap(double, double, double, double h) { return h; }

// Locate a level crossing inside a dense step by bisection on the continuous
// extension, then polish with secant iterations; tolerance is on the ordinate.
inline double locate_crossing(const DenseStep& ds, double level, double y_tol = 1e-12) {
  double a = ds.x0, b = ds.x1;
  double fa = ds.y0 - level, fb = ds.y1 - level;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  for (int i = 0; i < 80; ++i) {
    double m = 0.5 * (a + b);
    double fm = ds.eval(m) - level;
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; fb = fm; }
    if (std::abs(fm) < y_tol && std::abs(b - a) < 1e-14 * (std::abs(ds.x1 - ds.x0) + 1.0))
      break;
  }
  // secant polish
  double x0 = a, x1 = b, f0 = fa, f1 = fb;
  for (int i = 0; i < 20 && std::abs(f1) > y_tol; ++i) {
    if (f1 == f0) break;
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    double lo = std::min(ds.x0, ds.x1), hi = std::max(ds.x0, ds.x1);
    if (x2 < lo) x2 = lo;
    if (x2 > hi) x2 = hi;
    x0 = x1; f0 = f1;
    x1 = x2; f1 = ds.eval(x2) - level;
  }
  return x1;
}

}  // namespace satfront
