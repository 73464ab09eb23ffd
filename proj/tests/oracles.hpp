#pragma once

// Deliberately naive reference implementations used to cross-check the
// library's numerics: adaptive Simpson instead of Gauss-Kronrod, plain
// bisection instead of Brent. Slow and simple on purpose.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

inline double simpson_cell(const std::function<double(double)>& f, double a,
                           double fa, double b, double fb, double m,
                           double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double fa, double b, double fb,
                                   double m, double fm, double whole,
                                   double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson_cell(f, a, fa, m, fm, lm, flm);
  double right = simpson_cell(f, m, fm, b, fb, rm, frm);
  double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("simpson recursion exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

inline double quad(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-12) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson_cell(f, a, fa, b, fb, m, fm);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 60);
}

inline double bisect(const std::function<double(double)>& f, double a,
                     double b, double tol = 1e-13) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw std::runtime_error("bisect: no sign change on the bracket");
  while (b - a > tol) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracles
