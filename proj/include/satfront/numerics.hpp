#pragma once

#include <functional>
#include <vector>

namespace satfront {

// Brent root finder on a sign-changing bracket [a, b].
// tol is an absolute tolerance on the abscissa.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-14, int max_iter = 200);

// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12);

// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes).
// Integrals of each cubic piece are exact, so the primitive is the exact
// integral of the interpolant.
class Pchip {
public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;     // clamped outside the knot range
  double derivative(double x) const;
  double primitive(double x) const;      // \int_{x_0}^{x} interpolant
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }

private:
  std::vector<double> x_, y_, d_, cum_;  // knots, values, slopes, cumulative integrals
  int find_cell(double x) const;
};

// Cubic Hermite evaluation on one cell.
double hermite(double x0, double y0, double d0, double x1, double y1, double d1,
               double x);
double hermite_derivative(double x0, double y0, double d0, double x1, double y1,
                          double d1, double x);

}  // namespace satfront
