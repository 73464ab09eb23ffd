#include "satfront/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "satfront/errors.hpp"

namespace satfront {

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw BracketError("brent_root: interval does not bracket a sign change");

  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = b - a; e = d; }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double eps_m = 2.220446049250313e-16;
    double tol1 = 2.0 * eps_m * std::abs(b) + 0.5 * tol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r, s = fb / fa;
      if (a == c) {             // secant
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {                  // inverse quadratic
        q = fa / fc; r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

namespace {

// K15 abscissae/weights on [-1,1] plus the embedded G7 weights.
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult { double value; double error; };

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
  double fc = f(mid);
  double res_k = kWgk[7] * fc;
  double res_g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double x = h * kXgk[i];
    double v = f(mid - x) + f(mid + x);
    res_k += kWgk[i] * v;
    if (i % 2 == 1) res_g += kWg[i / 2] * v;
  }
  double value = res_k * h;
  double err = std::abs((res_k - res_g) * h);
  return {value, err};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol, int depth) {
  GkResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= 50) {
    if (depth >= 50 && r.error > 1e3 * tol)
      throw QuadratureError("adaptive quadrature failed to converge");
    return r.value;
  }
  double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth + 1) +
         adaptive(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol) {
  if (a == b) return 0.0;
  GkResult coarse = gk15(f, a, b);
  double tol = std::max(abs_tol, rel_tol * std::abs(coarse.value));
  return adaptive(f, a, b, tol, 0);
}

double hermite(double x0, double y0, double d0, double x1, double y1, double d1,
               double x) {
  double h = x1 - x0;
  if (h == 0.0) return y0;
  double t = (x - x0) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double hermite_derivative(double x0, double y0, double d0, double x1, double y1,
                          double d1, double x) {
  double h = x1 - x0;
  if (h == 0.0) return d0;
  double t = (x - x0) / h;
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 +
          (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * d1) / h;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw DomainError("Pchip: need at least two knots and matching values");
  for (size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw DomainError("Pchip: knots must be strictly increasing");

  d_.assign(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
  } else {
    for (size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    // shape-preserving three-point endpoint slopes
    auto endpoint = [](double h0, double h1, double del0, double del1) {
      double d = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
      if (d * del0 <= 0.0) d = 0.0;
      else if (del0 * del1 < 0.0 && std::abs(d) > 3 * std::abs(del0)) d = 3 * del0;
      return d;
    };
    d_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  // cumulative exact integrals of the cubic pieces
  cum_.assign(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    double piece = h[i] * (y_[i] + y_[i + 1]) / 2.0 +
                   h[i] * h[i] * (d_[i] - d_[i + 1]) / 12.0;
    cum_[i + 1] = cum_[i] + piece;
  }
}

int Pchip::find_cell(double x) const {
  int lo = 0, hi = static_cast<int>(x_.size()) - 1;
  if (x <= x_.front()) return 0;
  if (x >= x_.back()) return hi - 1;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    (x_[mid] <= x ? lo : hi) = mid;
  }
  return lo;
}

double Pchip::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  int i = find_cell(x);
  return hermite(x_[i], y_[i], d_[i], x_[i + 1], y_[i + 1], d_[i + 1], x);
}

double Pchip::derivative(double x) const {
  if (x <= x_.front()) return d_.front();
  if (x >= x_.back()) return d_.back();
  int i = find_cell(x);
  return hermite_derivative(x_[i], y_[i], d_[i], x_[i + 1], y_[i + 1], d_[i + 1], x);
}

double Pchip::primitive(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return cum_.back();
  int i = find_cell(x);
  // integrate the Hermite cubic on [x_i, x] exactly
  double h = x_[i + 1] - x_[i];
  double t = (x - x_[i]) / h;
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  double iy0 = (t4 / 2 - t3 + t);          // int of 2t^3-3t^2+1
  double id0 = (t4 / 4 - 2 * t3 / 3 + t2 / 2);
  double iy1 = (-t4 / 2 + t3);
  double id1 = (t4 / 4 - t3 / 3);
  double piece = h * (iy0 * y_[i] + id0 * h * d_[i] + iy1 * y_[i + 1] + id1 * h * d_[i + 1]);
  return cum_[i] + piece;
}

}  // namespace satfront
