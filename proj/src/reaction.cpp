#include "satfront/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "satfront/errors.hpp"
#include "satfront/numerics.hpp"

namespace satfront {

struct BistableReaction::Impl {
  std::function<double(double)> f;        // on [0,1]
  std::function<double(double)> fp;       // derivative on [0,1]
  std::function<double(double)> F;        // primitive, F(0) = 0, on [0,1]
  double alpha = 0;
  double f_prime_alpha = 0;
  double lipschitz_l = 0;
  double eps_bar = 0;
  double v_zero = std::numeric_limits<double>::quiet_NaN();
  double total = 0;
  bool closed_form = false;
  bool reflected = false;
  double cubic_a = std::numeric_limits<double>::quiet_NaN();
  // cancellation-free branch primitives where available; fall back to +-F
  std::function<double(double)> Fm_exact, Fp_exact;
};

double BistableReaction::operator()(double s) const {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return impl_->f(s);
}

double BistableReaction::f_prime(double s) const {
  double t = std::clamp(s, 0.0, 1.0);
  return impl_->fp(t);
}

double BistableReaction::F(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return impl_->total;
  return impl_->F(s);
}

double BistableReaction::F_minus(double s) const {
  if (s <= 0.0) return 0.0;
  if (impl_->Fm_exact) return impl_->Fm_exact(std::min(s, 1.0));
  return -F(s);
}

double BistableReaction::F_plus(double s) const {
  if (s >= 1.0) return 0.0;
  if (s <= 0.0) return impl_->total;
  if (impl_->Fp_exact) return impl_->Fp_exact(s);
  return impl_->total - F(s);
}

double BistableReaction::alpha() const { return impl_->alpha; }
double BistableReaction::f_prime_alpha() const { return impl_->f_prime_alpha; }
double BistableReaction::lipschitz_l() const { return impl_->lipschitz_l; }
double BistableReaction::eps_bar() const { return impl_->eps_bar; }
double BistableReaction::v_zero() const { return impl_->v_zero; }
double BistableReaction::total_integral() const { return impl_->total; }
bool BistableReaction::closed_form() const { return impl_->closed_form; }
double BistableReaction::cubic_a() const { return impl_->cubic_a; }
bool BistableReaction::is_reflected() const { return impl_->reflected; }

BistableReaction detail_make_reflected(const BistableReaction& r) {
  auto base = r;  // capture by value: shares the source impl
  auto impl = std::make_shared<BistableReaction::Impl>();
  impl->f = [base](double s) { return -base(1.0 - s); };
  impl->fp = [base](double s) { return base.f_prime(1.0 - s); };
  double total = base.total_integral();
  impl->F = [base, total](double s) { return base.F(1.0 - s) - total; };
  impl->alpha = 1.0 - base.alpha();
  impl->f_prime_alpha = base.f_prime_alpha();
  impl->lipschitz_l = base.lipschitz_l();
  impl->eps_bar = base.F_plus(base.alpha());      // integral of the reflected negative part
  impl->total = -total;
  impl->closed_form = base.closed_form();
  impl->reflected = true;
  impl->Fm_exact = [base](double s) { return base.F_plus(1.0 - s); };
  impl->Fp_exact = [base](double s) { return base.F_minus(1.0 - s); };
  return BistableReaction(std::move(impl));
}

BistableReaction BistableReaction::reflected() const {
  return detail_make_reflected(*this);
}

BistableReaction build_cubic(double a) {
  if (!(a > 0.0 && a < 0.5))
    throw DomainError("build_cubic: need 0 < a < 1/2 so the total integral is positive");
  auto impl = std::make_shared<BistableReaction::Impl>();
  impl->f = [a](double s) { return s * (1.0 - s) * (s - a); };
  impl->fp = [a](double s) { return -3.0 * s * s + 2.0 * (1.0 + a) * s - a; };
  impl->F = [a](double s) {
    return s * s * (-s * s / 4.0 + (1.0 + a) * s / 3.0 - a / 2.0);
  };
  impl->alpha = a;
  impl->f_prime_alpha = a * (1.0 - a);
  impl->lipschitz_l = std::max(a, 1.0 - a);
  impl->eps_bar = a * a * a * (2.0 - a) / 12.0;
  impl->total = (1.0 - 2.0 * a) / 12.0;
  // integral of f over [v, 1] expanded around 1: exact for the quartic and
  // free of the total - F(v) cancellation that poisons the tail near v = 1
  impl->Fp_exact = [a](double v) {
    double u = 1.0 - v;
    return u * u * (6.0 * (1.0 - a) - 4.0 * (2.0 - a) * u + 3.0 * u * u) / 12.0;
  };
  // F(v) = v^2 (-3v^2 + 4(1+a)v - 6a) / 12, so the nonzero root solves
  // 3v^2 - 4(1+a)v + 6a = 0 (smaller root).  Evaluating with the shortest
  // decimal that round-trips to a turns this into an integer-coefficient
  // quadratic, so e.g. a = 0.4 yields 15v^2 - 28v + 12 = (3v-2)(5v-6) and
  // v_zero comes out as the correctly rounded 2/3 instead of drifting a few
  // ulp from the quantization of a.
  long double qa = 3.0L, qb = 4.0L * (1.0L + static_cast<long double>(a)),
              qc = 6.0L * static_cast<long double>(a);
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*e", prec - 1, a);
    if (std::strtod(buf, nullptr) != a) continue;
    char digits[24] = {0};
    int nd = 0, expo = 0;
    if (const char* e = std::strchr(buf, 'e')) {
      expo = std::atoi(e + 1);
      for (const char* p = buf; p != e; ++p)
        if (*p >= '0' && *p <= '9') digits[nd++] = *p;
    }
    int k = (nd - 1) - expo;  // a = digits / 10^k
    if (nd > 0 && k >= 1 && k <= 18) {
      long double n = std::strtold(digits, nullptr);
      long double tenk = 1.0L;
      for (int i = 0; i < k; ++i) tenk *= 10.0L;
      qa = 3.0L * tenk;
      qb = 4.0L * (tenk + n);
      qc = 6.0L * n;
    }
    break;
  }
  long double qd = qb * qb - 4.0L * qa * qc;
  impl->v_zero = static_cast<double>(
      qd > 0.0L ? 2.0L * qc / (qb + std::sqrt(qd)) : qb / (2.0L * qa));
  impl->closed_form = true;
  impl->cubic_a = a;
  return BistableReaction(std::move(impl));
}

BistableReaction build_from_table(const std::vector<double>& s_in,
                                  const std::vector<double>& f_in, double alpha) {
  if (s_in.size() != f_in.size() || s_in.size() < 8)
    throw ValidationError("table reaction: need matching sample arrays with at least 8 points");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("table reaction: alpha must lie strictly inside (0,1)");

  std::vector<size_t> order(s_in.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t i, size_t j) { return s_in[i] < s_in[j]; });
  std::vector<double> s, f;
  for (size_t k : order) {
    if (!s.empty() && s_in[k] <= s.back())
      throw ValidationError("table reaction: duplicate abscissa s = " + std::to_string(s_in[k]));
    s.push_back(s_in[k]);
    f.push_back(f_in[k]);
  }
  if (std::abs(s.front()) > 1e-12 || std::abs(s.back() - 1.0) > 1e-12)
    throw ValidationError("table reaction: samples must cover [0,1] exactly");
  s.front() = 0.0;
  s.back() = 1.0;

  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw ValidationError("table reaction: f vanishes identically");
  const double zero_tol = 1e-6 * std::max(1.0, scale);
  if (std::abs(f.front()) > zero_tol)
    throw ValidationError("table reaction: f(0) must vanish");
  if (std::abs(f.back()) > zero_tol)
    throw ValidationError("table reaction: f(1) must vanish");
  f.front() = 0.0;
  f.back() = 0.0;

  Pchip interp(s, f);
  if (std::abs(interp(alpha)) > zero_tol)
    throw ValidationError("table reaction: f(alpha) must vanish");

  // interior zero of the interpolant nearest to the declared alpha
  double grid_h = 1.0;
  for (size_t i = 0; i + 1 < s.size(); ++i) grid_h = std::min(grid_h, s[i + 1] - s[i]);
  double lo = alpha, hi = alpha;
  while (lo > 0.0 && interp(lo) >= 0.0) lo -= grid_h * 0.5;
  while (hi < 1.0 && interp(hi) <= 0.0) hi += grid_h * 0.5;
  double alpha_hat = alpha;
  if (interp(lo) < 0.0 && interp(hi) > 0.0)
    alpha_hat = brent_root([&](double x) { return interp(x); }, lo, hi, 1e-15);
  if (std::abs(alpha_hat - alpha) > 4.0 * grid_h + 1e-9)
    throw ValidationError("table reaction: declared alpha is inconsistent with the sampled zero");

  // sign pattern: nonpositive on (0, alpha), nonnegative on (alpha, 1),
  // strictly signed away from the zeros
  const int n_scan = 4001;
  double min_neg = 0.0, max_pos = 0.0;
  for (int i = 1; i < n_scan - 1; ++i) {
    double x = static_cast<double>(i) / (n_scan - 1);
    double v = interp(x);
    if (x < alpha_hat) {
      if (v > zero_tol)
        throw ValidationError("table reaction: sign pattern violated on (0,alpha) at s = " +
                              std::to_string(x));
      min_neg = std::min(min_neg, v);
    } else {
      if (v < -zero_tol)
        throw ValidationError("table reaction: sign pattern violated on (alpha,1) at s = " +
                              std::to_string(x));
      max_pos = std::max(max_pos, v);
    }
  }
  if (min_neg > -zero_tol || max_pos < zero_tol)
    throw ValidationError("table reaction: f must be strictly signed away from its zeros");

  // single dip then single bump: f decreasing to its minimum, increasing to
  // its maximum, decreasing back to 0 (checked with a small slack)
  double s_min = 0.0, s_max = 1.0;
  {
    double best = 0.0;
    for (int i = 0; i < n_scan; ++i) {
      double x = alpha_hat * i / (n_scan - 1.0);
      double v = interp(x);
      if (v < best) { best = v; s_min = x; }
    }
    best = 0.0;
    for (int i = 0; i < n_scan; ++i) {
      double x = alpha_hat + (1.0 - alpha_hat) * i / (n_scan - 1.0);
      double v = interp(x);
      if (v > best) { best = v; s_max = x; }
    }
    auto check_monotone = [&](double a0, double b0, int sign, const char* where) {
      double prev = interp(a0);
      const int m = 512;
      for (int i = 1; i <= m; ++i) {
        double x = a0 + (b0 - a0) * i / m;
        double v = interp(x);
        if (sign * (v - prev) < -zero_tol)
          throw ValidationError(std::string("table reaction: expected a single dip then a "
                                            "single bump; monotonicity fails ") + where);
        prev = v;
      }
    };
    check_monotone(0.0, s_min, -1, "before the dip");
    check_monotone(s_min, s_max, +1, "between dip and bump");
    check_monotone(s_max, 1.0, -1, "after the bump");
  }

  double fpa = interp.derivative(alpha_hat);
  if (!(fpa > 0.0))
    throw ValidationError("table reaction: f'(alpha) must be positive");

  double total = interp.primitive(1.0);
  if (!(total > 0.0))
    throw ValidationError("table reaction: integral of f over [0,1] must be positive");

  // smallest grid-valid l with f(s) >= -l s and f(s) <= l (1-s)
  double l = std::max(std::abs(interp.derivative(0.0)), std::abs(interp.derivative(1.0)));
  for (int i = 1; i < n_scan - 1; ++i) {
    double x = static_cast<double>(i) / (n_scan - 1);
    double v = interp(x);
    if (v < 0.0) l = std::max(l, -v / x);
    if (v > 0.0) l = std::max(l, v / (1.0 - x));
  }

  double eps_bar = -interp.primitive(alpha_hat);
  double v_zero = brent_root([&](double x) { return interp.primitive(x); },
                             alpha_hat + 1e-12, 1.0, 1e-15);

  auto impl = std::make_shared<BistableReaction::Impl>();
  impl->f = [interp](double x) { return interp(x); };
  impl->fp = [interp](double x) { return interp.derivative(x); };
  impl->F = [interp](double x) { return interp.primitive(x); };
  impl->alpha = alpha_hat;
  impl->f_prime_alpha = fpa;
  impl->lipschitz_l = l;
  impl->eps_bar = eps_bar;
  impl->v_zero = v_zero;
  impl->total = total;
  impl->closed_form = false;
  return BistableReaction(std::move(impl));
}

LinearBoundReport validate_linear_bound(const std::function<double(double)>& f,
                                        double alpha, double f_prime_alpha) {
  LinearBoundReport rep;
  rep.worst_s = alpha;
  rep.worst_ratio = 1.0;  // the limit value at s = alpha
  const int n = 100001;
  for (int i = 1; i < n - 1; ++i) {
    double x = static_cast<double>(i) / (n - 1);
    double d = std::abs(x - alpha);
    if (d < 1e-9) continue;
    double ratio = std::abs(f(x)) / (f_prime_alpha * d);
    if (ratio > rep.worst_ratio) { rep.worst_ratio = ratio; rep.worst_s = x; }
  }
  rep.holds = rep.worst_ratio <= 1.0 + 1e-9;
  return rep;
}

LinearBoundReport validate_linear_bound(const BistableReaction& r) {
  return validate_linear_bound([&r](double s) { return r(s); }, r.alpha(),
                               r.f_prime_alpha());
}

}  // namespace satfront
