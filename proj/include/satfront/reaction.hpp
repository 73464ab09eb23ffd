#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace satfront {

// A bistable reaction on [0,1]: zeros exactly at {0, alpha, 1}, negative on
// (0, alpha), positive on (alpha, 1), extended by zero outside [0,1].
// Instances are immutable values; copies share the underlying data.
class BistableReaction {
public:
  BistableReaction() = default;

  double operator()(double s) const;       // f(s)
  double f_prime(double s) const;          // f'(s) inside [0,1]
  double F(double s) const;                // primitive with F(0) = 0, clamped outside
  double F_minus(double s) const;          // running integral of the negative part: -F on [0, alpha]
  double F_plus(double s) const;           // integral of f over [s, 1]

  double alpha() const;
  double f_prime_alpha() const;            // f'(alpha) > 0
  double lipschitz_l() const;              // smallest l with f >= -l s and f <= l(1-s)
  double eps_bar() const;                  // max of F_minus = integral of the negative part
  double v_zero() const;                   // value in (alpha, 1) with F(v_zero) = 0
  double total_integral() const;           // F(1) > 0
  bool closed_form() const;                // cubic preset vs tabulated
  double cubic_a() const;                  // NaN unless built by build_cubic

  // Reflection s -> -f(1-s). The result connects equilibria {0, 1-alpha, 1}
  // but has negative total integral; it is only valid for monostable-type
  // computations on the (1-alpha, 1) side and for field symmetry checks.
  BistableReaction reflected() const;
  bool is_reflected() const;

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit BistableReaction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend BistableReaction build_cubic(double a);
  friend BistableReaction build_from_table(const std::vector<double>& s,
                                           const std::vector<double>& f,
                                           double alpha);
  friend BistableReaction detail_make_reflected(const BistableReaction&);
};

// f(s) = s(1-s)(s-a) with 0 < a < 1/2 (so the total integral is positive).
BistableReaction build_cubic(double a);

// Monotone cubic interpolation through (s_i, f_i) covering [0,1]; validation
// rejects data violating the bistable shape hypotheses with a message naming
// the failed clause.
BistableReaction build_from_table(const std::vector<double>& s,
                                  const std::vector<double>& f, double alpha);

// Check of the linear bound |f(s)| <= f'(alpha) |s - alpha| on [0,1].
// Under this bound the closed-form critical speed for the alpha -> 1
// connection is exact; without it only a bracket is guaranteed.
struct LinearBoundReport {
  bool holds = false;
  double worst_s = 0.0;      // argmax of |f(s)| / (f'(alpha)|s-alpha|)
  double worst_ratio = 0.0;  // value of that max
};

LinearBoundReport validate_linear_bound(const BistableReaction& r);
LinearBoundReport validate_linear_bound(const std::function<double(double)>& f,
                                        double alpha, double f_prime_alpha);

}  // namespace satfront
