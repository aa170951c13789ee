#ifndef HCG_JET_HPP
#define HCG_JET_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "hcg/errors.hpp"

namespace hcg {

// Hard engine limits. Order 6 is enough metric derivatives for everything the
// engine ever forms (three covariant derivatives of curvature plus headroom).
constexpr int kMaxJetOrder = 6;
constexpr int kMaxJetVars = 4;

namespace detail {

// Monomial bookkeeping for a fixed (nvars, order): graded-lex multi-index
// list, rank lookup, and the convolution pairs used by multiplication.
// Layouts are built once and cached; for K' > K the first size(K) monomials
// of the K' layout coincide with the K layout, so truncation is index-stable.
struct JetLayout {
  int nvars = 0;
  int order = 0;
  int size = 0;
  std::vector<std::array<std::uint8_t, kMaxJetVars>> exps;
  std::vector<int> rank;  // keyed by sum alpha_i * 7^i
  // mul_pairs[t] lists ordered (i, j) with exps[i] + exps[j] == exps[t].
  std::vector<std::vector<std::pair<int, int>>> mul_pairs;

  static const JetLayout& get(int nvars, int order);
};

}  // namespace detail

// Truncated multivariate Taylor expansion: the value of a function and all of
// its partial derivatives through total order K at a point, with arithmetic
// exact at that truncation order. Coefficients are Taylor coefficients
// (partial derivative divided by the factorial of the multi-index).
class Jet {
 public:
  Jet() = default;
  Jet(int nvars, int order, double value);

  static Jet constant(int nvars, int order, double value) { return Jet(nvars, order, value); }
  static Jet variable(int nvars, int order, int index, double value);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }

  double coeff(const std::vector<int>& alpha) const;
  // Taylor coefficient times alpha!: the actual mixed partial derivative.
  double partial(const std::vector<int>& alpha) const;

  // Jet of the partial derivative with respect to variable i; order drops by one.
  Jet derivative(int i) const;

  // Truncate to a lower order (no-op if already at or below).
  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double s, const Jet& b);

  // Composition with a univariate analytic function given its derivatives at
  // value(): result = sum_n derivs[n]/n! * (jet - value())^n.
  Jet compose(const std::vector<double>& derivs_at_value) const;

  Jet reciprocal() const;

 private:
  int nvars_ = 0;
  int order_ = 0;
  std::vector<double> c_;

  const detail::JetLayout& layout() const { return detail::JetLayout::get(nvars_, order_); }
  void check_compatible(const Jet& o) const;
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

}  // namespace hcg

#endif
