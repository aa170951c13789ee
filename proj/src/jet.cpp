#include "hcg/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hcg {
namespace detail {

namespace {

void enumerate(int nvars, int order, std::vector<std::array<std::uint8_t, kMaxJetVars>>* out) {
  // Graded order: all multi-indices of total degree 0, then 1, ... Within a
  // degree the order is lexicographic; any fixed rule works as long as it is
  // consistent across orders, which grading by degree guarantees.
  for (int deg = 0; deg <= order; ++deg) {
    std::array<std::uint8_t, kMaxJetVars> alpha{};
    // iterate compositions of deg into nvars parts, lexicographic
    std::vector<int> a(nvars, 0);
    a[0] = deg;
    while (true) {
      alpha.fill(0);
      for (int i = 0; i < nvars; ++i) alpha[i] = static_cast<std::uint8_t>(a[i]);
      out->push_back(alpha);
      // next composition
      int i = nvars - 2;
      while (i >= 0 && a[i] == 0) --i;
      if (i < 0) break;
      int rest = 0;
      for (int j = i + 1; j < nvars; ++j) rest += a[j];
      a[i] -= 1;
      a[i + 1] = rest + 1;
      for (int j = i + 2; j < nvars; ++j) a[j] = 0;
    }
  }
}

int key_of(const std::array<std::uint8_t, kMaxJetVars>& alpha) {
  int k = 0, p = 1;
  for (int i = 0; i < kMaxJetVars; ++i) {
    k += alpha[i] * p;
    p *= (kMaxJetOrder + 1);
  }
  return k;
}

}  // namespace

const JetLayout& JetLayout::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, JetLayout> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({nvars, order});
  if (it != cache.end()) return it->second;

  if (nvars < 1 || nvars > kMaxJetVars)
    throw error(errc::bad_argument, "jet variable count out of range");
  if (order < 0 || order > kMaxJetOrder)
    throw error(errc::jet_order_exceeded, "jet order above engine maximum");

  JetLayout l;
  l.nvars = nvars;
  l.order = order;
  enumerate(nvars, order, &l.exps);
  l.size = static_cast<int>(l.exps.size());

  int keyspace = 1;
  for (int i = 0; i < kMaxJetVars; ++i) keyspace *= (kMaxJetOrder + 1);
  l.rank.assign(keyspace, -1);
  for (int i = 0; i < l.size; ++i) l.rank[key_of(l.exps[i])] = i;

  l.mul_pairs.assign(l.size, {});
  auto deg = [&](int i) {
    int d = 0;
    for (int v = 0; v < kMaxJetVars; ++v) d += l.exps[i][v];
    return d;
  };
  for (int i = 0; i < l.size; ++i) {
    for (int j = 0; j < l.size; ++j) {
      if (deg(i) + deg(j) > order) continue;
      std::array<std::uint8_t, kMaxJetVars> sum{};
      for (int v = 0; v < kMaxJetVars; ++v)
        sum[v] = static_cast<std::uint8_t>(l.exps[i][v] + l.exps[j][v]);
      l.mul_pairs[l.rank[key_of(sum)]].push_back({i, j});
    }
  }
  auto [pos, inserted] = cache.emplace(std::make_pair(nvars, order), std::move(l));
  (void)inserted;
  return pos->second;
}

}  // namespace detail

Jet::Jet(int nvars, int order, double value) : nvars_(nvars), order_(order) {
  const auto& l = detail::JetLayout::get(nvars, order);
  c_.assign(l.size, 0.0);
  c_[0] = value;
}

Jet Jet::variable(int nvars, int order, int index, double value) {
  Jet j(nvars, order, value);
  if (index < 0 || index >= nvars) throw error(errc::bad_argument, "jet variable index");
  if (order >= 1) {
    std::array<std::uint8_t, kMaxJetVars> e{};
    e[index] = 1;
    const auto& l = j.layout();
    for (int i = 0; i < l.size; ++i) {
      if (l.exps[i] == e) {
        j.c_[i] = 1.0;
        break;
      }
    }
  }
  return j;
}

void Jet::check_compatible(const Jet& o) const {
  if (nvars_ != o.nvars_) throw error(errc::bad_argument, "jet variable count mismatch");
}

double Jet::coeff(const std::vector<int>& alpha) const {
  const auto& l = layout();
  std::array<std::uint8_t, kMaxJetVars> e{};
  int deg = 0;
  for (size_t i = 0; i < alpha.size(); ++i) {
    e[i] = static_cast<std::uint8_t>(alpha[i]);
    deg += alpha[i];
  }
  if (deg > order_) throw error(errc::jet_order_exceeded, "coefficient beyond jet order");
  for (int i = 0; i < l.size; ++i)
    if (l.exps[i] == e) return c_[i];
  throw error(errc::bad_argument, "bad multi-index");
}

double Jet::partial(const std::vector<int>& alpha) const {
  double fact = 1.0;
  for (int a : alpha)
    for (int i = 2; i <= a; ++i) fact *= i;
  return coeff(alpha) * fact;
}

Jet Jet::derivative(int i) const {
  if (order_ == 0) throw error(errc::jet_order_exceeded, "no derivative left in jet");
  Jet r(nvars_, order_ - 1, 0.0);
  const auto& lsrc = layout();
  const auto& ldst = r.layout();
  for (int t = 0; t < ldst.size; ++t) {
    auto e = ldst.exps[t];
    e[i] = static_cast<std::uint8_t>(e[i] + 1);
    // locate e in source layout
    int key = 0, p = 1;
    for (int v = 0; v < kMaxJetVars; ++v) {
      key += e[v] * p;
      p *= (kMaxJetOrder + 1);
    }
    int s = lsrc.rank[key];
    r.c_[t] = c_[s] * e[i];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet r(nvars_, order, 0.0);
  std::copy(c_.begin(), c_.begin() + r.c_.size(), r.c_.begin());
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& x : r.c_) x = -x;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (double& x : c_) x /= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  int order = std::min(a.order_, b.order_);
  Jet r(a.nvars_, order, 0.0);
  const auto& l = r.layout();
  for (int t = 0; t < l.size; ++t) {
    double acc = 0.0;
    for (auto [i, j] : l.mul_pairs[t]) acc += a.c_[i] * b.c_[j];
    r.c_[t] = acc;
  }
  return r;
}

Jet Jet::compose(const std::vector<double>& derivs) const {
  int order = std::min<int>(order_, static_cast<int>(derivs.size()) - 1);
  Jet w = truncated(order);
  w.c_[0] = 0.0;
  double fact = 1.0;
  std::vector<double> coeffs(order + 1);
  for (int n = 0; n <= order; ++n) {
    if (n > 1) fact *= n;
    coeffs[n] = derivs[n] / fact;
  }
  Jet r(nvars_, order, coeffs[order]);
  for (int n = order - 1; n >= 0; --n) {
    r = r * w;
    r += coeffs[n];
  }
  return r;
}

Jet Jet::reciprocal() const {
  double a0 = value();
  if (a0 == 0.0) throw error(errc::bad_argument, "jet reciprocal at zero");
  std::vector<double> d(order_ + 1);
  double p = 1.0 / a0, fact = 1.0, sign = 1.0;
  for (int n = 0; n <= order_; ++n) {
    if (n > 1) fact *= n;
    d[n] = sign * fact * p;
    p /= a0;
    sign = -sign;
  }
  return compose(d);
}

Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
Jet operator/(double s, const Jet& b) { return b.reciprocal() * s; }

Jet exp(const Jet& a) {
  double e = std::exp(a.value());
  return a.compose(std::vector<double>(a.order() + 1, e));
}

Jet log(const Jet& a) {
  double a0 = a.value();
  if (a0 <= 0.0) throw error(errc::bad_argument, "jet log of non-positive value");
  std::vector<double> d(a.order() + 1);
  d[0] = std::log(a0);
  double p = 1.0 / a0, fact = 1.0, sign = 1.0;
  for (int n = 1; n <= a.order(); ++n) {
    d[n] = sign * fact * p;
    fact *= n;
    p /= a0;
    sign = -sign;
  }
  return a.compose(d);
}

Jet pow(const Jet& a, double p) {
  double a0 = a.value();
  if (a0 <= 0.0) throw error(errc::bad_argument, "jet pow of non-positive base");
  std::vector<double> d(a.order() + 1);
  double coef = 1.0;
  for (int n = 0; n <= a.order(); ++n) {
    d[n] = coef * std::pow(a0, p - n);
    coef *= (p - n);
  }
  return a.compose(d);
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet sin(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  std::vector<double> d(a.order() + 1);
  const double cycle[4] = {s, c, -s, -c};
  for (int n = 0; n <= a.order(); ++n) d[n] = cycle[n % 4];
  return a.compose(d);
}

Jet cos(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  std::vector<double> d(a.order() + 1);
  const double cycle[4] = {c, -s, -c, s};
  for (int n = 0; n <= a.order(); ++n) d[n] = cycle[n % 4];
  return a.compose(d);
}

}  // namespace hcg
