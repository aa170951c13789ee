#ifndef HCG_TENSOR_HPP
#define HCG_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "hcg/errors.hpp"
#include "hcg/jet.hpp"

namespace hcg {

enum class Slot { Co, Contra };

// Dense tensor at a point (T = double) or tensor of germs (T = Jet), with an
// explicit variance signature. Entries are stored row-major in slot order.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, std::vector<Slot> variance, const T& zero)
      : dim_(dim), variance_(std::move(variance)) {
    std::size_t n = 1;
    for (std::size_t s = 0; s < variance_.size(); ++s) n *= dim_;
    e_.assign(n, zero);
  }

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Slot>& variance() const { return variance_; }
  std::size_t size() const { return e_.size(); }

  T& operator[](std::size_t flat) { return e_[flat]; }
  const T& operator[](std::size_t flat) const { return e_[flat]; }

  template <typename... I>
  T& operator()(I... idx) {
    return e_[flatten({static_cast<int>(idx)...})];
  }
  template <typename... I>
  const T& operator()(I... idx) const {
    return e_[flatten({static_cast<int>(idx)...})];
  }

  T& at(const std::vector<int>& idx) { return e_[flatten(idx)]; }
  const T& at(const std::vector<int>& idx) const { return e_[flatten(idx)]; }

  std::size_t flatten(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) f = f * dim_ + idx[k];
    return f;
  }
  std::vector<int> unflatten(std::size_t flat) const {
    std::vector<int> idx(rank());
    for (int k = rank() - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(flat % dim_);
      flat /= dim_;
    }
    return idx;
  }

 private:
  int dim_ = 0;
  std::vector<Slot> variance_;
  std::vector<T> e_;
};

using TensorAtPoint = Tensor<double>;
using JetTensor = Tensor<Jet>;

// Order-0 part of every entry.
inline TensorAtPoint value_of(const JetTensor& t) {
  TensorAtPoint r(t.dim(), t.variance(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].value();
  return r;
}

inline std::vector<Slot> co_slots(int n) { return std::vector<Slot>(n, Slot::Co); }

// Replace slot `slot` using the metric (to lower) or inverse metric (to
// raise). `g2` must be the (0,2) metric when lowering a Contra slot and the
// (2,0) inverse when raising a Co slot.
template <typename T>
Tensor<T> flip_slot(const Tensor<T>& t, int slot, const Tensor<T>& g2, const T& zero) {
  auto var = t.variance();
  var[slot] = (var[slot] == Slot::Co) ? Slot::Contra : Slot::Co;
  Tensor<T> r(t.dim(), var, zero);
  for (std::size_t f = 0; f < r.size(); ++f) {
    auto idx = r.unflatten(f);
    T acc = zero;
    auto src = idx;
    for (int m = 0; m < t.dim(); ++m) {
      src[slot] = m;
      acc += g2(idx[slot], m) * t.at(src);
    }
    r[f] = acc;
  }
  return r;
}

inline double max_abs(const TensorAtPoint& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t[i]));
  return m;
}

inline double max_abs_diff(const TensorAtPoint& a, const TensorAtPoint& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double frob_norm(const TensorAtPoint& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * t[i];
  return std::sqrt(s);
}

}  // namespace hcg

#endif
