#ifndef HCG_METRIC_HPP
#define HCG_METRIC_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hcg/errors.hpp"
#include "hcg/jet.hpp"
#include "hcg/tensor.hpp"

namespace hcg {

struct Point {
  std::vector<double> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[i]; }
};

// A chart-local scalar function, evaluated on jets so that all of its partial
// derivatives up to the seed order come out of one call.
using ScalarField = std::function<Jet(const std::vector<Jet>&)>;

inline std::vector<Jet> coordinate_jets(const Point& p, int order) {
  std::vector<Jet> v;
  v.reserve(p.dim());
  for (int i = 0; i < p.dim(); ++i)
    v.push_back(Jet::variable(p.dim(), order, i, p.coords[i]));
  return v;
}

// Coordinate-defined pseudo-Riemannian metric on a single chart.
// sig_neg/sig_pos is the signature (p, q): count of negative and positive
// eigenvalues of g at every domain point.
class MetricField {
 public:
  MetricField() = default;
  MetricField(int dim, int sig_neg, std::vector<ScalarField> components,
              std::function<bool(const Point&)> domain, std::string name = "");

  int dim() const { return dim_; }
  int sig_neg() const { return sig_neg_; }
  int sig_pos() const { return dim_ - sig_neg_; }
  const std::string& name() const { return name_; }

  bool in_domain(const Point& p) const { return domain_ ? domain_(p) : true; }
  void require_in_domain(const Point& p) const;

  const ScalarField& component(int i, int j) const { return comp_[i * dim_ + j]; }

  // m x m grid of component jets at P, truncated at the requested order.
  JetTensor jets_at(const Point& p, int order) const;

 private:
  int dim_ = 0;
  int sig_neg_ = 0;
  std::vector<ScalarField> comp_;  // full symmetric grid
  std::function<bool(const Point&)> domain_;
  std::string name_;
};

// A coordinate map between charts, jet-evaluable so that the Jacobian (and
// higher derivatives when needed) come from the same definition.
struct SmoothMap {
  int dim = 0;
  std::function<std::vector<Jet>(const std::vector<Jet>&)> coords;

  Point apply(const Point& p) const;
  // jacobian(i, j) = d(coords_i)/d(x_j) at p.
  TensorAtPoint jacobian(const Point& p) const;
};

SmoothMap identity_map(int dim);

}  // namespace hcg

#endif
