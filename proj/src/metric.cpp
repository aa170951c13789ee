#include "hcg/metric.hpp"

namespace hcg {

MetricField::MetricField(int dim, int sig_neg, std::vector<ScalarField> components,
                         std::function<bool(const Point&)> domain, std::string name)
    : dim_(dim), sig_neg_(sig_neg), comp_(std::move(components)),
      domain_(std::move(domain)), name_(std::move(name)) {
  if (dim_ < 2) throw error(errc::bad_argument, "metric dimension must be >= 2");
  if (comp_.size() != static_cast<std::size_t>(dim_ * dim_))
    throw error(errc::bad_argument, "metric component grid size mismatch");
}

void MetricField::require_in_domain(const Point& p) const {
  if (p.dim() != dim_) throw error(errc::bad_argument, "point dimension mismatch");
  for (double c : p.coords)
    if (!std::isfinite(c)) throw error(errc::bad_argument, "non-finite point coordinate");
  if (!in_domain(p))
    throw error(errc::point_outside_domain, "point outside metric domain" +
                                               (name_.empty() ? "" : " of " + name_));
}

JetTensor MetricField::jets_at(const Point& p, int order) const {
  require_in_domain(p);
  if (order > kMaxJetOrder)
    throw error(errc::jet_order_exceeded, "requested jet order above engine maximum");
  auto x = coordinate_jets(p, order);
  JetTensor g(dim_, co_slots(2), Jet(dim_, order, 0.0));
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      Jet v = comp_[i * dim_ + j](x);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Point SmoothMap::apply(const Point& p) const {
  auto out = coords(coordinate_jets(p, 1));
  Point q;
  q.coords.reserve(dim);
  for (const Jet& j : out) q.coords.push_back(j.value());
  return q;
}

TensorAtPoint SmoothMap::jacobian(const Point& p) const {
  auto out = coords(coordinate_jets(p, 1));
  TensorAtPoint jac(dim, {Slot::Contra, Slot::Co}, 0.0);
  std::vector<int> alpha(dim, 0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[j] = 1;
      jac(i, j) = out[i].partial(alpha);
    }
  }
  return jac;
}

SmoothMap identity_map(int dim) {
  return SmoothMap{dim, [](const std::vector<Jet>& x) { return x; }};
}

}  // namespace hcg
