#ifndef HCG_CURVATURE_HPP
#define HCG_CURVATURE_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hcg/metric.hpp"
#include "hcg/tensor.hpp"

namespace hcg {

// Inverse of a symmetric matrix of jets (Gaussian elimination with pivoting
// on the order-0 part). Throws errc::singular_metric when the order-0 matrix
// is numerically singular; degeneracy is never regularized away.
JetTensor invert_jet_matrix(const JetTensor& g);

// Levi-Civita connection and curvature of a metric, evaluated pointwise from
// jets. All covariant-derivative slots are appended last, so
// nabla_r(l) has slots (x1, x2, x3, x4; x5, ..., x_{l+4}).
class CurvatureChain {
 public:
  // lmax: highest covariant derivative of curvature the chain will expose.
  // Metric jets of order lmax + 2 are consumed.
  CurvatureChain(const MetricField& g, const Point& p, int lmax);

  int dim() const { return dim_; }
  int lmax() const { return lmax_; }

  const JetTensor& metric_jets() const { return g_; }
  const JetTensor& inverse_metric() const { return ginv_; }
  const JetTensor& christoffel() const { return gamma_; }  // (i, j, k) = Gamma_{ij}^k
  // Curvature operator: entry (i, j, k, l) is the ∂_l component of R(∂_i, ∂_j)∂_k.
  const JetTensor& curvature_op() const { return op_; }
  const JetTensor& nabla_r(int l) const;       // (0, l+4) curvature tensor derivatives
  const JetTensor& nabla_r_op(int l) const;    // (1, l+3) operator-form derivatives

 private:
  int dim_;
  int lmax_;
  JetTensor g_, ginv_, gamma_, op_;
  std::vector<JetTensor> nabla_r_;
  std::vector<JetTensor> nabla_r_op_;
};

// One covariant differentiation of a jet-valued tensor field; the new
// covariant slot is appended last. Handles mixed variance.
JetTensor covariant_derivative(const JetTensor& field, const JetTensor& christoffel);

TensorAtPoint christoffel(const MetricField& g, const Point& p);

// Returns {R (0,4), curvature operator (1,3)}.
std::pair<TensorAtPoint, TensorAtPoint> curvature(const MetricField& g, const Point& p);

// The fixed catalogue of Weyl scalar invariants. `order` of an invariant is
// its total metric-derivative count, which controls the conformal scaling
// g -> c^2 g, value -> c^{-order} value.
struct WeylScalarSet {
  double tau = 0.0;            // order 2
  double norm_r2 = 0.0;        // |R|^2, order 4
  double norm_ricci2 = 0.0;    // |rho|^2, order 4
  double tau_sq = 0.0;         // order 4
  double laplacian_tau = 0.0;  // order 4
  double norm_grad_r2 = 0.0;   // |nabla R|^2, order 6
  double norm_grad_tau2 = 0.0; // |nabla tau|^2, order 6
  double tr_ricci3 = 0.0;      // tr(rho^3), order 6

  // name -> (value, order), iteration order fixed
  std::vector<std::pair<std::string, std::pair<double, int>>> entries() const;
  double max_abs() const;
};

WeylScalarSet weyl_scalars(const MetricField& g, const Point& p);

// Ricci tensor rho_{jk} = g^{il} R_{ijkl} and scalar curvature tau from a
// chain that has at least l = 0 available.
TensorAtPoint ricci(const TensorAtPoint& r04, const TensorAtPoint& ginv);
double scalar_curvature(const TensorAtPoint& r04, const TensorAtPoint& ginv);

// max over samples and index pairs of |(T^* g)_{ij} - lambda^2 g_{ij}|.
double homothety_pullback_residual(const MetricField& g, const SmoothMap& t, double lambda,
                                   const std::vector<Point>& samples);

// Pullback of the metric value at p under the map: (T^*g)_{ij}(p).
TensorAtPoint pullback_metric(const MetricField& g, const SmoothMap& t, const Point& p);

}  // namespace hcg

#endif
