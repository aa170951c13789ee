#ifndef HCG_MODEL_HPP
#define HCG_MODEL_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "hcg/curvature.hpp"
#include "hcg/metric.hpp"
#include "hcg/tensor.hpp"

namespace hcg {

// Pointwise k-curvature model: inner product (gram) plus the components of
// nabla^l R for l = 0..k, all expressed in one frame.
struct CurvatureModel {
  int dim = 0;
  int level = 0;
  TensorAtPoint gram;                     // epsilon_{ij}
  std::vector<TensorAtPoint> components;  // c^{(l)}, rank l+4

  // Frobenius norm over all levels in the auxiliary inner product that treats
  // the model frame as orthonormal (the indefinite gram induces no norm).
  double norm() const;
  bool is_zero(double tol = 1e-10) const;
  bool level_zero(int l, double tol = 1e-10) const;
};

// Components of nabla^l R in the columns of `frame` (frame(i, j) = i-th
// coordinate of the j-th frame vector); gram = frame^T g frame.
CurvatureModel model_in_frame(const MetricField& g, const Point& p, int k,
                              const Eigen::MatrixXd& frame);

// Canonical model: signature-ordered pseudo-orthonormal frame produced by
// modified Gram-Schmidt with pivoting (gram comes out diag(-1..,+1..)).
// An optional seed frame replaces the coordinate basis as starting vectors.
CurvatureModel build_model(const MetricField& g, const Point& p, int k);
CurvatureModel build_model(const MetricField& g, const Point& p, int k,
                           const Eigen::MatrixXd& seed_frame);

enum class MatchVerdict { matched, inconclusive, no_match };

struct HomothetyMatch {
  Eigen::MatrixXd frame_map;       // phi, a gram isometry
  double lambda = 1.0;             // signed scaling, 1 for isometry mode
  std::vector<double> residuals;   // per level
  double residual = 0.0;           // stacked
  bool converged = false;
  MatchVerdict verdict = MatchVerdict::no_match;
  std::string mode;                // isometry | homothety | variable
  std::string note;                // set on structural failures (no scale exists, ...)

  bool matched() const { return verdict == MatchVerdict::matched; }
};

struct MatchOptions {
  int starts = 64;         // deterministic quasi-random start sequence
  int max_iters = 200;
  double success_tol = 1e-7;   // relative to max(1, model norm)
  double failure_tol = 1e-3;   // relative to model norm; above = certified failure
  double zero_tol = 1e-10;
};

// Definition 1-style matching: phi in O(gram) with phi* c2 = c1 per level.
HomothetyMatch isometry_match(const CurvatureModel& m1, const CurvatureModel& m2,
                              const MatchOptions& opt = {});
// Lemma-style matching: phi* c2^{(l)} = lambda^{-l-2} c1^{(l)}, lambda shared
// across levels and eliminated in closed form per candidate phi.
HomothetyMatch homothety_match(const CurvatureModel& m1, const CurvatureModel& m2,
                               const MatchOptions& opt = {});
// Per-level matching with an independent (phi_l, lambda_l) for every level.
std::vector<HomothetyMatch> variable_match(const CurvatureModel& m1, const CurvatureModel& m2,
                                           const MatchOptions& opt = {});

// Rebuilds Phi = lambda * phi and checks the operator-form equivariance that
// the tensor-form match is equivalent to; returns the max deviation.
double lemma12_equivalence_check(const HomothetyMatch& match, const CurvatureModel& m1,
                                 const CurvatureModel& m2);

struct SingerProfile {
  std::vector<int> dims;  // d_s for s = 0..s_max
  int singer_number = 0;
};

SingerProfile singer_profile(const MetricField& g, const Point& p, int s_max);

}  // namespace hcg

#endif
