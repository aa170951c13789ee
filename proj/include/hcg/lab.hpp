#ifndef HCG_LAB_HPP
#define HCG_LAB_HPP

#include <functional>
#include <string>
#include <vector>

#include "hcg/curvature.hpp"
#include "hcg/metric.hpp"

namespace hcg {

struct GeodesicState {
  Point point;
  std::vector<double> velocity;
  double arc_length = 0.0;
};

struct GeodesicResult {
  GeodesicState state;
  bool exited_domain = false;
  double speed_drift = 0.0;  // max |g(v,v) - g(v0,v0)| seen along the path
};

// Classical RK4 on the geodesic equation with Christoffels evaluated from
// metric jets. The step is h in the affine parameter, shortened where the
// coordinate velocity is large so a fixed h cannot jump across the chart.
GeodesicResult geodesic_integrate(const MetricField& g, const GeodesicState& start,
                                  double length, double h = 1e-3);

struct VsiReport {
  bool vsi = false;
  double max_abs = 0.0;
  int samples = 0;
};

VsiReport vsi_sweep(const MetricField& g, const std::vector<Point>& samples,
                    double tol = 1e-10);

// A scalar-invariant level probe: mu(P) = |I(P0)/I(P)|^{1/order} for a named
// catalogue invariant of the given order.
struct LevelSetProbe {
  std::string invariant;  // a WeylScalarSet entry name
  Point base;
  int order = 0;  // filled from the catalogue when 0
};

double mu_level(const MetricField& g, const LevelSetProbe& probe, const Point& p);

// Distance between the level sets mu = c and mu = d measured along the
// coordinate-0 line through the probe base (the radial direction of the
// warped metrics): level crossings by bisection, arc length by adaptive
// Simpson quadrature of sqrt(g_00).
double slice_distance(const MetricField& g, const LevelSetProbe& probe, double c, double d);

struct IncompletenessResult {
  double arc_length = 0.0;
  bool finite = false;  // false when the budget was exhausted
};

// Follows the unit radial geodesic toward decreasing mu and reports the arc
// length accumulated when mu has decayed below mu_stop (or the budget cap).
IncompletenessResult incompleteness_probe(const MetricField& g, const LevelSetProbe& probe,
                                          double budget, double mu_stop = 1e-6);

struct AlphaClassification {
  double c3 = 0.0;                // least-squares fit of alpha^3 = c3 alpha_x^2
  double branch1_residual = 0.0;  // max |alpha^3 - c3 alpha_x^2|
  double ratio_mean = 0.0;        // mean of alpha alpha'' / alpha'^2
  double ratio_spread = 0.0;      // max deviation from the mean
  std::string verdict;            // inverse-square | exponential | power | unclassified
};

AlphaClassification classify_walker_alpha(const std::function<Jet(const Jet&)>& alpha,
                                          const std::vector<double>& samples);

// The family alpha^{(k)} = e^{-x^2} with each lower derivative produced by
// integration from -infinity; tabulated on a uniform grid with Hermite-cubic
// evaluation between nodes (the derivative of each level is the next level).
class VariableCHFamily {
 public:
  VariableCHFamily(int k, double xmin, double xmax, double step);

  int k() const { return k_; }
  // Value of alpha^{(l)} for 0 <= l <= k, x within the grid.
  double eval(int l, double x) const;
  // Derivative of order j of alpha = alpha^{(0)}; closed form above level k.
  double deriv(int j, double x) const;
  // alpha as a jet-evaluable scalar (for building metrics).
  std::function<Jet(const Jet&)> as_scalar() const;

  double xmin() const { return xmin_; }
  double xmax() const { return xmax_; }

 private:
  int k_;
  double xmin_, xmax_, step_;
  std::vector<std::vector<double>> levels_;  // levels_[l][i] = alpha^{(l)}(x_i)

  double node(int i) const { return xmin_ + i * step_; }
};

VariableCHFamily variable_ch_construct(int k, double step = 1.0 / 512.0);

struct CharacterSpec {
  std::vector<double> a;
};

struct CharacterResult {
  double lambda = 0.0;
  bool split = false;  // sum of the exponents nonzero
};

// lambda_a(H) = prod h_ii^{a_i} on upper-triangular H with positive diagonal.
CharacterResult character_eval(const CharacterSpec& spec, const std::vector<double>& diag);

// Recursive adaptive Simpson quadrature, shared by the lab routines.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10);

}  // namespace hcg

#endif
