#ifndef HCG_ZOO_HPP
#define HCG_ZOO_HPP

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hcg/curvature.hpp"
#include "hcg/metric.hpp"

namespace hcg {

// The defining function of a 3-dimensional Walker metric g(dx,dx) = -2f(x,y),
// g(dx,dxt) = g(dy,dy) = 1, in coordinate order (x, y, xt).
struct WalkerFun {
  std::string name;
  std::function<Jet(const Jet& x, const Jet& y)> f;
  std::function<bool(double x, double y)> domain;  // empty = everywhere

  bool in_domain(double x, double y) const { return domain ? domain(x, y) : true; }
};

MetricField walker_metric(const WalkerFun& f);

// Closed-form curvature list computed from f's jets alone, independent of the
// connection machinery. Components in the coordinate frame:
// R(dx,dy,dy,dx), its first derivatives (;x ;y) and second (;xx ;xy ;yy).
struct WalkerCurvatureList {
  double r;        // f_yy
  double dr_x;     // f_xyy
  double dr_y;     // f_yyy
  double ddr_xx;   // f_xxyy - f_y f_yyy
  double ddr_xy;   // f_xyyy
  double ddr_yy;   // f_yyyy
};

WalkerCurvatureList walker_curvature_oracle(const WalkerFun& f, const Point& p);

// The normalized frame of the classification: xi1 = a11(dx + f dxt + a12 dy
// + a13 dxt), xi2 = dy + a23 dxt, xi3 = a33 dxt with a33 = 1/a11.
struct WalkerFrame {
  double a11 = 0.0, a12 = 0.0, a13 = 0.0, a23 = 0.0, a33 = 0.0;
  double lambda = 0.0;
};

WalkerFrame walker_frame(const WalkerFun& f, const Point& p);
// Columns are (xi1, xi2, xi3) in coordinates (x, y, xt).
Eigen::MatrixXd walker_frame_matrix(const WalkerFun& f, const Point& p);

// The conformal-class invariant f_yy f_yyyy / f_yyy^2 separating the three
// homothety-homogeneous families.
double homothety_invariant_c(const WalkerFun& f, const Point& p);

// Normalization for the f_yyy = 0 branch: solves a11^2 alpha = lambda^2 c0
// and a11^3 alpha_x = lambda^3 c1 in least squares with the gauge lambda = 1;
// the residual vanishes exactly when alpha^3 = (c0^3/c1^2) alpha_x^2.
struct WalkerAltNormalization {
  double a11 = 0.0;
  double lambda = 1.0;
  double residual = 0.0;
};

WalkerAltNormalization walker_alt_normalization(double alpha, double alpha_x,
                                                double c0 = 1.0, double c1 = 1.0);

// Shipped Walker defining functions.
WalkerFun walker_exp(double a = 1.0);             // e^{ay}
WalkerFun walker_log(int sign = 1);               // sign * ln y on y > 0
WalkerFun walker_pow(double eps, int sign = 1);   // sign * y^eps on y > 0
WalkerFun walker_quad(std::function<Jet(const Jet&)> alpha, std::string name,
                      std::function<bool(double)> domain_x = {});  // alpha(x) y^2 / 2
WalkerFun walker_sym();       // y^2 (covariantly constant curvature)
WalkerFun walker_quartic();   // y^4 / 12

// Warped metric e^{tx}(dx^2 + dx o theta + g_N) on R x N in coordinates
// (x, base coords). theta components are functions on N; empty = 0.
struct QStructureSpec {
  MetricField base;
  double t = 0.0;
  std::vector<ScalarField> theta;
};

// Points where g_N(theta, theta) = 1 make the form degenerate and are
// excluded from the returned metric's domain.
MetricField q_structure_metric(const QStructureSpec& spec);
double q_structure_theta_norm(const QStructureSpec& spec, const Point& base_point);

MetricField warped_product(const MetricField& base, double t);

// Ricci and scalar curvature of the theta = 0 warped metric from the base
// curvature alone: slice block rho_N - (m-2)/4 t^2 g_N, zero x-row, and
// tau = e^{-tx}(tau_N - (m-1)(m-2)/4 t^2). Full-coordinate tensor returned.
std::pair<TensorAtPoint, double> warped_ricci_oracle(const QStructureSpec& spec,
                                                     const Point& p);

// For constant Killing theta on a flat base: the rescaling rho =
// (1 - |xi|^2)^{-1/2}, s = rho t, and the map F(x, y) = (x/rho, y + x xi)
// pull the theta-free warped metric g_{s} back to g_{t,theta}. Returns the
// max pullback deviation over the samples.
double theta_flatten_check(const QStructureSpec& spec, const std::vector<Point>& samples);

// The shear/shift change of variables T(x,y,xt) = (x, y - beta, xt + y beta_x)
// carrying g_f to g_ftilde with ftilde = f(x, y-beta) - (beta_x^2 + 2y beta_xx)/2.
double change_of_variables_check(const WalkerFun& f,
                                 const std::function<Jet(const Jet&)>& beta,
                                 const std::vector<Point>& samples);

// Explicit isometry / homothety families of the classification proofs.
SmoothMap walker_exp_isometry(double a, double y0, double x0, double xt0, int sign = 1);
// On f = ln y: T*g = lambda^2 g.
SmoothMap walker_log_homothety(double lambda, double x0, double xt0);
// On f = y^c: T*g = lambda^2 g.
SmoothMap walker_pow_homothety(double c, double lambda, double x0, double xt0);

// Unit round sphere in a stereographic chart, u^2 + v^2 < 16.
MetricField sphere_metric();
MetricField flat_metric(int dim);

// Name + parameter lookup used by the CLI; throws with the list of known
// names on an unknown metric.
MetricField make_metric(const std::string& name,
                        const std::map<std::string, std::string>& params);
std::vector<std::string> metric_names();

}  // namespace hcg

#endif
