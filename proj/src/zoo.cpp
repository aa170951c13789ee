#include "hcg/zoo.hpp"

#include <algorithm>
#include <cmath>

#include "hcg/lab.hpp"

namespace hcg {

namespace {

// Rebuilds a coordinate jet at two orders above its own so that derivatives
// of a univariate closure can be taken without losing truncation order. All
// engine call sites hand metric components affine coordinate jets, which this
// reconstruction assumes.
Jet raise_coordinate_order(const Jet& x, int extra) {
  int order = std::min(x.order() + extra, kMaxJetOrder);
  return Jet::variable(x.nvars(), order, 0, x.value());
}

}  // namespace

MetricField walker_metric(const WalkerFun& f) {
  const int m = 3;
  std::vector<ScalarField> comp(m * m);
  auto zero = [](const std::vector<Jet>& xs) {
    return Jet::constant(xs[0].nvars(), xs[0].order(), 0.0);
  };
  auto one = [](const std::vector<Jet>& xs) {
    return Jet::constant(xs[0].nvars(), xs[0].order(), 1.0);
  };
  for (auto& c : comp) c = zero;
  WalkerFun ff = f;
  comp[0 * m + 0] = [ff](const std::vector<Jet>& xs) { return -2.0 * ff.f(xs[0], xs[1]); };
  comp[0 * m + 2] = one;
  comp[2 * m + 0] = one;
  comp[1 * m + 1] = one;
  auto domain = [ff](const Point& p) { return ff.in_domain(p[0], p[1]); };
  return MetricField(3, 1, std::move(comp), domain, "walker." + f.name);
}

WalkerCurvatureList walker_curvature_oracle(const WalkerFun& f, const Point& p) {
  if (!f.in_domain(p[0], p[1]))
    throw error(errc::point_outside_domain, "point outside walker domain");
  Jet x = Jet::variable(2, 4, 0, p[0]);
  Jet y = Jet::variable(2, 4, 1, p[1]);
  Jet j = f.f(x, y);
  WalkerCurvatureList out;
  out.r = j.partial({0, 2});
  out.dr_x = j.partial({1, 2});
  out.dr_y = j.partial({0, 3});
  out.ddr_xx = j.partial({2, 2}) - j.partial({0, 1}) * j.partial({0, 3});
  out.ddr_xy = j.partial({1, 3});
  out.ddr_yy = j.partial({0, 4});
  return out;
}

WalkerFrame walker_frame(const WalkerFun& f, const Point& p) {
  auto o = walker_curvature_oracle(f, p);
  if (std::abs(o.r) < 1e-12)
    throw error(errc::frame_flat_direction, "f_yy vanishes; no curvature direction");
  if (std::abs(o.dr_y) < 1e-12)
    throw error(errc::frame_needs_alt_normalization,
                "f_yyy vanishes; use the alternative normalization branch");
  WalkerFrame w;
  w.lambda = o.dr_y / o.r;
  w.a12 = -o.dr_x / o.dr_y;
  w.a13 = -0.5 * w.a12 * w.a12;
  w.a23 = -w.a12;
  w.a11 = std::sqrt(std::abs(w.lambda * w.lambda / o.r));
  w.a33 = 1.0 / w.a11;
  return w;
}

Eigen::MatrixXd walker_frame_matrix(const WalkerFun& f, const Point& p) {
  WalkerFrame w = walker_frame(f, p);
  Jet x = Jet::variable(2, 0, 0, p[0]);
  Jet y = Jet::variable(2, 0, 1, p[1]);
  double fval = f.f(x, y).value();
  Eigen::MatrixXd b(3, 3);
  b.col(0) << w.a11, w.a11 * w.a12, w.a11 * (fval + w.a13);
  b.col(1) << 0.0, 1.0, w.a23;
  b.col(2) << 0.0, 0.0, w.a33;
  return b;
}

double homothety_invariant_c(const WalkerFun& f, const Point& p) {
  auto o = walker_curvature_oracle(f, p);
  if (std::abs(o.dr_y) < 1e-12)
    throw error(errc::bad_argument, "f_yyy vanishes; invariant undefined");
  return o.r * o.ddr_yy / (o.dr_y * o.dr_y);
}

WalkerAltNormalization walker_alt_normalization(double alpha, double alpha_x, double c0,
                                                double c1) {
  if (alpha * c0 <= 0.0 || alpha_x * c1 <= 0.0)
    throw error(errc::no_scale_exists, "sign-incompatible alpha data for the alt normalization");
  double u = std::log(c0 / alpha);
  double w = std::log(c1 / alpha_x);
  WalkerAltNormalization out;
  // Least squares for log a11 over the two log-linear equations, lambda = 1.
  double d = (2.0 * u + 3.0 * w) / 13.0;
  out.a11 = std::exp(d);
  out.lambda = 1.0;
  double r1 = out.a11 * out.a11 * alpha - c0;
  double r2 = out.a11 * out.a11 * out.a11 * alpha_x - c1;
  out.residual = std::max(std::abs(r1) / std::max(1.0, std::abs(c0)),
                          std::abs(r2) / std::max(1.0, std::abs(c1)));
  return out;
}

WalkerFun walker_exp(double a) {
  WalkerFun w;
  w.name = "exp";
  w.f = [a](const Jet&, const Jet& y) { return exp(a * y); };
  return w;
}

WalkerFun walker_log(int sign) {
  WalkerFun w;
  w.name = "log";
  double s = sign < 0 ? -1.0 : 1.0;
  w.f = [s](const Jet&, const Jet& y) { return s * log(y); };
  w.domain = [](double, double y) { return y > 1e-12; };
  return w;
}

WalkerFun walker_pow(double eps, int sign) {
  WalkerFun w;
  w.name = "pow";
  double s = sign < 0 ? -1.0 : 1.0;
  w.f = [s, eps](const Jet&, const Jet& y) { return s * pow(y, eps); };
  w.domain = [](double, double y) { return y > 1e-12; };
  return w;
}

WalkerFun walker_quad(std::function<Jet(const Jet&)> alpha, std::string name,
                      std::function<bool(double)> domain_x) {
  WalkerFun w;
  w.name = "quad." + name;
  w.f = [alpha](const Jet& x, const Jet& y) { return 0.5 * alpha(x) * y * y; };
  if (domain_x) w.domain = [domain_x](double x, double) { return domain_x(x); };
  return w;
}

WalkerFun walker_sym() {
  WalkerFun w;
  w.name = "sym";
  w.f = [](const Jet&, const Jet& y) { return y * y; };
  return w;
}

WalkerFun walker_quartic() {
  WalkerFun w;
  w.name = "quartic";
  w.f = [](const Jet&, const Jet& y) { return y * y * y * y / 12.0; };
  return w;
}

namespace {

std::vector<Jet> slice_jets(const std::vector<Jet>& xs) {
  return std::vector<Jet>(xs.begin() + 1, xs.end());
}

Eigen::MatrixXd base_values(const MetricField& base, const Point& p) {
  auto gv = value_of(base.jets_at(p, 0));
  Eigen::MatrixXd m(base.dim(), base.dim());
  for (int i = 0; i < base.dim(); ++i)
    for (int j = 0; j < base.dim(); ++j) m(i, j) = gv(i, j);
  return m;
}

}  // namespace

double q_structure_theta_norm(const QStructureSpec& spec, const Point& base_point) {
  if (spec.theta.empty()) return 0.0;
  const int n = spec.base.dim();
  auto xs = coordinate_jets(base_point, 0);
  Eigen::VectorXd th(n);
  for (int i = 0; i < n; ++i) th[i] = spec.theta[i](xs).value();
  Eigen::MatrixXd g = base_values(spec.base, base_point);
  return th.dot(g.inverse() * th);
}

MetricField q_structure_metric(const QStructureSpec& spec) {
  const int n = spec.base.dim();
  const int m = n + 1;
  if (!spec.theta.empty() && static_cast<int>(spec.theta.size()) != n)
    throw error(errc::bad_argument, "theta component count must match the base dimension");
  QStructureSpec s = spec;
  std::vector<ScalarField> comp(m * m);
  auto warp = [t = s.t](const Jet& x) { return exp(t * x); };
  comp[0] = [warp](const std::vector<Jet>& xs) { return warp(xs[0]); };
  for (int i = 0; i < n; ++i) {
    ScalarField cross;
    if (s.theta.empty())
      cross = [](const std::vector<Jet>& xs) {
        return Jet::constant(xs[0].nvars(), xs[0].order(), 0.0);
      };
    else
      cross = [warp, th = s.theta[i]](const std::vector<Jet>& xs) {
        return warp(xs[0]) * th(slice_jets(xs));
      };
    comp[0 * m + (i + 1)] = cross;
    comp[(i + 1) * m + 0] = cross;
    for (int j = 0; j < n; ++j)
      comp[(i + 1) * m + (j + 1)] = [warp, gij = s.base.component(i, j)](
                                        const std::vector<Jet>& xs) {
        return warp(xs[0]) * gij(slice_jets(xs));
      };
  }
  auto domain = [s](const Point& p) {
    Point b{std::vector<double>(p.coords.begin() + 1, p.coords.end())};
    if (!s.base.in_domain(b)) return false;
    if (!s.theta.empty() && std::abs(q_structure_theta_norm(s, b) - 1.0) <= 1e-9)
      return false;  // g_N(theta,theta) = 1 makes the form degenerate
    return true;
  };
  return MetricField(m, s.base.sig_neg(), std::move(comp), domain,
                     "warped(" + s.base.name() + ", t=" + std::to_string(s.t) + ")");
}

MetricField warped_product(const MetricField& base, double t) {
  return q_structure_metric(QStructureSpec{base, t, {}});
}

std::pair<TensorAtPoint, double> warped_ricci_oracle(const QStructureSpec& spec,
                                                     const Point& p) {
  if (!spec.theta.empty())
    throw error(errc::bad_argument, "oracle covers theta = 0 only");
  const int n = spec.base.dim();
  const int m = n + 1;
  Point b{std::vector<double>(p.coords.begin() + 1, p.coords.end())};
  CurvatureChain chain(spec.base, b, 0);
  auto r04 = value_of(chain.nabla_r(0));
  auto ginv = value_of(chain.inverse_metric());
  auto rho_n = ricci(r04, ginv);
  double tau_n = scalar_curvature(r04, ginv);
  auto gn = value_of(chain.metric_jets());

  TensorAtPoint rho(m, co_slots(2), 0.0);
  double corr = (m - 2) / 4.0 * spec.t * spec.t;  // slice-block correction
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rho(i + 1, j + 1) = rho_n(i, j) - corr * gn(i, j);
  double tau = std::exp(-spec.t * p[0]) *
               (tau_n - (m - 1) * (m - 2) / 4.0 * spec.t * spec.t);
  return {rho, tau};
}

double theta_flatten_check(const QStructureSpec& spec, const std::vector<Point>& samples) {
  if (spec.theta.empty()) {
    // rho = 1 and the map is the identity; the residual is still measured.
    MetricField g = q_structure_metric(spec);
    double worst = 0.0;
    for (const auto& p : samples)
      worst = std::max(worst, max_abs_diff(pullback_metric(g, identity_map(g.dim()), p),
                                           value_of(g.jets_at(p, 0))));
    return worst;
  }
  const int n = spec.base.dim();
  const int m = n + 1;
  Point b0{std::vector<double>(samples.at(0).coords.begin() + 1, samples.at(0).coords.end())};

  // Killing check on the base: theta_{a;b} + theta_{b;a} = 0.
  {
    auto xs = coordinate_jets(b0, 2);
    JetTensor th(n, co_slots(1), Jet(n, 1, 0.0));
    for (int i = 0; i < n; ++i) th(i) = spec.theta[i](xs).truncated(1);
    auto gj = spec.base.jets_at(b0, 2);
    auto ginv = invert_jet_matrix(gj);
    // Christoffel of the base at order 1.
    JetTensor gamma(n, {Slot::Co, Slot::Co, Slot::Contra}, Jet(n, 1, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Jet acc(n, 1, 0.0);
          for (int l = 0; l < n; ++l)
            acc += ginv(k, l).truncated(1) *
                   (gj(j, l).derivative(i) + gj(i, l).derivative(j) - gj(i, j).derivative(l));
          gamma(i, j, k) = 0.5 * acc;
        }
    auto dth = covariant_derivative(th, gamma);
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        worst = std::max(worst, std::abs(dth(a, c).value() + dth(c, a).value()));
    if (worst > 1e-9)
      throw error(errc::non_killing_form, "theta is not a Killing form on the base");
  }

  double n2 = q_structure_theta_norm(spec, b0);
  if (n2 >= 1.0)
    throw error(errc::bad_argument, "theta norm >= 1; no flattening rescale exists");
  double rho = 1.0 / std::sqrt(1.0 - n2);
  double s_rate = rho * spec.t;

  // Constant dual vector xi^a = g_N^{ab} theta_b.
  auto xs0 = coordinate_jets(b0, 0);
  Eigen::VectorXd th(n);
  for (int i = 0; i < n; ++i) th[i] = spec.theta[i](xs0).value();
  Eigen::VectorXd xi = base_values(spec.base, b0).inverse() * th;

  SmoothMap f_map;
  f_map.dim = m;
  f_map.coords = [rho, xi, m](const std::vector<Jet>& xs) {
    std::vector<Jet> out(m, xs[0]);
    out[0] = xs[0] / rho;
    for (int a = 1; a < m; ++a) out[a] = xs[a] + xi[a - 1] * xs[0];
    return out;
  };

  MetricField g_t = q_structure_metric(spec);
  MetricField g_s = q_structure_metric(QStructureSpec{spec.base, s_rate, {}});
  double worst = 0.0;
  for (const auto& p : samples)
    worst = std::max(worst, max_abs_diff(pullback_metric(g_s, f_map, p),
                                         value_of(g_t.jets_at(p, 0))));
  return worst;
}

double change_of_variables_check(const WalkerFun& f,
                                 const std::function<Jet(const Jet&)>& beta,
                                 const std::vector<Point>& samples) {
  WalkerFun ft;
  ft.name = f.name + ".shifted";
  ft.f = [f, beta](const Jet& x, const Jet& y) {
    Jet xh = raise_coordinate_order(x, 2);
    Jet b = beta(xh);
    Jet bx = b.derivative(0);
    Jet bxx = bx.derivative(0);
    return f.f(x, y - b) - 0.5 * (bx * bx + 2.0 * y * bxx);
  };
  if (f.domain)
    ft.domain = [f, beta](double x, double y) {
      double b = beta(Jet::constant(1, 0, x)).value();
      return f.in_domain(x, y - b);
    };

  SmoothMap t_map;
  t_map.dim = 3;
  t_map.coords = [beta](const std::vector<Jet>& xs) {
    Jet xh = raise_coordinate_order(xs[0], 2);
    Jet b = beta(xh);
    Jet bx = b.derivative(0);
    std::vector<Jet> out(3, xs[0]);
    out[0] = xs[0];
    out[1] = xs[1] - b;
    out[2] = xs[2] + xs[1] * bx;
    return out;
  };

  MetricField g_f = walker_metric(f);
  MetricField g_ft = walker_metric(ft);
  double worst = 0.0;
  for (const auto& p : samples)
    worst = std::max(worst, max_abs_diff(pullback_metric(g_f, t_map, p),
                                         value_of(g_ft.jets_at(p, 0))));
  return worst;
}

SmoothMap walker_exp_isometry(double a, double y0, double x0, double xt0, int sign) {
  double s = sign < 0 ? -1.0 : 1.0;
  SmoothMap t;
  t.dim = 3;
  double cx = s * std::exp(-a * y0 / 2.0);
  double cxt = s * std::exp(a * y0 / 2.0);
  t.coords = [=](const std::vector<Jet>& xs) {
    std::vector<Jet> out(3, xs[0]);
    out[0] = cx * xs[0] + x0;
    out[1] = xs[1] + y0;
    out[2] = cxt * xs[2] + xt0;
    return out;
  };
  return t;
}

SmoothMap walker_log_homothety(double lambda, double x0, double xt0) {
  if (lambda <= 0.0) throw error(errc::bad_argument, "homothety parameter must be positive");
  SmoothMap t;
  t.dim = 3;
  double shear = lambda * std::log(lambda);
  t.coords = [=](const std::vector<Jet>& xs) {
    std::vector<Jet> out(3, xs[0]);
    out[0] = lambda * xs[0] + x0;
    out[1] = lambda * xs[1];
    out[2] = lambda * xs[2] + xt0 + shear * xs[0];
    return out;
  };
  return t;
}

SmoothMap walker_pow_homothety(double c, double lambda, double x0, double xt0) {
  if (lambda <= 0.0) throw error(errc::bad_argument, "homothety parameter must be positive");
  SmoothMap t;
  t.dim = 3;
  double cx = std::pow(lambda, (2.0 - c) / 2.0);
  double cxt = std::pow(lambda, (c + 2.0) / 2.0);
  t.coords = [=](const std::vector<Jet>& xs) {
    std::vector<Jet> out(3, xs[0]);
    out[0] = cx * xs[0] + x0;
    out[1] = lambda * xs[1];
    out[2] = cxt * xs[2] + xt0;
    return out;
  };
  return t;
}

MetricField sphere_metric() {
  std::vector<ScalarField> comp(4);
  auto zero = [](const std::vector<Jet>& xs) {
    return Jet::constant(xs[0].nvars(), xs[0].order(), 0.0);
  };
  auto w = [](const std::vector<Jet>& xs) {
    Jet d = 1.0 + xs[0] * xs[0] + xs[1] * xs[1];
    return 4.0 / (d * d);
  };
  comp[0] = w;
  comp[1] = zero;
  comp[2] = zero;
  comp[3] = w;
  auto domain = [](const Point& p) { return p[0] * p[0] + p[1] * p[1] < 16.0; };
  return MetricField(2, 0, std::move(comp), domain, "sphere");
}

MetricField flat_metric(int dim) {
  std::vector<ScalarField> comp(dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      comp[i * dim + j] = [v = (i == j) ? 1.0 : 0.0](const std::vector<Jet>& xs) {
        return Jet::constant(xs[0].nvars(), xs[0].order(), v);
      };
  return MetricField(dim, 0, std::move(comp), nullptr, "flat");
}

namespace {

double param(const std::map<std::string, std::string>& params, const std::string& key,
             double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw error(errc::bad_argument, "parameter '" + key + "' is not a number: " + it->second);
  }
}

std::string param_str(const std::map<std::string, std::string>& params, const std::string& key,
                      const std::string& fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::map<std::string, std::string>& params,
                const std::vector<std::string>& allowed) {
  for (const auto& [k, v] : params)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw error(errc::bad_argument, "unknown metric parameter '" + k + "'");
}

}  // namespace

std::vector<std::string> metric_names() {
  return {"walker.exp", "walker.log",  "walker.pow",    "walker.quad",
          "walker.sym", "walker.quartic", "warped.sphere", "warped.flat",
          "qstruct.flat_theta", "flat", "sphere"};
}

MetricField make_metric(const std::string& name,
                        const std::map<std::string, std::string>& params) {
  if (name == "walker.exp") {
    check_keys(params, {"a"});
    return walker_metric(walker_exp(param(params, "a", 1.0)));
  }
  if (name == "walker.log") {
    check_keys(params, {"sign"});
    return walker_metric(walker_log(param(params, "sign", 1.0) < 0 ? -1 : 1));
  }
  if (name == "walker.pow") {
    check_keys(params, {"eps", "sign"});
    return walker_metric(
        walker_pow(param(params, "eps", 3.0), param(params, "sign", 1.0) < 0 ? -1 : 1));
  }
  if (name == "walker.quad") {
    check_keys(params, {"alpha", "a", "x0", "k"});
    std::string alpha = param_str(params, "alpha", "exp");
    if (alpha == "exp")
      return walker_metric(walker_quad([](const Jet& x) { return exp(x); }, "exp"));
    if (alpha == "invsq") {
      double a = param(params, "a", 4.0);
      double x0 = param(params, "x0", 0.0);
      return walker_metric(walker_quad(
          [a, x0](const Jet& x) {
            Jet d = x - x0;
            return a / (d * d);
          },
          "invsq", [x0](double x) { return x > x0 + 1e-9; }));
    }
    if (alpha == "gauss") {
      int k = static_cast<int>(param(params, "k", 2.0));
      auto fam = variable_ch_construct(k);
      return walker_metric(walker_quad(fam.as_scalar(), "gauss",
                                       [](double x) { return std::abs(x) < 8.0; }));
    }
    throw error(errc::bad_argument, "unknown alpha '" + alpha + "' (exp, invsq, gauss)");
  }
  if (name == "walker.sym") {
    check_keys(params, {});
    return walker_metric(walker_sym());
  }
  if (name == "walker.quartic") {
    check_keys(params, {});
    return walker_metric(walker_quartic());
  }
  if (name == "warped.sphere") {
    check_keys(params, {"t"});
    return warped_product(sphere_metric(), param(params, "t", 1.0));
  }
  if (name == "warped.flat") {
    check_keys(params, {"t", "dim"});
    return warped_product(flat_metric(static_cast<int>(param(params, "dim", 2.0))),
                          param(params, "t", 1.0));
  }
  if (name == "qstruct.flat_theta") {
    check_keys(params, {"t", "c"});
    double c = param(params, "c", 0.5);
    QStructureSpec spec;
    spec.base = flat_metric(2);
    spec.t = param(params, "t", 1.0);
    spec.theta = {[c](const std::vector<Jet>& xs) {
                    return Jet::constant(xs[0].nvars(), xs[0].order(), c);
                  },
                  [](const std::vector<Jet>& xs) {
                    return Jet::constant(xs[0].nvars(), xs[0].order(), 0.0);
                  }};
    return q_structure_metric(spec);
  }
  if (name == "flat") {
    check_keys(params, {"dim"});
    return flat_metric(static_cast<int>(param(params, "dim", 3.0)));
  }
  if (name == "sphere") {
    check_keys(params, {});
    return sphere_metric();
  }
  std::string names;
  for (const auto& n : metric_names()) names += (names.empty() ? "" : ", ") + n;
  throw error(errc::bad_argument, "unknown metric '" + name + "'; available: " + names);
}

}  // namespace hcg
