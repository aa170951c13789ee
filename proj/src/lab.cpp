#include "hcg/lab.hpp"

#include <algorithm>
#include <cmath>

namespace hcg {

namespace {

double speed2(const MetricField& g, const Point& p, const std::vector<double>& v) {
  auto gv = value_of(g.jets_at(p, 0));
  double s = 0.0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) s += gv(i, j) * v[i] * v[j];
  return s;
}

struct OdeState {
  std::vector<double> x, v;
};

bool finite_state(const OdeState& s) {
  for (double c : s.x)
    if (!std::isfinite(c)) return false;
  for (double c : s.v)
    if (!std::isfinite(c)) return false;
  return true;
}

// Geodesic right-hand side: x' = v, v'^k = -Gamma_{ij}^k v^i v^j.
OdeState geodesic_rhs(const MetricField& g, const OdeState& s) {
  const int m = g.dim();
  auto gamma = christoffel(g, Point{s.x});
  OdeState d;
  d.x = s.v;
  d.v.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) acc -= gamma(i, j, k) * s.v[i] * s.v[j];
    d.v[k] = acc;
  }
  return d;
}

OdeState axpy(const OdeState& a, double h, const OdeState& b) {
  OdeState r = a;
  for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] += h * b.x[i];
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += h * b.v[i];
  return r;
}

bool in_domain(const MetricField& g, const OdeState& s) {
  return finite_state(s) && g.in_domain(Point{s.x});
}

// One RK4 step; false when an intermediate evaluation leaves the domain.
bool rk4_step(const MetricField& g, const OdeState& s, double h, OdeState* out) {
  if (!in_domain(g, s)) return false;
  OdeState k1 = geodesic_rhs(g, s);
  OdeState s2 = axpy(s, h / 2, k1);
  if (!in_domain(g, s2)) return false;
  OdeState k2 = geodesic_rhs(g, s2);
  OdeState s3 = axpy(s, h / 2, k2);
  if (!in_domain(g, s3)) return false;
  OdeState k3 = geodesic_rhs(g, s3);
  OdeState s4 = axpy(s, h, k3);
  if (!in_domain(g, s4)) return false;
  OdeState k4 = geodesic_rhs(g, s4);
  OdeState r = s;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    r.x[i] += h / 6 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
  for (std::size_t i = 0; i < r.v.size(); ++i)
    r.v[i] += h / 6 * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);
  if (!in_domain(g, r)) return false;
  *out = r;
  return true;
}

}  // namespace

GeodesicResult geodesic_integrate(const MetricField& g, const GeodesicState& start,
                                  double length, double h) {
  g.require_in_domain(start.point);
  OdeState s{start.point.coords, start.velocity};
  const double s0 = speed2(g, s.x.empty() ? start.point : Point{s.x}, s.v);
  const double speed = std::sqrt(std::abs(s0));
  GeodesicResult out;
  out.state = start;
  if (speed == 0.0) return out;

  double arc = start.arc_length;
  const double target = start.arc_length + length;
  double drift = 0.0;
  // The velocity cap makes steps shrink toward an inextendible end, so a hard
  // iteration bound keeps a single call finite; callers see partial progress.
  for (long it = 0; arc < target - 1e-15 && it < 200000; ++it) {
    double vmax = 0.0;
    for (double c : s.v) vmax = std::max(vmax, std::abs(c));
    // Cap the coordinate displacement per step so blowing-up charts are
    // traversed with small steps; the affine step shrinks accordingly.
    double step = std::min(h, h / std::max(1.0, vmax));
    step = std::min(step, (target - arc) / speed);
    // A step this small means either the velocity blew up (inextendible end)
    // or the remaining arc is negligible; grinding on would burn the whole
    // iteration budget for no measurable progress.
    if (step < 1e-12 * h) break;
    OdeState next;
    if (!rk4_step(g, s, step, &next)) {
      // Approach the boundary by halving before reporting the exit.
      double hh = step / 2;
      while (hh > 1e-13 * h) {
        if (rk4_step(g, s, hh, &next)) {
          s = next;
          arc += hh * speed;
        }
        hh /= 2;
      }
      out.exited_domain = true;
      break;
    }
    s = next;
    arc += step * speed;
    drift = std::max(drift, std::abs(speed2(g, Point{s.x}, s.v) - s0));
  }
  out.state.point = Point{s.x};
  out.state.velocity = s.v;
  out.state.arc_length = arc;
  out.speed_drift = drift;
  return out;
}

VsiReport vsi_sweep(const MetricField& g, const std::vector<Point>& samples, double tol) {
  VsiReport r;
  r.samples = static_cast<int>(samples.size());
  for (const auto& p : samples) r.max_abs = std::max(r.max_abs, weyl_scalars(g, p).max_abs());
  r.vsi = r.max_abs <= tol;
  return r;
}

namespace {

std::pair<double, int> invariant_at(const MetricField& g, const std::string& name,
                                    const Point& p) {
  auto set = weyl_scalars(g, p);
  for (const auto& [n, vo] : set.entries())
    if (n == name) return vo;
  std::string names;
  for (const auto& [n, vo] : set.entries()) names += (names.empty() ? "" : ", ") + n;
  throw error(errc::bad_argument, "unknown invariant '" + name + "'; catalogue: " + names);
}

}  // namespace

double mu_level(const MetricField& g, const LevelSetProbe& probe, const Point& p) {
  auto [i0, order0] = invariant_at(g, probe.invariant, probe.base);
  auto [ip, order_p] = invariant_at(g, probe.invariant, p);
  int order = probe.order > 0 ? probe.order : order0;
  (void)order_p;
  double floor = 1e-14 * std::max(1.0, std::abs(i0));
  if (std::abs(i0) < 1e-14 || std::abs(ip) < floor)
    throw error(errc::invariant_vanishes,
                "invariant '" + probe.invariant + "' vanishes; mu undefined");
  return std::pow(std::abs(i0 / ip), 1.0 / order);
}

namespace {

double g00_at(const MetricField& g, const Point& base, double x) {
  Point p = base;
  p.coords[0] = x;
  return value_of(g.jets_at(p, 0))(0, 0);
}

// Solve mu(x) = target along the coordinate-0 line by bracket expansion and
// bisection; mu is assumed monotone in x on the shipped warped metrics.
double level_crossing(const MetricField& g, const LevelSetProbe& probe, double target) {
  auto mu_at = [&](double x) {
    Point p = probe.base;
    p.coords[0] = x;
    return mu_level(g, probe, p);
  };
  double x0 = probe.base.coords[0];
  double f0 = mu_at(x0) - target;
  if (std::abs(f0) == 0.0) return x0;
  // Expand in the direction that moves mu toward the target.
  double h = 0.5;
  double lo = x0, hi = x0;
  double flo = f0, fhi = f0;
  for (int it = 0; it < 60; ++it) {
    double xa = x0 - h, xb = x0 + h;
    bool oka = false, okb = false;
    double fa = 0.0, fb = 0.0;
    Point pa = probe.base, pb = probe.base;
    pa.coords[0] = xa;
    pb.coords[0] = xb;
    if (g.in_domain(pa)) { fa = mu_at(xa) - target; oka = true; }
    if (g.in_domain(pb)) { fb = mu_at(xb) - target; okb = true; }
    if (oka && fa * f0 <= 0.0) { lo = xa; flo = fa; hi = x0; fhi = f0; break; }
    if (okb && fb * f0 <= 0.0) { lo = x0; flo = f0; hi = xb; fhi = fb; break; }
    if (!oka && !okb)
      throw error(errc::level_set_unreachable,
                  "mu level " + std::to_string(target) + " not reached in the chart");
    h *= 2.0;
    if (it == 59)
      throw error(errc::level_set_unreachable,
                  "mu level " + std::to_string(target) + " not bracketed");
  }
  for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = mu_at(mid) - target;
    if (fm * flo <= 0.0) { hi = mid; fhi = fm; }
    else { lo = mid; flo = fm; }
  }
  (void)fhi;
  return 0.5 * (lo + hi);
}

}  // namespace

double slice_distance(const MetricField& g, const LevelSetProbe& probe, double c, double d) {
  if (c <= 0.0 || d <= 0.0) throw error(errc::bad_argument, "level values must be positive");
  if (c == d) return 0.0;
  double xc = level_crossing(g, probe, c);
  double xd = level_crossing(g, probe, d);
  auto integrand = [&](double x) { return std::sqrt(std::abs(g00_at(g, probe.base, x))); };
  double a = std::min(xc, xd), b = std::max(xc, xd);
  return adaptive_simpson(integrand, a, b, 1e-10);
}

IncompletenessResult incompleteness_probe(const MetricField& g, const LevelSetProbe& probe,
                                          double budget, double mu_stop) {
  const int m = g.dim();
  bool mu_known = true;
  try {
    mu_level(g, probe, probe.base);
  } catch (const error&) {
    mu_known = false;  // flat-type metric: integrate until the budget runs out
  }
  // Unit radial start toward decreasing x (decreasing mu on the warped zoo).
  GeodesicState st;
  st.point = probe.base;
  st.velocity.assign(m, 0.0);
  st.velocity[0] = -1.0 / std::sqrt(std::abs(g00_at(g, probe.base, probe.base.coords[0])));

  IncompletenessResult out;
  const double chunk = 0.02;
  while (st.arc_length < budget) {
    double step = std::min(chunk, budget - st.arc_length);
    double before = st.arc_length;
    auto res = geodesic_integrate(g, st, step);
    st = res.state;
    out.arc_length = st.arc_length;
    if (st.arc_length - before < 1e-12) {
      // Steps collapsed to zero: the geodesic cannot be extended further.
      out.finite = true;
      return out;
    }
    if (res.exited_domain) {
      out.finite = true;
      return out;
    }
    if (mu_known) {
      double mu = 1.0;
      try {
        mu = mu_level(g, probe, st.point);
      } catch (const error&) {
        out.finite = true;  // invariant decayed below the representable floor
        return out;
      }
      if (mu < mu_stop || !std::isfinite(mu)) {
        out.finite = true;
        return out;
      }
    }
  }
  out.arc_length = budget;
  out.finite = false;
  return out;
}

AlphaClassification classify_walker_alpha(const std::function<Jet(const Jet&)>& alpha,
                                          const std::vector<double>& samples) {
  if (samples.empty()) throw error(errc::bad_argument, "no classification samples");
  std::vector<double> a0, a1, a2;
  for (double x : samples) {
    Jet j = alpha(Jet::variable(1, 2, 0, x));
    a0.push_back(j.value());
    a1.push_back(j.partial({1}));
    a2.push_back(j.partial({2}));
  }
  AlphaClassification out;
  // Branch 1: alpha^3 = c3 alpha_x^2, c3 by least squares.
  double num = 0.0, den = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a0.size(); ++i) {
    double cube = a0[i] * a0[i] * a0[i];
    double dsq = a1[i] * a1[i];
    num += cube * dsq;
    den += dsq * dsq;
    scale = std::max(scale, std::abs(cube));
  }
  out.c3 = den > 0.0 ? num / den : 0.0;
  for (std::size_t i = 0; i < a0.size(); ++i) {
    double cube = a0[i] * a0[i] * a0[i];
    out.branch1_residual =
        std::max(out.branch1_residual, std::abs(cube - out.c3 * a1[i] * a1[i]));
  }
  if (out.branch1_residual <= 1e-9 * std::max(1.0, scale)) {
    out.verdict = "inverse-square";
    return out;
  }
  // Branch 2: alpha alpha'' / alpha'^2 constant <=> classifiable family.
  std::vector<double> ratio;
  for (std::size_t i = 0; i < a0.size(); ++i) {
    if (a1[i] * a1[i] < 1e-24 * std::max(1.0, a0[i] * a0[i]))
      throw error(errc::bad_argument, "alpha' vanishes at a sample; ratio test degenerates");
    ratio.push_back(a0[i] * a2[i] / (a1[i] * a1[i]));
  }
  for (double r : ratio) out.ratio_mean += r;
  out.ratio_mean /= static_cast<double>(ratio.size());
  for (double r : ratio)
    out.ratio_spread = std::max(out.ratio_spread, std::abs(r - out.ratio_mean));
  if (out.ratio_spread <= 1e-8 * std::max(1.0, std::abs(out.ratio_mean)))
    out.verdict = std::abs(out.ratio_mean - 1.0) <= 1e-8 ? "exponential" : "power";
  else
    out.verdict = "unclassified";
  return out;
}

VariableCHFamily::VariableCHFamily(int k, double xmin, double xmax, double step)
    : k_(k), xmin_(xmin), xmax_(xmax), step_(step) {
  if (k < 1) throw error(errc::bad_argument, "construction level must be >= 1");
  int n = static_cast<int>(std::lround((xmax - xmin) / step)) + 1;
  levels_.assign(k + 1, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    double x = node(i);
    levels_[k][i] = std::exp(-x * x);
  }
  // Each lower level is the running integral from -infinity; the mass below
  // the grid is bounded by repeated Gaussian tail integrals (< 1e-28 at -8)
  // and is dropped. Corrected-trapezoid quadrature is fourth order because
  // the integrand's derivative is the next level up.
  for (int l = k - 1; l >= 0; --l) {
    auto dnode = [&](int i) {
      if (l + 2 <= k) return levels_[l + 2][i];
      double x = node(i);
      return -2.0 * x * std::exp(-x * x);
    };
    levels_[l][0] = 0.0;
    for (int i = 1; i < n; ++i) {
      double f0 = levels_[l + 1][i - 1], f1 = levels_[l + 1][i];
      double seg = step_ / 2.0 * (f0 + f1) + step_ * step_ / 12.0 * (dnode(i - 1) - dnode(i));
      levels_[l][i] = levels_[l][i - 1] + seg;
    }
  }
}

double VariableCHFamily::eval(int l, double x) const {
  if (l < 0 || l > k_) throw error(errc::bad_argument, "level out of range");
  if (x < xmin_ || x > xmax_) throw error(errc::bad_argument, "x outside the tabulated grid");
  int n = static_cast<int>(levels_[l].size());
  int i = std::min(n - 2, std::max(0, static_cast<int>((x - xmin_) / step_)));
  double t = (x - node(i)) / step_;
  double f0 = levels_[l][i], f1 = levels_[l][i + 1];
  double d0, d1;
  if (l + 1 <= k_) {
    d0 = levels_[l + 1][i];
    d1 = levels_[l + 1][i + 1];
  } else {
    double x0 = node(i), x1 = node(i + 1);
    d0 = -2.0 * x0 * std::exp(-x0 * x0);
    d1 = -2.0 * x1 * std::exp(-x1 * x1);
  }
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * step_ * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * step_ * d1;
}

double VariableCHFamily::deriv(int j, double x) const {
  if (j <= k_) return eval(j, x);
  // alpha^{(k)} = e^{-x^2}; higher derivatives are P_n(x) e^{-x^2} with
  // P_0 = 1 and P_{n+1} = P_n' - 2x P_n.
  int n = j - k_;
  std::vector<double> p{1.0};
  for (int s = 0; s < n; ++s) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t c = 1; c < p.size(); ++c) q[c - 1] += c * p[c];
    for (std::size_t c = 0; c < p.size(); ++c) q[c + 1] -= 2.0 * p[c];
    p = q;
  }
  double poly = 0.0;
  for (std::size_t c = p.size(); c-- > 0;) poly = poly * x + p[c];
  return poly * std::exp(-x * x);
}

std::function<Jet(const Jet&)> VariableCHFamily::as_scalar() const {
  VariableCHFamily copy = *this;
  return [copy](const Jet& x) {
    std::vector<double> derivs(x.order() + 1);
    for (int j = 0; j <= x.order(); ++j) derivs[j] = copy.deriv(j, x.value());
    return x.compose(derivs);
  };
}

VariableCHFamily variable_ch_construct(int k, double step) {
  return VariableCHFamily(k, -8.0, 8.0, step);
}

CharacterResult character_eval(const CharacterSpec& spec, const std::vector<double>& diag) {
  if (spec.a.size() != diag.size())
    throw error(errc::bad_argument, "character exponent count mismatch");
  CharacterResult r;
  r.lambda = 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] <= 0.0) throw error(errc::bad_argument, "nonpositive diagonal entry");
    r.lambda *= std::pow(diag[i], spec.a[i]);
    sum += spec.a[i];
  }
  r.split = sum != 0.0;
  return r;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0) throw error(errc::quadrature_failure, "adaptive Simpson depth exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace hcg
