#include "hcg/model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hcg {

namespace {

// Contract every (covariant) slot of T with the columns of B:
// out_{i1..ir} = sum T_{a1..ar} B(a1,i1) ... B(ar,ir).
TensorAtPoint transform_covariant(const TensorAtPoint& t, const Eigen::MatrixXd& b) {
  TensorAtPoint cur = t;
  const int m = t.dim();
  for (int slot = 0; slot < t.rank(); ++slot) {
    TensorAtPoint next(m, t.variance(), 0.0);
    for (std::size_t f = 0; f < next.size(); ++f) {
      auto idx = next.unflatten(f);
      double acc = 0.0;
      auto src = idx;
      for (int a = 0; a < m; ++a) {
        src[slot] = a;
        acc += cur.at(src) * b(a, idx[slot]);
      }
      next[f] = acc;
    }
    cur = next;
  }
  return cur;
}

double inner(const TensorAtPoint& a, const TensorAtPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Eigen::MatrixXd metric_matrix(const MetricField& g, const Point& p) {
  auto gv = value_of(g.jets_at(p, 0));
  Eigen::MatrixXd m(g.dim(), g.dim());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) m(i, j) = gv(i, j);
  return m;
}

// Pivoted modified Gram-Schmidt for an indefinite inner product. When every
// remaining vector is null the pair with the largest cross product is summed,
// which restores a usable pivot on any nondegenerate form.
Eigen::MatrixXd canonical_frame(const Eigen::MatrixXd& gmat, const Eigen::MatrixXd& seed) {
  const int m = static_cast<int>(gmat.rows());
  const double scale = std::max(gmat.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::VectorXd> w;
  for (int i = 0; i < m; ++i) w.push_back(seed.col(i));

  std::vector<std::pair<int, Eigen::VectorXd>> picked;  // (sign, unit vector)
  auto q = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return u.dot(gmat * v);
  };
  while (!w.empty()) {
    int piv = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      double a = std::abs(q(w[i], w[i]));
      if (a > best) { best = a; piv = static_cast<int>(i); }
    }
    if (best < 1e-10 * scale) {
      int bi = -1, bj = -1;
      double cross = -1.0;
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) {
          double a = std::abs(q(w[i], w[j]));
          if (a > cross) { cross = a; bi = static_cast<int>(i); bj = static_cast<int>(j); }
        }
      if (cross < 1e-10 * scale)
        throw error(errc::frame_breakdown,
                    "frame construction hit a null pivot; supply a seed frame");
      w[bi] += w[bj];
      piv = bi;
    }
    double qv = q(w[piv], w[piv]);
    int eps = qv < 0.0 ? -1 : 1;
    Eigen::VectorXd e = w[piv] / std::sqrt(std::abs(qv));
    w.erase(w.begin() + piv);
    for (auto& u : w) u -= (eps * q(u, e)) * e;
    picked.emplace_back(eps, e);
  }
  Eigen::MatrixXd frame(m, m);
  int col = 0;
  for (const auto& [eps, e] : picked)
    if (eps < 0) frame.col(col++) = e;
  for (const auto& [eps, e] : picked)
    if (eps > 0) frame.col(col++) = e;
  return frame;
}

double radical_inverse(int base, int n) {
  double r = 0.0, f = 1.0 / base;
  while (n > 0) {
    r += f * (n % base);
    n /= base;
    f /= base;
  }
  return r;
}

}  // namespace

double CurvatureModel::norm() const {
  double s = 0.0;
  for (const auto& c : components)
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * c[i];
  return std::sqrt(s);
}

bool CurvatureModel::is_zero(double tol) const {
  for (const auto& c : components)
    if (max_abs(c) > tol) return false;
  return true;
}

bool CurvatureModel::level_zero(int l, double tol) const {
  return max_abs(components[l]) <= tol;
}

CurvatureModel model_in_frame(const MetricField& g, const Point& p, int k,
                              const Eigen::MatrixXd& frame) {
  if (k < 0 || k > 3) throw error(errc::bad_argument, "model level must be in 0..3");
  CurvatureChain chain(g, p, k);
  const int m = g.dim();
  Eigen::MatrixXd b = frame;
  CurvatureModel model;
  model.dim = m;
  model.level = k;
  model.gram = TensorAtPoint(m, co_slots(2), 0.0);
  Eigen::MatrixXd gm = metric_matrix(g, p);
  Eigen::MatrixXd gram = b.transpose() * gm * b;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) model.gram(i, j) = gram(i, j);
  for (int l = 0; l <= k; ++l)
    model.components.push_back(transform_covariant(value_of(chain.nabla_r(l)), b));
  return model;
}

CurvatureModel build_model(const MetricField& g, const Point& p, int k) {
  return build_model(g, p, k, Eigen::MatrixXd::Identity(g.dim(), g.dim()));
}

CurvatureModel build_model(const MetricField& g, const Point& p, int k,
                           const Eigen::MatrixXd& seed_frame) {
  Eigen::MatrixXd frame = canonical_frame(metric_matrix(g, p), seed_frame);
  auto model = model_in_frame(g, p, k, frame);
  // The construction promises an exactly diagonal gram.
  for (int i = 0; i < model.dim; ++i)
    for (int j = 0; j < model.dim; ++j)
      model.gram(i, j) = (i == j) ? (model.gram(i, j) < 0 ? -1.0 : 1.0) : 0.0;
  return model;
}

namespace {

struct SearchLevel {
  const TensorAtPoint* c1;
  const TensorAtPoint* c2;
  int exponent;  // lambda^{-exponent} relates pulled c2 to c1
  bool active;   // both sides nonzero
};

struct Searcher {
  int m;
  Eigen::MatrixXd eta;  // diagonal gram
  std::vector<SearchLevel> levels;
  bool fixed_lambda;    // isometry mode
  int pivot = -1;       // lowest active level, lambda elimination happens here
  double c1_norm2_pivot = 0.0;

  int dof() const { return m * (m - 1) / 2; }

  Eigen::MatrixXd skew_from(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
    int t = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        s(i, j) = theta[t];
        s(j, i) = -theta[t];
        ++t;
      }
    return s;
  }

  Eigen::MatrixXd phi_at(const Eigen::MatrixXd& refl, const Eigen::VectorXd& theta) const {
    return refl * (eta * skew_from(theta)).exp();
  }

  // Residual of phi with lambda eliminated; fills lambda and per-level norms.
  Eigen::VectorXd residual(const Eigen::MatrixXd& phi, double* lambda_out,
                           std::vector<double>* per_level) const {
    std::vector<TensorAtPoint> pulled;
    pulled.reserve(levels.size());
    for (const auto& lv : levels) pulled.push_back(transform_covariant(*lv.c2, phi));

    double lambda = 1.0;
    if (!fixed_lambda && pivot >= 0) {
      double mu = inner(pulled[pivot], *levels[pivot].c1) / c1_norm2_pivot;
      int n = levels[pivot].exponent;
      double lam = std::pow(std::abs(mu), -1.0 / n);
      // Odd exponent fixes the sign; even exponent with mu < 0 has no real
      // scale and the magnitude is kept as a best effort.
      if (n % 2 == 1 && mu < 0.0) lam = -lam;
      // Even pivot exponent leaves the sign of lambda free; pick the sign with
      // the smaller residual across the remaining levels.
      if (n % 2 == 0) {
        double sp = 0.0, sn = 0.0;
        for (std::size_t l = 0; l < levels.size(); ++l) {
          if (!levels[l].active) continue;
          double mp = std::pow(lam, static_cast<double>(levels[l].exponent));
          double mn = std::pow(-lam, static_cast<double>(levels[l].exponent));
          for (std::size_t i = 0; i < pulled[l].size(); ++i) {
            double dp = mp * pulled[l][i] - (*levels[l].c1)[i];
            double dn = mn * pulled[l][i] - (*levels[l].c1)[i];
            sp += dp * dp;
            sn += dn * dn;
          }
        }
        if (sn < sp) lam = -lam;
      }
      lambda = lam;
    }
    if (lambda_out) *lambda_out = lambda;

    std::size_t total = 0;
    for (const auto& p : pulled) total += p.size();
    Eigen::VectorXd r(total);
    if (per_level) per_level->assign(levels.size(), 0.0);
    std::size_t at = 0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      // Residuals live in the scale of c1: lambda^{l+2} (phi* c2) - c1. The
      // collapsed form (phi* c2 - lambda^{-l-2} c1) goes to zero along the
      // noncompact boost directions of O(p, q) and would certify fake matches.
      double mu = fixed_lambda ? 1.0
                               : std::pow(lambda, static_cast<double>(levels[l].exponent));
      double s2 = 0.0;
      for (std::size_t i = 0; i < pulled[l].size(); ++i) {
        double d = mu * pulled[l][i] - (*levels[l].c1)[i];
        r[at++] = d;
        s2 += d * d;
      }
      if (per_level) (*per_level)[l] = std::sqrt(s2);
    }
    return r;
  }

  double objective(const Eigen::MatrixXd& refl, const Eigen::VectorXd& theta) const {
    return residual(phi_at(refl, theta), nullptr, nullptr).norm();
  }

  // Damped Gauss-Newton with numeric Jacobian from one reflection + start.
  void refine(const Eigen::MatrixXd& refl, Eigen::VectorXd theta, int max_iters,
              double stop_at, Eigen::VectorXd* theta_out, double* best) const {
    const int d = dof();
    double f = objective(refl, theta);
    int stall = 0;
    for (int it = 0; it < max_iters && f > stop_at && stall < 3; ++it) {
      Eigen::VectorXd r0 = residual(phi_at(refl, theta), nullptr, nullptr);
      Eigen::MatrixXd jac(r0.size(), d);
      const double h = 1e-6;
      for (int c = 0; c < d; ++c) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp[c] += h;
        tm[c] -= h;
        jac.col(c) = (residual(phi_at(refl, tp), nullptr, nullptr) -
                      residual(phi_at(refl, tm), nullptr, nullptr)) /
                     (2.0 * h);
      }
      Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r0);
      double fnew = f;
      Eigen::VectorXd tnew = theta;
      double alpha = 1.0;
      for (int bt = 0; bt < 8; ++bt) {
        Eigen::VectorXd cand = theta + alpha * step;
        double fc = objective(refl, cand);
        if (fc < fnew) { fnew = fc; tnew = cand; break; }
        alpha *= 0.5;
      }
      if (fnew >= f * (1.0 - 1e-14)) ++stall; else stall = 0;
      theta = tnew;
      f = fnew;
    }
    *theta_out = theta;
    *best = f;
  }
};

// Sign-flip matrices that reach every connected component of O(p, q).
std::vector<Eigen::MatrixXd> component_reflections(const Eigen::MatrixXd& eta) {
  const int m = static_cast<int>(eta.rows());
  int p = 0;
  for (int i = 0; i < m; ++i)
    if (eta(i, i) < 0) ++p;
  std::vector<Eigen::MatrixXd> out;
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
  out.push_back(id);
  if (p > 0) {
    Eigen::MatrixXd r = id;
    r(0, 0) = -1.0;
    out.push_back(r);
  }
  if (p < m) {
    Eigen::MatrixXd r = id;
    r(m - 1, m - 1) = -1.0;
    out.push_back(r);
  }
  if (p > 0 && p < m) {
    Eigen::MatrixXd r = id;
    r(0, 0) = -1.0;
    r(m - 1, m - 1) = -1.0;
    out.push_back(r);
  }
  return out;
}

HomothetyMatch run_match(const CurvatureModel& m1, const CurvatureModel& m2,
                         std::vector<int> level_ids, bool fixed_lambda,
                         const MatchOptions& opt, const std::string& mode) {
  HomothetyMatch out;
  out.mode = mode;
  out.frame_map = Eigen::MatrixXd::Identity(m1.dim, m1.dim);
  out.residuals.assign(level_ids.size(), 0.0);
  if (m1.dim != m2.dim || m1.level != m2.level) {
    out.note = "model shape mismatch";
    return out;
  }
  if (max_abs_diff(m1.gram, m2.gram) > 1e-9) {
    out.note = "gram mismatch";
    return out;
  }

  Searcher s;
  s.m = m1.dim;
  s.eta = Eigen::MatrixXd::Zero(s.m, s.m);
  for (int i = 0; i < s.m; ++i) s.eta(i, i) = m1.gram(i, i);
  s.fixed_lambda = fixed_lambda;

  bool structural_fail = false;
  for (int l : level_ids) {
    bool z1 = m1.level_zero(l, opt.zero_tol);
    bool z2 = m2.level_zero(l, opt.zero_tol);
    SearchLevel lv{&m1.components[l], &m2.components[l], l + 2, !(z1 && z2)};
    if (z1 != z2) structural_fail = true;
    s.levels.push_back(lv);
    if (!fixed_lambda && s.pivot < 0 && !z1 && !z2) {
      s.pivot = static_cast<int>(s.levels.size()) - 1;
      s.c1_norm2_pivot = inner(m1.components[l], m1.components[l]);
    }
  }
  if (structural_fail && !fixed_lambda) {
    out.verdict = MatchVerdict::no_match;
    out.note = "no scale exists: zero level paired with nonzero level";
    double r2 = 0.0;
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
      out.residuals[l] = frob_norm(*s.levels[l].c1) + frob_norm(*s.levels[l].c2);
      r2 += out.residuals[l] * out.residuals[l];
    }
    out.residual = std::sqrt(r2);
    return out;
  }

  bool all_zero = true;
  for (const auto& lv : s.levels)
    if (lv.active) all_zero = false;
  if (all_zero) {
    // Zero models match through the identity.
    out.lambda = 1.0;
    out.converged = true;
    out.verdict = MatchVerdict::matched;
    return out;
  }

  double scale1 = 0.0;
  for (int l : level_ids) scale1 = std::hypot(scale1, frob_norm(m1.components[l]));
  double scale2 = 0.0;
  for (int l : level_ids) scale2 = std::hypot(scale2, frob_norm(m2.components[l]));
  const double succ = opt.success_tol * std::max(1.0, scale1);
  const double fail = opt.failure_tol * std::max(scale1, scale2);

  auto refls = component_reflections(s.eta);
  const int d = s.dof();
  static const int primes[] = {2, 3, 5, 7, 11, 13};

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd best_refl = refls[0];
  for (int start = 0; start < opt.starts && best > succ; ++start) {
    const Eigen::MatrixXd& refl = refls[start % refls.size()];
    Eigen::VectorXd theta(d);
    if (start < static_cast<int>(refls.size())) {
      theta.setZero();
    } else {
      double amp = 0.5 + 3.0 * (static_cast<double>(start) / std::max(1, opt.starts - 1));
      for (int c = 0; c < d; ++c)
        theta[c] = amp * (2.0 * radical_inverse(primes[c], start + 1) - 1.0);
    }
    Eigen::VectorXd theta_ref;
    double f;
    s.refine(refl, theta, opt.max_iters, succ * 0.5, &theta_ref, &f);
    if (f < best) {
      best = f;
      best_theta = theta_ref;
      best_refl = refl;
    }
  }

  // Polish a successful match well below the accept threshold; the scale and
  // the frame map are consumed downstream at tighter tolerances than succ.
  if (best <= succ)
    s.refine(best_refl, best_theta, opt.max_iters, succ * 1e-4, &best_theta, &best);

  Eigen::MatrixXd phi = s.phi_at(best_refl, best_theta);
  out.frame_map = phi;
  Eigen::VectorXd r = s.residual(phi, &out.lambda, &out.residuals);
  out.residual = r.norm();
  out.converged = out.residual <= succ;
  if (fixed_lambda) out.lambda = 1.0;
  if (out.converged)
    out.verdict = MatchVerdict::matched;
  else if (out.residual > fail)
    out.verdict = MatchVerdict::no_match;
  else
    out.verdict = MatchVerdict::inconclusive;
  return out;
}

}  // namespace

HomothetyMatch isometry_match(const CurvatureModel& m1, const CurvatureModel& m2,
                              const MatchOptions& opt) {
  std::vector<int> ids(m1.level + 1);
  for (int l = 0; l <= m1.level; ++l) ids[l] = l;
  return run_match(m1, m2, ids, true, opt, "isometry");
}

HomothetyMatch homothety_match(const CurvatureModel& m1, const CurvatureModel& m2,
                               const MatchOptions& opt) {
  std::vector<int> ids(m1.level + 1);
  for (int l = 0; l <= m1.level; ++l) ids[l] = l;
  return run_match(m1, m2, ids, false, opt, "homothety");
}

std::vector<HomothetyMatch> variable_match(const CurvatureModel& m1, const CurvatureModel& m2,
                                           const MatchOptions& opt) {
  std::vector<HomothetyMatch> out;
  for (int l = 0; l <= std::min(m1.level, m2.level); ++l) {
    auto m = run_match(m1, m2, {l}, false, opt, "variable");
    out.push_back(std::move(m));
  }
  return out;
}

double lemma12_equivalence_check(const HomothetyMatch& match, const CurvatureModel& m1,
                                 const CurvatureModel& m2) {
  const int m = m1.dim;
  Eigen::MatrixXd cap_phi = match.lambda * match.frame_map;
  Eigen::MatrixXd cap_phi_inv = cap_phi.inverse();
  TensorAtPoint gram_inv(m, {Slot::Contra, Slot::Contra}, 0.0);
  // Diagonal +-1 gram is its own inverse.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram_inv(i, j) = m1.gram(i, j);

  double worst = 0.0;
  for (int l = 0; l <= m1.level; ++l) {
    auto op1 = flip_slot(m1.components[l], 3, gram_inv, 0.0);
    auto op2 = flip_slot(m2.components[l], 3, gram_inv, 0.0);
    // Pull op2 back through cap_phi: covariant slots with cap_phi, the single
    // contravariant slot (slot 3) with cap_phi^{-1}.
    TensorAtPoint pulled(m, op2.variance(), 0.0);
    for (std::size_t f = 0; f < pulled.size(); ++f) {
      auto idx = pulled.unflatten(f);
      double acc = 0.0;
      auto src = idx;
      std::function<void(int, double)> rec = [&](int slot, double w) {
        if (slot == op2.rank()) {
          acc += w * op2.at(src);
          return;
        }
        for (int a = 0; a < m; ++a) {
          src[slot] = a;
          double fac = (op2.variance()[slot] == Slot::Co) ? cap_phi(a, idx[slot])
                                                          : cap_phi_inv(idx[slot], a);
          if (fac != 0.0) rec(slot + 1, w * fac);
        }
        src[slot] = idx[slot];
      };
      rec(0, 1.0);
      pulled[f] = acc;
    }
    worst = std::max(worst, max_abs_diff(pulled, op1));
  }
  return worst;
}

SingerProfile singer_profile(const MetricField& g, const Point& p, int s_max) {
  const int m = g.dim();
  CurvatureChain chain(g, p, s_max);
  Eigen::MatrixXd gm = metric_matrix(g, p);
  Eigen::MatrixXd ginv = gm.inverse();

  // Basis of the homothety Lie algebra at P: g^{-1} K for K skew, plus Id.
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
      k(i, j) = 1.0;
      k(j, i) = -1.0;
      basis.push_back(ginv * k);
    }
  basis.push_back(Eigen::MatrixXd::Identity(m, m));
  const int nb = static_cast<int>(basis.size());

  // Derivation action of a on the (1, s+3) tensor: plus a on the output slot,
  // minus composition in every input slot.
  auto action = [&](const Eigen::MatrixXd& a, const TensorAtPoint& t) {
    TensorAtPoint r(m, t.variance(), 0.0);
    const auto& var = t.variance();
    for (std::size_t f = 0; f < r.size(); ++f) {
      auto idx = r.unflatten(f);
      double acc = 0.0;
      auto src = idx;
      for (int slot = 0; slot < t.rank(); ++slot) {
        for (int a_i = 0; a_i < m; ++a_i) {
          src[slot] = a_i;
          if (var[slot] == Slot::Contra)
            acc += a(idx[slot], a_i) * t.at(src);
          else
            acc -= a(a_i, idx[slot]) * t.at(src);
        }
        src[slot] = idx[slot];
      }
      r[f] = acc;
    }
    return r;
  };

  SingerProfile out;
  std::vector<TensorAtPoint> tensors;
  std::size_t rows = 0;
  for (int sl = 0; sl <= s_max; ++sl) {
    tensors.push_back(value_of(chain.nabla_r_op(sl)));
    rows += tensors.back().size();
    Eigen::MatrixXd mat(rows, nb);
    for (int b = 0; b < nb; ++b) {
      std::size_t at = 0;
      for (const auto& t : tensors) {
        auto act = action(basis[b], t);
        for (std::size_t i = 0; i < act.size(); ++i) mat(at++, b) = act[i];
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    auto sv = svd.singularValues();
    int rank = 0;
    double top = sv.size() ? sv[0] : 0.0;
    if (top > 1e-12)
      for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-9 * top) ++rank;
    out.dims.push_back(nb - rank);
  }
  out.singer_number = s_max;
  for (int sidx = 0; sidx + 1 <= s_max; ++sidx) {
    if (out.dims[sidx] == out.dims[sidx + 1]) {
      out.singer_number = sidx;
      break;
    }
  }
  if (s_max == 0) out.singer_number = 0;
  return out;
}

}  // namespace hcg
