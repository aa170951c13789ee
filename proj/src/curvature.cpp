#include "hcg/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace hcg {

JetTensor invert_jet_matrix(const JetTensor& g) {
  const int m = g.dim();
  // Work matrix [A | I], eliminate with partial pivoting on order-0 parts.
  std::vector<std::vector<Jet>> a(m), inv(m);
  double scale = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) scale = std::max(scale, std::abs(g(i, j).value()));
  }
  if (scale == 0.0) throw error(errc::singular_metric, "metric vanishes at point");
  Jet zero = g(0, 0) * 0.0;
  for (int i = 0; i < m; ++i) {
    a[i].assign(m, zero);
    inv[i].assign(m, zero);
    for (int j = 0; j < m; ++j) a[i][j] = g(i, j);
    inv[i][i] = zero + 1.0;
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[r][col].value()) > std::abs(a[piv][col].value())) piv = r;
    if (std::abs(a[piv][col].value()) < 1e-12 * scale)
      throw error(errc::singular_metric, "singular metric matrix at point");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Jet d = a[col][col].reciprocal();
    for (int j = 0; j < m; ++j) {
      a[col][j] = a[col][j] * d;
      inv[col][j] = inv[col][j] * d;
    }
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      Jet f = a[r][col];
      if (f.value() == 0.0) {
        // still may carry higher-order terms
      }
      for (int j = 0; j < m; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  JetTensor out(m, {Slot::Contra, Slot::Contra}, zero);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = inv[i][j];
  return out;
}

JetTensor covariant_derivative(const JetTensor& field, const JetTensor& gamma) {
  const int m = field.dim();
  const int r = field.rank();
  auto var = field.variance();
  var.push_back(Slot::Co);
  int out_order = field[0].order() - 1;
  Jet zero(field[0].nvars(), out_order, 0.0);
  Tensor<Jet> out(m, var, zero);

  // Precompute entry derivatives lazily per flat index of the source.
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto idx = out.unflatten(f);
    int s = idx[r];
    std::vector<int> src(idx.begin(), idx.begin() + r);
    Jet acc = field.at(src).derivative(s);
    for (int a = 0; a < r; ++a) {
      int ia = src[a];
      auto tmp = src;
      if (field.variance()[a] == Slot::Co) {
        for (int mm = 0; mm < m; ++mm) {
          tmp[a] = mm;
          acc -= gamma(s, ia, mm).truncated(out_order) * field.at(tmp);
        }
      } else {
        for (int mm = 0; mm < m; ++mm) {
          tmp[a] = mm;
          acc += gamma(s, mm, ia).truncated(out_order) * field.at(tmp);
        }
      }
    }
    out[f] = acc;
  }
  return out;
}

CurvatureChain::CurvatureChain(const MetricField& g, const Point& p, int lmax)
    : dim_(g.dim()), lmax_(lmax) {
  const int order = lmax + 2;
  if (order > kMaxJetOrder)
    throw error(errc::jet_order_exceeded, "curvature derivative order above engine maximum");
  g_ = g.jets_at(p, order);
  ginv_ = invert_jet_matrix(g_);
  const int m = dim_;
  Jet zero1(m, order - 1, 0.0);

  // Gamma_{ij}^k = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  gamma_ = JetTensor(m, {Slot::Co, Slot::Co, Slot::Contra}, zero1);
  std::vector<std::vector<std::vector<Jet>>> dg(
      m, std::vector<std::vector<Jet>>(m, std::vector<Jet>(m, zero1)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) dg[i][j][l] = g_(i, j).derivative(l);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        Jet acc = zero1;
        for (int l = 0; l < m; ++l)
          acc += ginv_(k, l).truncated(order - 1) * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l]);
        acc *= 0.5;
        gamma_(i, j, k) = acc;
        gamma_(j, i, k) = acc;
      }
    }
  }

  // R(d_i, d_j)d_k = { d_i Gamma_jk^l - d_j Gamma_ik^l
  //                    + Gamma_im^l Gamma_jk^m - Gamma_jm^l Gamma_ik^m } d_l
  Jet zero2(m, order - 2, 0.0);
  op_ = JetTensor(m, {Slot::Co, Slot::Co, Slot::Co, Slot::Contra}, zero2);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
          Jet acc = gamma_(j, k, l).derivative(i) - gamma_(i, k, l).derivative(j);
          for (int mm = 0; mm < m; ++mm)
            acc += gamma_(i, mm, l).truncated(order - 2) * gamma_(j, k, mm) -
                   gamma_(j, mm, l).truncated(order - 2) * gamma_(i, k, mm);
          op_(i, j, k, l) = acc;
        }
      }
    }
  }

  nabla_r_op_.push_back(op_);
  nabla_r_.push_back(flip_slot(op_, 3, g_, zero2));
  for (int l = 1; l <= lmax_; ++l) {
    nabla_r_.push_back(covariant_derivative(nabla_r_[l - 1], gamma_));
    nabla_r_op_.push_back(covariant_derivative(nabla_r_op_[l - 1], gamma_));
  }
}

const JetTensor& CurvatureChain::nabla_r(int l) const {
  if (l < 0 || l > lmax_)
    throw error(errc::jet_order_exceeded, "covariant derivative level not computed");
  return nabla_r_[l];
}

const JetTensor& CurvatureChain::nabla_r_op(int l) const {
  if (l < 0 || l > lmax_)
    throw error(errc::jet_order_exceeded, "covariant derivative level not computed");
  return nabla_r_op_[l];
}

TensorAtPoint christoffel(const MetricField& g, const Point& p) {
  // Order-1 jets suffice here; building a full chain per call would make
  // pointwise consumers (the geodesic integrator above all) far too slow.
  const int m = g.dim();
  auto gj = g.jets_at(p, 1);
  JetTensor g0(m, {Slot::Co, Slot::Co}, Jet(m, 0, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g0(i, j) = gj(i, j).truncated(0);
  auto ginv = invert_jet_matrix(g0);
  std::vector<double> dg(m * m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      for (int l = 0; l < m; ++l) {
        std::vector<int> alpha(m, 0);
        alpha[l] = 1;
        dg[(i * m + j) * m + l] = gj(i, j).partial(alpha);
      }
    }
  TensorAtPoint out(m, {Slot::Co, Slot::Co, Slot::Contra}, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int l = 0; l < m; ++l)
          acc += ginv(k, l).value() * (dg[(j * m + l) * m + i] + dg[(i * m + l) * m + j] -
                                       dg[(i * m + j) * m + l]);
        out(i, j, k) = 0.5 * acc;
        out(j, i, k) = 0.5 * acc;
      }
  return out;
}

std::pair<TensorAtPoint, TensorAtPoint> curvature(const MetricField& g, const Point& p) {
  CurvatureChain chain(g, p, 0);
  return {value_of(chain.nabla_r(0)), value_of(chain.curvature_op())};
}

TensorAtPoint ricci(const TensorAtPoint& r04, const TensorAtPoint& ginv) {
  const int m = r04.dim();
  TensorAtPoint rho(m, co_slots(2), 0.0);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) acc += ginv(i, l) * r04(i, j, k, l);
      rho(j, k) = acc;
    }
  return rho;
}

double scalar_curvature(const TensorAtPoint& r04, const TensorAtPoint& ginv) {
  const int m = r04.dim();
  TensorAtPoint rho = ricci(r04, ginv);
  double tau = 0.0;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) tau += ginv(j, k) * rho(j, k);
  return tau;
}

WeylScalarSet weyl_scalars(const MetricField& g, const Point& p) {
  CurvatureChain chain(g, p, 2);
  const int m = g.dim();
  TensorAtPoint gi = value_of(chain.inverse_metric());
  TensorAtPoint r = value_of(chain.nabla_r(0));
  TensorAtPoint dr = value_of(chain.nabla_r(1));
  TensorAtPoint ddr = value_of(chain.nabla_r(2));

  WeylScalarSet w;
  TensorAtPoint rho = ricci(r, gi);
  w.tau = 0.0;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) w.tau += gi(j, k) * rho(j, k);
  w.tau_sq = w.tau * w.tau;

  // |R|^2 = g^{ia} g^{jb} g^{kc} g^{ld} R_{ijkl} R_{abcd}
  // |rho|^2 via the paper's pairing g^{ia} g^{jb} g^{kc} g^{ld} R_{ijbl} R_{akcd}
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
              for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                  double gg = gi(i, a) * gi(j, b) * gi(k, c) * gi(l, d);
                  w.norm_r2 += gg * r(i, j, k, l) * r(a, b, c, d);
                  w.norm_ricci2 += gg * r(i, j, b, l) * r(a, k, c, d);
                }

  // Delta tau = -g^{ia} g^{jb} g^{kc} R_{ijba;kc}
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int k = 0; k < m; ++k)
            for (int c = 0; c < m; ++c)
              w.laplacian_tau -= gi(i, a) * gi(j, b) * gi(k, c) * ddr(i, j, b, a, k, c);

  // |nabla R|^2: aligned full contraction of nabla R with itself
  for (std::size_t f = 0; f < dr.size(); ++f) {
    auto idx = dr.unflatten(f);
    for (std::size_t h = 0; h < dr.size(); ++h) {
      auto jdx = dr.unflatten(h);
      double gg = 1.0;
      for (int s = 0; s < 5; ++s) gg *= gi(idx[s], jdx[s]);
      if (gg != 0.0) w.norm_grad_r2 += gg * dr[f] * dr[h];
    }
  }

  // |nabla tau|^2: tau_{;s} = g^{il} g^{jk} R_{ijkl;s}
  std::vector<double> dtau(m, 0.0);
  for (int s = 0; s < m; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) dtau[s] += gi(i, l) * gi(j, k) * dr(i, j, k, l, s);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) w.norm_grad_tau2 += gi(a, b) * dtau[a] * dtau[b];

  // tr(rho^3) with one index raised
  TensorAtPoint rho_up(m, {Slot::Contra, Slot::Co}, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double acc = 0.0;
      for (int c = 0; c < m; ++c) acc += gi(a, c) * rho(c, b);
      rho_up(a, b) = acc;
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) w.tr_ricci3 += rho_up(a, b) * rho_up(b, c) * rho_up(c, a);

  return w;
}

std::vector<std::pair<std::string, std::pair<double, int>>> WeylScalarSet::entries() const {
  return {
      {"tau", {tau, 2}},
      {"norm_R2", {norm_r2, 4}},
      {"norm_ricci2", {norm_ricci2, 4}},
      {"tau_sq", {tau_sq, 4}},
      {"laplacian_tau", {laplacian_tau, 4}},
      {"norm_grad_R2", {norm_grad_r2, 6}},
      {"norm_grad_tau2", {norm_grad_tau2, 6}},
      {"tr_ricci3", {tr_ricci3, 6}},
  };
}

double WeylScalarSet::max_abs() const {
  double m = 0.0;
  for (const auto& [name, vo] : entries()) m = std::max(m, std::abs(vo.first));
  return m;
}

TensorAtPoint pullback_metric(const MetricField& g, const SmoothMap& t, const Point& p) {
  const int m = g.dim();
  Point q = t.apply(p);
  g.require_in_domain(q);
  TensorAtPoint jac = t.jacobian(p);
  TensorAtPoint gq = value_of(g.jets_at(q, 0));
  TensorAtPoint out(m, co_slots(2), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) acc += gq(a, b) * jac(a, i) * jac(b, j);
      out(i, j) = acc;
    }
  return out;
}

double homothety_pullback_residual(const MetricField& g, const SmoothMap& t, double lambda,
                                   const std::vector<Point>& samples) {
  double worst = 0.0;
  for (const Point& p : samples) {
    g.require_in_domain(p);
    TensorAtPoint tg = pullback_metric(g, t, p);
    TensorAtPoint gp = value_of(g.jets_at(p, 0));
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j)
        worst = std::max(worst, std::abs(tg(i, j) - lambda * lambda * gp(i, j)));
  }
  return worst;
}

}  // namespace hcg
