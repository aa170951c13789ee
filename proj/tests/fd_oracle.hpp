#ifndef HCG_TESTS_FD_ORACLE_HPP
#define HCG_TESTS_FD_ORACLE_HPP

#include <vector>

#include "hcg/metric.hpp"
#include "hcg/tensor.hpp"

#include <Eigen/Dense>

// Finite-difference curvature oracle, fully independent of the jet engine:
// metric values only, fourth-order central stencils, nested for Gamma
// derivatives. Accuracy on unit-scale metrics is around 1e-8.
namespace hcg::testing {

inline Eigen::MatrixXd fd_metric(const MetricField& g, const Point& p) {
  auto gv = value_of(g.jets_at(p, 0));
  Eigen::MatrixXd m(g.dim(), g.dim());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) m(i, j) = gv(i, j);
  return m;
}

template <typename F>
double fd_partial(F&& f, const Point& p, int k, double h = 1e-4) {
  auto at = [&](double off) {
    Point q = p;
    q.coords[k] += off;
    return f(q);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

// Gamma_{ij}^k from first metric derivatives.
inline std::vector<double> fd_christoffel(const MetricField& g, const Point& p) {
  const int m = g.dim();
  Eigen::MatrixXd gv = fd_metric(g, p);
  Eigen::MatrixXd ginv = gv.inverse();
  std::vector<double> dg(m * m * m);  // dg[k*m*m + i*m + j] = d_k g_ij
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        dg[k * m * m + i * m + j] =
            fd_partial([&](const Point& q) { return fd_metric(g, q)(i, j); }, p, k);
  std::vector<double> gamma(m * m * m, 0.0);  // gamma[i*m*m + j*m + k] = Gamma_{ij}^k
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int l = 0; l < m; ++l)
          acc += ginv(k, l) * (dg[i * m * m + j * m + l] + dg[j * m * m + i * m + l] -
                               dg[l * m * m + i * m + j]);
        gamma[i * m * m + j * m + k] = 0.5 * acc;
      }
  return gamma;
}

// R_{ijkl} from Gamma and nested finite differences of Gamma.
inline TensorAtPoint fd_curvature(const MetricField& g, const Point& p) {
  const int m = g.dim();
  auto gamma = fd_christoffel(g, p);
  // d_s Gamma_{ij}^k tabulated once; each axis needs four Gamma evaluations.
  std::vector<double> dg_tab(m * m * m * m);
  {
    const double h = 2e-4;
    for (int s = 0; s < m; ++s) {
      std::vector<std::vector<double>> shifted;
      for (double off : {2 * h, h, -h, -2 * h}) {
        Point q = p;
        q.coords[s] += off;
        shifted.push_back(fd_christoffel(g, q));
      }
      for (int e = 0; e < m * m * m; ++e)
        dg_tab[s * m * m * m + e] =
            (-shifted[0][e] + 8 * shifted[1][e] - 8 * shifted[2][e] + shifted[3][e]) /
            (12 * h);
    }
  }
  auto dgamma = [&](int s, int i, int j, int k) {
    return dg_tab[((s * m + i) * m + j) * m + k];
  };
  Eigen::MatrixXd gv = fd_metric(g, p);
  TensorAtPoint r(m, co_slots(4), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double op = 0.0;
          for (int mm = 0; mm < m; ++mm) {
            double t = dgamma(i, j, k, mm) - dgamma(j, i, k, mm);
            for (int n = 0; n < m; ++n)
              t += gamma[i * m * m + n * m + mm] * gamma[j * m * m + k * m + n] -
                   gamma[j * m * m + n * m + mm] * gamma[i * m * m + k * m + n];
            op += gv(l, mm) * t;
          }
          r(i, j, k, l) = op;
        }
  return r;
}

}  // namespace hcg::testing

#endif
