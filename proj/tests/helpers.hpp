#ifndef HCG_TESTS_HELPERS_HPP
#define HCG_TESTS_HELPERS_HPP

#include <random>
#include <vector>

#include "hcg/metric.hpp"
#include "hcg/zoo.hpp"

namespace hcg::testing {

// Deterministic draws; every test fixes its own seed.
inline std::mt19937& rng(unsigned seed = 0) {
  static std::mt19937 gen(12345);
  if (seed) gen.seed(seed);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

// A 5x5 grid of (x, y) samples in the shared Walker box y in [0.4, 2.4].
inline std::vector<Point> walker_grid() {
  std::vector<Point> pts;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      pts.push_back(Point{{-1.0 + 0.5 * i, 0.4 + 0.5 * j, 0.3 * i - 0.2 * j}});
  return pts;
}

inline std::vector<WalkerFun> walker_presets() {
  return {walker_exp(1.0),
          walker_log(1),
          walker_pow(3.0, 1),
          walker_pow(-1.0, 1),
          walker_pow(0.5, 1),
          walker_quad([](const Jet& x) { return exp(x); }, "exp"),
          walker_quartic()};
}

}  // namespace hcg::testing

#endif
