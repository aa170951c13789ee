#include <doctest.h>

#include <cmath>

#include "hcg/jet.hpp"
#include "hcg/metric.hpp"
#include "hcg/zoo.hpp"

using namespace hcg;

TEST_CASE("variable jets expose their seed data") {
  Jet x = Jet::variable(2, 4, 0, 1.5);
  CHECK(x.value() == 1.5);
  CHECK(x.partial({1, 0}) == 1.0);
  CHECK(x.partial({0, 1}) == 0.0);
  CHECK(x.partial({2, 0}) == 0.0);
}

TEST_CASE("polynomial partial derivatives come out with factorials") {
  // f = x^2 y^3: d^2x d^3y f = 2! 3! = 12 at any point; check at (2, 3).
  Jet x = Jet::variable(2, 5, 0, 2.0);
  Jet y = Jet::variable(2, 5, 1, 3.0);
  Jet f = x * x * y * y * y;
  CHECK(f.value() == doctest::Approx(4.0 * 27.0).epsilon(1e-14));
  CHECK(f.partial({2, 3}) == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(f.partial({1, 3}) == doctest::Approx(2.0 * 2.0 * 6.0).epsilon(1e-14));
}

TEST_CASE("truncated product equals product of truncations") {
  // exp(x)*exp(y) and exp(x+y) have identical jets at every truncation order.
  for (int order = 1; order <= 6; ++order) {
    Jet x = Jet::variable(2, order, 0, 0.3);
    Jet y = Jet::variable(2, order, 1, -0.7);
    Jet a = exp(x) * exp(y);
    Jet b = exp(x + y);
    for (int i = 0; i + 0 <= order; ++i)
      for (int j = 0; i + j <= order; ++j)
        CHECK(a.coeff({i, j}) == doctest::Approx(b.coeff({i, j})).epsilon(1e-12));
  }
}

TEST_CASE("division and reciprocal invert multiplication") {
  Jet x = Jet::variable(2, 5, 0, 1.2);
  Jet y = Jet::variable(2, 5, 1, 0.8);
  Jet q = (x / y) * y;
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; i + j <= 5; ++j)
      CHECK(q.coeff({i, j}) ==
            doctest::Approx(Jet::variable(2, 5, 0, 1.2).coeff({i, j})).epsilon(1e-12));
  Jet r = y * y.reciprocal();
  CHECK(r.value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.partial({0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("elementary functions satisfy their identities") {
  Jet x = Jet::variable(1, 6, 0, 0.4);
  Jet s = sin(x), c = cos(x);
  Jet unit = s * s + c * c;
  CHECK(unit.value() == doctest::Approx(1.0).epsilon(1e-14));
  for (int n = 1; n <= 6; ++n)
    CHECK(unit.coeff({n}) == doctest::Approx(0.0).epsilon(1e-12));

  Jet l = log(exp(x));
  CHECK(l.value() == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(l.coeff({1}) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(l.coeff({2}) == doctest::Approx(0.0).epsilon(1e-12));

  Jet y = Jet::variable(1, 4, 0, 4.0);
  Jet sq = sqrt(y) * sqrt(y);
  CHECK(sq.coeff({1}) == doctest::Approx(1.0).epsilon(1e-13));
  Jet pw = pow(y, 0.5);
  CHECK(pw.value() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(pw.partial({1}) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("derivative extraction lowers the order by one") {
  Jet x = Jet::variable(2, 4, 0, 0.5);
  Jet y = Jet::variable(2, 4, 1, 2.0);
  Jet f = exp(x) * y;
  Jet fx = f.derivative(0);
  CHECK(fx.order() == 3);
  CHECK(fx.value() == doctest::Approx(std::exp(0.5) * 2.0).epsilon(1e-14));
  CHECK(fx.partial({0, 1}) == doctest::Approx(std::exp(0.5)).epsilon(1e-13));
}

TEST_CASE("mixed-order arithmetic truncates to the lower order") {
  Jet a = Jet::variable(2, 4, 0, 1.0);
  Jet b = Jet::variable(2, 2, 1, 2.0);
  Jet p = a * b;
  CHECK(p.order() == 2);
  CHECK(p.value() == 2.0);
  CHECK(p.partial({1, 1}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("order above the engine maximum is rejected") {
  CHECK_THROWS_AS(Jet::variable(2, 7, 0, 0.0), error);
  CHECK_THROWS_AS(Jet::variable(5, 2, 0, 0.0), error);
}

TEST_CASE("metric component jets reproduce hand-computed Taylor data") {
  // Constant Euclidean metric: all derivative coefficients vanish.
  MetricField flat = flat_metric(3);
  auto gj = flat.jets_at(Point{{0.3, -1.0, 2.0}}, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(gj(i, j).value() == (i == j ? 1.0 : 0.0));
      CHECK(gj(i, j).partial({1, 0, 0}) == 0.0);
      CHECK(gj(i, j).partial({0, 1, 1}) == 0.0);
    }

  // Walker f = e^y: g_00 = -2e^y has value -2 and d_y coefficient -2 at 0.
  MetricField walker = walker_metric(walker_exp(1.0));
  auto wj = walker.jets_at(Point{{0.0, 0.0, 0.0}}, 1);
  CHECK(wj(0, 0).value() == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(wj(0, 0).partial({0, 1, 0}) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(wj(0, 2).value() == 1.0);
  CHECK(wj(1, 1).value() == 1.0);

  // Warped e^{tx} dx^2 at x = 0, t = 1: value 1, d_x coefficient 1.
  MetricField warped = warped_product(flat_metric(2), 1.0);
  auto pj = warped.jets_at(Point{{0.0, 0.2, -0.4}}, 1);
  CHECK(pj(0, 0).value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pj(0, 0).partial({1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("domain and order violations are hard errors") {
  MetricField walker = walker_metric(walker_log(1));
  CHECK_THROWS_AS(walker.jets_at(Point{{0.0, -1.0, 0.0}}, 2), error);
  CHECK_THROWS_AS(walker.jets_at(Point{{0.0, 1.0, 0.0}}, 7), error);
  CHECK_THROWS_AS(walker.jets_at(Point{{0.0, 1.0}}, 2), error);
}
