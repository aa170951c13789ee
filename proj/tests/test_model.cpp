#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "hcg/model.hpp"
#include "hcg/zoo.hpp"
#include "helpers.hpp"

using namespace hcg;
using namespace hcg::testing;

static Eigen::MatrixXd gram_matrix(const CurvatureModel& m) {
  Eigen::MatrixXd e(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) e(i, j) = m.gram(i, j);
  return e;
}

TEST_CASE("flat space produces the zero model") {
  auto m = build_model(flat_metric(3), Point{{0.1, 0.2, 0.3}}, 2);
  CHECK(m.is_zero());
  auto match = homothety_match(m, m);
  CHECK(match.matched());
  CHECK(match.lambda == doctest::Approx(1.0));
}

TEST_CASE("canonical frames are signature-ordered and pseudo-orthonormal") {
  auto ms = build_model(sphere_metric(), Point{{0.5, -0.3}}, 0);
  Eigen::MatrixXd e = gram_matrix(ms);
  CHECK((e - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
  // Constant sectional curvature 1 in an orthonormal frame.
  CHECK(ms.components[0](0, 1, 1, 0) == doctest::Approx(1.0).epsilon(1e-9));

  auto mw = build_model(walker_metric(walker_exp(1.0)), Point{{0.2, 0.5, 0.0}}, 1);
  Eigen::MatrixXd ew = gram_matrix(mw);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(3, 3);
  expect(0, 0) = -1.0;  // negatives first in signature (1, 2)
  CHECK((ew - expect).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("matching is reflexive and the frame map is a gram isometry") {
  MetricField g = walker_metric(walker_exp(1.0));
  auto m = build_model(g, Point{{0.3, 0.7, 0.1}}, 2);
  auto match = homothety_match(m, m);
  REQUIRE(match.matched());
  CHECK(std::abs(std::abs(match.lambda) - 1.0) <= 1e-7);
  Eigen::MatrixXd e = gram_matrix(m);
  CHECK((match.frame_map.transpose() * e * match.frame_map - e).cwiseAbs().maxCoeff() <=
        1e-7);
}

TEST_CASE("matching in the reverse direction inverts the scale") {
  MetricField g = walker_metric(walker_log(1));
  auto m1 = build_model(g, Point{{0.2, 1.0, 0.0}}, 1);
  auto m2 = build_model(g, Point{{0.5, 2.0, 0.3}}, 1);
  auto fwd = homothety_match(m1, m2);
  auto bwd = homothety_match(m2, m1);
  REQUIRE(fwd.matched());
  REQUIRE(bwd.matched());
  CHECK(std::abs(fwd.lambda * bwd.lambda) == doctest::Approx(1.0).epsilon(1e-6));
}

static MetricField scaled_metric(const MetricField& g, double c2) {
  std::vector<ScalarField> comps;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) {
      ScalarField f = g.component(i, j);
      comps.push_back([f, c2](const std::vector<Jet>& x) { return f(x) * c2; });
    }
  return MetricField(g.dim(), g.sig_neg(), comps,
                     [g](const Point& p) { return g.in_domain(p); }, "scaled");
}

TEST_CASE("rescaling the metric is matched with scale equal to c") {
  MetricField g = walker_metric(walker_exp(1.0));
  Point p{{0.1, 0.6, -0.2}};
  for (double c : {0.5, 3.0}) {
    auto m1 = build_model(g, p, 1);
    auto m2 = build_model(scaled_metric(g, c * c), p, 1);
    auto match = homothety_match(m1, m2);
    REQUIRE(match.matched());
    CHECK(std::abs(match.lambda) == doctest::Approx(c).epsilon(1e-6));
  }
}

TEST_CASE("f = e^y is 2-curvature homogeneous in the isometry sense") {
  MetricField g = walker_metric(walker_exp(1.0));
  auto m1 = build_model(g, Point{{0.2, 0.4, 0.0}}, 2);
  auto m2 = build_model(g, Point{{-0.3, 1.5, 0.5}}, 2);
  auto match = isometry_match(m1, m2);
  CHECK(match.matched());
  CHECK(match.lambda == doctest::Approx(1.0));
  CHECK(lemma12_equivalence_check(match, m1, m2) <= 1e-6);
}

TEST_CASE("f = ln y needs a homothety from y = 1 to y = 2") {
  MetricField g = walker_metric(walker_log(1));
  auto m1 = build_model(g, Point{{0.2, 1.0, 0.0}}, 1);
  auto m2 = build_model(g, Point{{0.5, 2.0, 0.3}}, 1);
  auto hom = homothety_match(m1, m2);
  REQUIRE(hom.matched());
  CHECK(std::abs(hom.lambda) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(lemma12_equivalence_check(hom, m1, m2) <= 1e-6);

  auto iso = isometry_match(m1, m2);
  CHECK(iso.verdict == MatchVerdict::no_match);
}

TEST_CASE("f = alpha(x) y^2/2 with alpha = e^x matches level by level only") {
  MetricField g = walker_metric(
      walker_quad([](const Jet& x) { return exp(x); }, "exp"));
  auto m1 = build_model(g, Point{{0.0, 0.8, 0.0}}, 1);
  auto m2 = build_model(g, Point{{1.0, 0.8, 0.2}}, 1);
  auto joint = homothety_match(m1, m2);
  CHECK(joint.verdict == MatchVerdict::no_match);
  auto per_level = variable_match(m1, m2);
  REQUIRE(per_level.size() == 2);
  for (const auto& lv : per_level) CHECK(lv.matched());
}

TEST_CASE("a joint match implies per-level matches with the same scale") {
  MetricField g = walker_metric(walker_log(1));
  auto m1 = build_model(g, Point{{0.2, 1.0, 0.0}}, 1);
  auto m2 = build_model(g, Point{{0.5, 2.0, 0.3}}, 1);
  auto joint = homothety_match(m1, m2);
  REQUIRE(joint.matched());
  auto per_level = variable_match(m1, m2);
  for (const auto& lv : per_level) CHECK(lv.matched());
}

TEST_CASE("structurally incompatible zero levels are certified failures") {
  MetricField g = walker_metric(walker_exp(1.0));
  auto m1 = build_model(g, Point{{0.2, 0.4, 0.0}}, 0);
  // f linear in y has zero curvature but the same signature and gram.
  WalkerFun lin;
  lin.name = "lin";
  lin.f = [](const Jet&, const Jet& y) { return y; };
  auto zero = build_model(walker_metric(lin), Point{{0.2, 0.4, 0.0}}, 0);
  auto match = homothety_match(m1, zero);
  CHECK(match.verdict == MatchVerdict::no_match);
  CHECK(match.note.find("no scale exists") != std::string::npos);

  // Different signatures cannot share a gram at all.
  auto flat = build_model(flat_metric(3), Point{{0.0, 0.0, 0.0}}, 0);
  auto mism = homothety_match(m1, flat);
  CHECK(mism.verdict == MatchVerdict::no_match);
  CHECK(mism.note.find("gram mismatch") != std::string::npos);
}

TEST_CASE("Singer-style stabilizer profiles") {
  // Flat space: everything annihilates the zero tensors.
  auto flat = singer_profile(flat_metric(3), Point{{0.0, 0.1, 0.2}}, 2);
  REQUIRE(flat.dims.size() == 3);
  for (int d : flat.dims) CHECK(d == 4);  // so(3) + scaling
  CHECK(flat.singer_number == 0);

  // Round sphere: the rotation survives, the scaling does not.
  auto sph = singer_profile(sphere_metric(), Point{{0.3, -0.2}}, 2);
  REQUIRE(sph.dims.size() == 3);
  for (int d : sph.dims) CHECK(d == 1);
  CHECK(sph.singer_number == 0);

  // Covariantly constant curvature: the profile stabilizes immediately.
  auto sym = singer_profile(walker_metric(walker_sym()), Point{{0.1, 0.9, 0.0}}, 2);
  REQUIRE(sym.dims.size() == 3);
  CHECK(sym.dims[0] >= 1);
  CHECK(sym.dims[0] <= 4);
  CHECK(sym.dims[1] == sym.dims[0]);
  CHECK(sym.dims[2] == sym.dims[0]);
  CHECK(sym.singer_number == 0);
}
