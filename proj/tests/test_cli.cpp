#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hcg/config.hpp"
#include "hcg/report.hpp"

using namespace hcg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

int run_cli(const std::string& args, std::string* out, std::string* err) {
  std::string out_path = "/tmp/hcg_test_out.txt";
  std::string err_path = "/tmp/hcg_test_err.txt";
  std::string cmd = std::string(HCG_CLI_PATH) + " " + args + " > " + out_path + " 2> " +
                    err_path;
  int rc = std::system(cmd.c_str());
  if (out) *out = slurp(out_path);
  if (err) *err = slurp(err_path);
  return (rc >> 8) & 0xff;
}

}  // namespace

TEST_CASE("configs parse with defaults and explicit points") {
  auto cfg = validate_config(
      "# comment\n"
      "command = match\n"
      "metric.name = walker.exp\n"
      "metric.a = 2.0\n"
      "points.p0 = 0.1, 0.2, 0.3\n"
      "points.p1 = -1, 1.5, 0 # trailing comment\n");
  CHECK(cfg.command == "match");
  CHECK(cfg.metric_name == "walker.exp");
  CHECK(cfg.metric_params.at("a") == "2.0");
  CHECK(cfg.k == 2);
  CHECK(cfg.tol == 1e-10);
  CHECK(cfg.starts == 64);
  REQUIRE(cfg.points.size() == 2);
  CHECK(cfg.points[1][0] == -1.0);
  CHECK(cfg.points[1][1] == 1.5);
}

TEST_CASE("grid axes expand row-major into the point list") {
  auto cfg = validate_config(
      "command = vsi\n"
      "metric.name = walker.exp\n"
      "points.grid.x0 = 0:1:3\n"
      "points.grid.x1 = 5:5:1\n"
      "points.grid.x2 = -1:1:2\n");
  REQUIRE(cfg.points.size() == 6);
  CHECK(cfg.points[0][0] == 0.0);
  CHECK(cfg.points[0][1] == 5.0);
  CHECK(cfg.points[0][2] == -1.0);
  CHECK(cfg.points[1][2] == 1.0);  // last axis varies fastest
  CHECK(cfg.points[5][0] == 1.0);
  CHECK(cfg.points[5][2] == 1.0);
}

TEST_CASE("config diagnostics name the offending line") {
  auto expect_throw = [](const std::string& text, const std::string& needle) {
    try {
      validate_config(text);
      FAIL("config accepted: ", text);
    } catch (const error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_throw("command = match\nmetric.name = flat\nbogus.key = 1\n", "unknown key");
  expect_throw("command = match\nmetric.name = flat\nbogus.key = 1\n", "line 3");
  expect_throw("command = match\nmetric.name = flat\nk = 3\n", "level cap 2 in v1");
  expect_throw("command = match\nmetric.name = flat\nk = 1.5\n", "nonnegative integer");
  expect_throw("command = match\nmetric.name = flat\ntol = abc\n", "not a number");
  expect_throw("command = dance\nmetric.name = flat\n", "unknown command");
  expect_throw("metric.name = flat\n", "missing 'command'");
  expect_throw("command = vsi\n", "missing 'metric.name'");
  expect_throw("command = vsi\nmetric.name = flat\npoints.grid.x0 = 0:1\n", "start:stop:count");
  expect_throw("command = vsi\nmetric.name = flat\npoints.p0 =\n", "empty value");
  expect_throw("command = vsi\nmetric.name = flat\nno_equals_here\n", "expected '='");
}

TEST_CASE("reports are deterministic and carry the verdict") {
  auto cfg = validate_config(
      "command = vsi\n"
      "metric.name = walker.exp\n"
      "points.p0 = 0.1, 0.5, 0\n"
      "points.p1 = -0.4, 1.2, 0.3\n");
  auto r1 = run_experiment(cfg);
  auto r2 = run_experiment(cfg);
  CHECK(r1.report_json == r2.report_json);
  CHECK(r1.verdict == "vsi");
  CHECK(r1.exit_code == 0);

  auto j = nlohmann::json::parse(r1.report_json);
  CHECK(j.at("verdict") == "vsi");
  CHECK(j.at("config").at("command") == "vsi");
  CHECK(j.at("config").at("metric").at("name") == "walker.exp");
  CHECK(j.at("results").at(0).at("samples") == 2);
  CHECK(j.at("timing").at("seconds") == 0.0);
}

TEST_CASE("expectation mismatches and hard errors map to exit codes") {
  auto cfg = validate_config(
      "command = vsi\n"
      "metric.name = walker.exp\n"
      "points.p0 = 0.1, 0.5, 0\n"
      "expect = not-vsi\n");
  auto r = run_experiment(cfg);
  CHECK(r.verdict == "vsi");
  CHECK(r.exit_code == 1);

  auto bad = validate_config(
      "command = vsi\n"
      "metric.name = not.a.metric\n"
      "points.p0 = 0, 0, 0\n");
  auto rb = run_experiment(bad);
  CHECK(rb.exit_code == 2);
  CHECK(rb.verdict == "config-error");
  auto j = nlohmann::json::parse(rb.report_json);
  CHECK(j.contains("error"));
}

TEST_CASE("analyze reports the invariant catalogue") {
  auto cfg = validate_config(
      "command = analyze\n"
      "metric.name = sphere\n"
      "points.p0 = 0.2, -0.3\n");
  auto r = run_experiment(cfg);
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.report_json);
  double tau = j.at("results").at(0).at("invariants").at("tau").get<double>();
  CHECK(tau == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("the binary round-trips a config and honors its flags") {
  std::string cfg_path = "/tmp/hcg_test_cfg.txt";
  spit(cfg_path,
       "command = vsi\n"
       "metric.name = walker.exp\n"
       "points.p0 = 0.1, 0.5, 0\n");

  std::string out, err;
  int rc = run_cli("vsi --config " + cfg_path, &out, &err);
  CHECK(rc == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j.at("verdict") == "vsi");

  // Command on the CLI must agree with the config.
  rc = run_cli("match --config " + cfg_path, &out, &err);
  CHECK(rc == 2);
  CHECK(err.find("does not match") != std::string::npos);

  // Level cap applies to the override flag too.
  rc = run_cli("vsi --config " + cfg_path + " --k 3", &out, &err);
  CHECK(rc == 2);
  CHECK(err.find("level cap 2 in v1") != std::string::npos);

  // --out writes the identical report to a file.
  std::string out_path = "/tmp/hcg_test_report.json";
  rc = run_cli("vsi --config " + cfg_path + " --out " + out_path, &out, &err);
  CHECK(rc == 0);
  CHECK(slurp(out_path) == nlohmann::ordered_json::parse(slurp(out_path)).dump(2) + "\n");

  // --timing fills the timing block with a nonzero wall-clock read.
  rc = run_cli("vsi --config " + cfg_path + " --timing", &out, &err);
  CHECK(rc == 0);
  auto jt = nlohmann::json::parse(out);
  CHECK(jt.at("timing").at("seconds").get<double>() > 0.0);

  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}
