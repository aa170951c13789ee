#include "hcg/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "hcg/lab.hpp"
#include "hcg/model.hpp"
#include "hcg/zoo.hpp"

namespace hcg {

namespace {

using json = nlohmann::ordered_json;

// 12-significant-digit rounding keeps reports byte-identical across runs and
// platforms that agree to that precision.
json num(double v) {
  if (!std::isfinite(v)) return json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return json(std::stod(buf));
}

json point_json(const Point& p) {
  json a = json::array();
  for (double c : p.coords) a.push_back(num(c));
  return a;
}

json config_echo(const ExperimentConfig& cfg) {
  json c;
  c["command"] = cfg.command;
  c["metric"]["name"] = cfg.metric_name;
  for (const auto& [k, v] : cfg.metric_params) c["metric"][k] = v;
  c["k"] = cfg.k;
  c["tol"] = num(cfg.tol);
  c["starts"] = cfg.starts;
  if (!cfg.expect.empty()) c["expect"] = cfg.expect;
  for (const auto& [k, v] : cfg.extra) c[k] = v;
  json pts = json::array();
  for (const auto& p : cfg.points) pts.push_back(point_json(p));
  c["points"] = pts;
  return c;
}

const char* verdict_name(MatchVerdict v) {
  switch (v) {
    case MatchVerdict::matched: return "matched";
    case MatchVerdict::inconclusive: return "inconclusive";
    default: return "no-match";
  }
}

json match_json(const HomothetyMatch& m) {
  json j;
  j["mode"] = m.mode;
  j["verdict"] = verdict_name(m.verdict);
  j["lambda"] = num(m.lambda);
  j["residual"] = num(m.residual);
  json rl = json::array();
  for (double r : m.residuals) rl.push_back(num(r));
  j["residuals"] = rl;
  if (!m.note.empty()) j["note"] = m.note;
  return j;
}

std::function<Jet(const Jet&)> alpha_from_params(
    const std::map<std::string, std::string>& params) {
  auto it = params.find("alpha");
  std::string alpha = it == params.end() ? "exp" : it->second;
  if (alpha == "exp") return [](const Jet& x) { return exp(x); };
  if (alpha == "invsq") {
    double a = params.count("a") ? std::stod(params.at("a")) : 4.0;
    double x0 = params.count("x0") ? std::stod(params.at("x0")) : 0.0;
    return [a, x0](const Jet& x) {
      Jet d = x - x0;
      return a / (d * d);
    };
  }
  if (alpha == "gauss") {
    int k = params.count("k") ? std::stoi(params.at("k")) : 2;
    return variable_ch_construct(k).as_scalar();
  }
  throw error(errc::bad_argument, "unknown alpha '" + alpha + "' (exp, invsq, gauss)");
}

void require_points(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.points.size() < n)
    throw error(errc::bad_argument,
                "command '" + cfg.command + "' needs at least " + std::to_string(n) +
                    " point(s)");
}

std::string run_command(const ExperimentConfig& cfg, json* results) {
  MetricField g = make_metric(cfg.metric_name, cfg.metric_params);
  for (const auto& p : cfg.points) g.require_in_domain(p);

  if (cfg.command == "analyze") {
    require_points(cfg, 1);
    for (const auto& p : cfg.points) {
      json r;
      r["point"] = point_json(p);
      auto set = weyl_scalars(g, p);
      json inv;
      for (const auto& [name, vo] : set.entries()) inv[name] = num(vo.first);
      r["invariants"] = inv;
      results->push_back(r);
    }
    return "ok";
  }

  if (cfg.command == "vsi") {
    require_points(cfg, 1);
    auto rep = vsi_sweep(g, cfg.points, cfg.tol);
    json r;
    r["max_abs"] = num(rep.max_abs);
    r["samples"] = rep.samples;
    results->push_back(r);
    return rep.vsi ? "vsi" : "not-vsi";
  }

  if (cfg.command == "match") {
    require_points(cfg, 2);
    MatchOptions opt;
    opt.starts = cfg.starts;
    auto m1 = build_model(g, cfg.points[0], cfg.k);
    auto m2 = build_model(g, cfg.points[1], cfg.k);
    auto iso = isometry_match(m1, m2, opt);
    auto hom = homothety_match(m1, m2, opt);
    results->push_back(match_json(iso));
    results->push_back(match_json(hom));
    if (iso.matched()) return "isometry";
    if (hom.matched())
      return iso.verdict == MatchVerdict::no_match ? "homothety-not-isometry" : "homothety";
    if (hom.verdict == MatchVerdict::no_match && iso.verdict == MatchVerdict::no_match)
      return "no-match";
    return "inconclusive";
  }

  if (cfg.command == "variable") {
    require_points(cfg, 2);
    MatchOptions opt;
    opt.starts = cfg.starts;
    // Probe one level beyond the requested cap: the interesting verdicts are
    // exactly the first-failing-level ones.
    int top = std::min(cfg.k + 1, 3);
    auto m1 = build_model(g, cfg.points[0], top);
    auto m2 = build_model(g, cfg.points[1], top);
    auto per_level = variable_match(m1, m2, opt);
    int first_fail = -1;
    for (std::size_t l = 0; l < per_level.size(); ++l) {
      json r = match_json(per_level[l]);
      r["level"] = static_cast<int>(l);
      results->push_back(r);
      if (!per_level[l].matched() && first_fail < 0) first_fail = static_cast<int>(l);
    }
    return first_fail < 0 ? "all-levels" : "fails-at-" + std::to_string(first_fail);
  }

  if (cfg.command == "classify") {
    require_points(cfg, 1);
    std::vector<double> samples;
    for (const auto& p : cfg.points) samples.push_back(p[0]);
    auto cls = classify_walker_alpha(alpha_from_params(cfg.metric_params), samples);
    json r;
    r["c3"] = num(cls.c3);
    r["branch1_residual"] = num(cls.branch1_residual);
    r["ratio_mean"] = num(cls.ratio_mean);
    r["ratio_spread"] = num(cls.ratio_spread);
    results->push_back(r);
    return cls.verdict;
  }

  if (cfg.command == "slice") {
    require_points(cfg, 1);
    LevelSetProbe probe;
    probe.base = cfg.points[0];
    probe.invariant =
        cfg.extra.count("slice.invariant") ? cfg.extra.at("slice.invariant") : "tau";
    double c = cfg.extra.count("slice.c") ? std::stod(cfg.extra.at("slice.c")) : 1.0;
    double d = cfg.extra.count("slice.d") ? std::stod(cfg.extra.at("slice.d")) : 2.0;
    double dist = slice_distance(g, probe, c, d);
    json r;
    r["c"] = num(c);
    r["d"] = num(d);
    r["distance"] = num(dist);
    if (c != d) r["kappa"] = num(dist / std::abs(c - d));
    results->push_back(r);
    return "ok";
  }

  if (cfg.command == "singer") {
    require_points(cfg, 1);
    std::vector<SingerProfile> profiles;
    for (const auto& p : cfg.points) {
      auto prof = singer_profile(g, p, cfg.k);
      json r;
      r["point"] = point_json(p);
      r["dims"] = prof.dims;
      r["singer_number"] = prof.singer_number;
      results->push_back(r);
      profiles.push_back(prof);
    }
    for (const auto& prof : profiles)
      if (prof.dims != profiles[0].dims) return "varying-profile";
    return "constant-profile";
  }

  throw error(errc::bad_argument, "unknown command '" + cfg.command + "'");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, bool with_timing) {
  RunResult out;
  json report;
  report["config"] = config_echo(cfg);
  auto t0 = std::chrono::steady_clock::now();
  try {
    json results = json::array();
    out.verdict = run_command(cfg, &results);
    report["results"] = results;
    report["verdict"] = out.verdict;
    out.exit_code = (cfg.expect.empty() || cfg.expect == out.verdict) ? 0 : 1;
  } catch (const error& e) {
    report["results"] = json::array();
    report["error"] = e.what();
    out.verdict = "config-error";
    report["verdict"] = out.verdict;
    out.exit_code = 2;
  }
  double secs = 0.0;
  if (with_timing) {
    auto t1 = std::chrono::steady_clock::now();
    secs = std::chrono::duration<double>(t1 - t0).count();
  }
  report["timing"]["seconds"] = num(secs);
  out.report_json = report.dump(2) + "\n";
  return out;
}

}  // namespace hcg
