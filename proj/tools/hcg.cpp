#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hcg/config.hpp"
#include "hcg/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Curvature-homogeneity experiment runner"};
  std::string command, config_path, out_path;
  double tol = 0.0;
  int k = -1, starts = 0;
  bool timing = false;
  app.add_option("command", command,
                 "analyze | match | vsi | classify | slice | singer | variable")
      ->required();
  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--out", out_path, "report output path (default stdout)");
  app.add_option("--tol", tol, "tolerance override");
  app.add_option("--k", k, "model level override (0..2)");
  app.add_option("--starts", starts, "match start count override");
  app.add_flag("--timing", timing, "record wall-clock timing in the report");
  CLI11_PARSE(app, argc, argv);

  hcg::ExperimentConfig cfg;
  try {
    cfg = hcg::load_config_file(config_path);
    if (!cfg.command.empty() && cfg.command != command)
      throw hcg::error(hcg::errc::bad_argument, "config command '" + cfg.command +
                                                    "' does not match CLI command '" +
                                                    command + "'");
    cfg.command = command;
    if (tol > 0.0) cfg.tol = tol;
    if (k >= 0) {
      if (k > 2) throw hcg::error(hcg::errc::bad_argument, "level cap 2 in v1");
      cfg.k = k;
    }
    if (starts > 0) cfg.starts = starts;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  auto result = hcg::run_experiment(cfg, timing);
  if (out_path.empty()) {
    std::cout << result.report_json;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    out << result.report_json;
  }
  if (result.exit_code != 0) std::cerr << "verdict: " << result.verdict << "\n";
  return result.exit_code;
}
