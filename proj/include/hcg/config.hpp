#ifndef HCG_CONFIG_HPP
#define HCG_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "hcg/metric.hpp"

namespace hcg {

// Flat key = value experiment description. Dotted keys group the metric
// parameters, explicit points, and per-axis grids.
struct ExperimentConfig {
  std::string command;  // analyze | match | vsi | classify | slice | singer | variable
  std::string metric_name;
  std::map<std::string, std::string> metric_params;
  std::vector<Point> points;
  int k = 2;
  double tol = 1e-10;
  int starts = 64;
  std::string expect;  // optional expected verdict; empties are never checked
  std::map<std::string, std::string> extra;  // command-specific settings
};

// Parses and validates config text. Unknown keys, malformed numbers, and
// levels above the cap are rejected with a diagnostic naming the line.
ExperimentConfig validate_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace hcg

#endif
