#include "hcg/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "hcg/errors.hpp"

namespace hcg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw error(errc::bad_argument,
              "config line " + std::to_string(line) + ", column " + std::to_string(col) +
                  ": " + msg);
}

double parse_num(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(line, 1, "not a number: '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_num(trim(item), line));
  if (out.empty()) fail(line, 1, "empty coordinate list");
  return out;
}

struct GridAxis {
  double start = 0.0, stop = 0.0;
  int count = 1;
};

GridAxis parse_axis(const std::string& v, int line) {
  // start:stop:count
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() != 3) fail(line, 1, "grid axis must be start:stop:count, got '" + v + "'");
  GridAxis a;
  a.start = parse_num(parts[0], line);
  a.stop = parse_num(parts[1], line);
  double c = parse_num(parts[2], line);
  a.count = static_cast<int>(c);
  if (a.count < 1 || a.count != c) fail(line, 1, "grid count must be a positive integer");
  return a;
}

const std::vector<std::string> kCommands = {"analyze", "match",  "vsi",     "classify",
                                            "slice",   "singer", "variable"};
const std::vector<std::string> kExtraKeys = {"slice.c", "slice.d", "slice.invariant"};

}  // namespace

ExperimentConfig validate_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<int, std::vector<double>> explicit_points;
  std::map<int, GridAxis> grid;

  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, static_cast<int>(line.size()) + 1, "expected '='");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, 1, "empty key");
    if (value.empty()) fail(lineno, static_cast<int>(eq) + 2, "empty value for '" + key + "'");

    if (key == "command") {
      if (std::find(kCommands.begin(), kCommands.end(), value) == kCommands.end())
        fail(lineno, 1, "unknown command '" + value + "'");
      cfg.command = value;
    } else if (key == "metric.name") {
      cfg.metric_name = value;
    } else if (key.rfind("metric.", 0) == 0) {
      cfg.metric_params[key.substr(7)] = value;
    } else if (key.rfind("points.grid.x", 0) == 0) {
      std::string idx = key.substr(13);
      if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
        fail(lineno, 1, "grid axis key must be points.grid.x<index>");
      grid[std::stoi(idx)] = parse_axis(value, lineno);
    } else if (key.rfind("points.p", 0) == 0) {
      std::string idx = key.substr(8);
      if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
        fail(lineno, 1, "point key must be points.p<index>");
      explicit_points[std::stoi(idx)] = parse_list(value, lineno);
    } else if (key == "k") {
      double kv = parse_num(value, lineno);
      if (kv != static_cast<int>(kv) || kv < 0) fail(lineno, 1, "k must be a nonnegative integer");
      if (kv > 2) fail(lineno, 1, "level cap 2 in v1");
      cfg.k = static_cast<int>(kv);
    } else if (key == "tol") {
      cfg.tol = parse_num(value, lineno);
      if (cfg.tol <= 0.0) fail(lineno, 1, "tol must be positive");
    } else if (key == "starts") {
      double sv = parse_num(value, lineno);
      if (sv < 1 || sv != static_cast<int>(sv)) fail(lineno, 1, "starts must be a positive integer");
      cfg.starts = static_cast<int>(sv);
    } else if (key == "expect") {
      cfg.expect = value;
    } else if (std::find(kExtraKeys.begin(), kExtraKeys.end(), key) != kExtraKeys.end()) {
      cfg.extra[key] = value;
    } else {
      fail(lineno, 1, "unknown key '" + key + "'");
    }
  }

  if (cfg.command.empty()) throw error(errc::bad_argument, "config missing 'command'");
  if (cfg.metric_name.empty())
    throw error(errc::bad_argument, "config missing 'metric.name'");

  for (const auto& [idx, coords] : explicit_points) cfg.points.push_back(Point{coords});
  if (!grid.empty()) {
    int maxAxis = grid.rbegin()->first;
    std::vector<GridAxis> axes(maxAxis + 1);
    for (const auto& [idx, axis] : grid) axes[idx] = axis;
    std::vector<double> coords(axes.size(), 0.0);
    long total = 1;
    for (const auto& a : axes) total *= a.count;
    if (total > 100000) throw error(errc::bad_argument, "grid too large");
    for (long n = 0; n < total; ++n) {
      long rem = n;
      for (int ax = static_cast<int>(axes.size()) - 1; ax >= 0; --ax) {
        int i = static_cast<int>(rem % axes[ax].count);
        rem /= axes[ax].count;
        const auto& a = axes[ax];
        coords[ax] = a.count == 1 ? a.start
                                  : a.start + (a.stop - a.start) * i / (a.count - 1);
      }
      cfg.points.push_back(Point{coords});
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::bad_argument, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_config(ss.str());
}

}  // namespace hcg
