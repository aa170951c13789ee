#ifndef HCG_REPORT_HPP
#define HCG_REPORT_HPP

#include <string>

#include "hcg/config.hpp"

namespace hcg {

struct RunResult {
  std::string report_json;  // {config, results, verdict, timing}
  std::string verdict;
  int exit_code = 0;  // 0 verdicts ok, 1 verdict failure, 2 config error
};

// Executes a validated experiment. Numeric report fields are rounded to 12
// significant digits so identical configs give byte-identical reports; the
// timing block is zero unless with_timing is set.
RunResult run_experiment(const ExperimentConfig& config, bool with_timing = false);

}  // namespace hcg

#endif
