#pragma once

#include <string>
#include <vector>

#include "pxflow/diagnostics.hpp"
#include "pxflow/experiment/config.hpp"

namespace pxflow::experiment {

json fit_json(const DecayFit& fit);
json fit_json(const std::optional<DecayFit>& fit);

/// Everything in the final report except run-specific extras.
json report_json(const DecayReport& report, const ExperimentConfig& cfg, const ExponentField& p);

struct Manifest {
  json config;
  std::string started;   // ISO 8601 UTC
  std::string finished;
  std::vector<std::string> outputs;
  std::string replay;
  int exit_code = 0;
};

json manifest_json(const Manifest& m);

/// Versions of every default the run depends on.
json defaults_json();

/// Self-contained matplotlib script plotting the CSV next to it on log-log
/// axes with reference slopes d/4 and d/4 + 1/2.
std::string plot_script(const std::string& csv_name, int dim);

std::string utc_timestamp();

}  // namespace pxflow::experiment
