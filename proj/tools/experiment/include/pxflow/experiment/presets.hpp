#pragma once

#include <string>
#include <vector>

#include "pxflow/exponent_space.hpp"
#include "pxflow/experiment/config.hpp"

namespace pxflow::experiment {

std::vector<std::string> preset_names();
std::string preset_summary(const std::string& name);

/// Throws ConfigError for unknown names.
json preset_json(const std::string& name);

/// Hypotheses attached to the decay presets: thm21 needs p^- >= 11/5;
/// thm22-smalldata needs 11/5 <= p^- <= p^+ < 8/3 and small-data mode.
/// Throws ConfigError naming the violated condition.
void check_preset_hypotheses(const ExperimentConfig& cfg, const ExponentField& p);

}  // namespace pxflow::experiment
