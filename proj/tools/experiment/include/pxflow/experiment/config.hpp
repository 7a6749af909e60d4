#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pxflow/error.hpp"
#include "pxflow/sim_config.hpp"

namespace pxflow::experiment {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct OutputConfig {
  std::vector<double> checkpoint_times;
  bool final_checkpoint = false;
  bool plot = true;
};

struct ExperimentConfig {
  std::string preset;  // empty when no preset was used
  SimConfig sim;
  OutputConfig output;
};

/// Strict: unknown keys and wrong types throw ConfigError naming the key path.
ExperimentConfig parse_config(const json& j);
json to_json(const ExperimentConfig& cfg);
json to_json(const ExponentSpec& spec);
ExponentSpec parse_exponent(const json& j, const std::string& where = "exponent");

/// Reads JSON, allowing // and /* */ comments.
json load_json_file(const std::string& path);
json parse_json_text(std::string_view text, const std::string& origin);

/// "section.key=value"; value is parsed as JSON when possible, else taken
/// as a string. Creates intermediate objects.
void apply_override(json& j, std::string_view assignment);

/// Preset (if any), then the file (if any), then overrides, merged in that
/// order. A "preset" key inside the file selects the base when no preset
/// argument is given.
json resolve_config(const std::optional<std::string>& config_path, const std::optional<std::string>& preset,
                    const std::vector<std::string>& overrides);

}  // namespace pxflow::experiment
