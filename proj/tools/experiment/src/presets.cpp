#include "pxflow/experiment/presets.hpp"

#include <sstream>

namespace pxflow::experiment {

namespace {

constexpr double kPMinFloor = 11.0 / 5.0;
constexpr double kPPlusCeiling = 8.0 / 3.0;
constexpr double kSlack = 1e-12;

struct Preset {
  const char* name;
  const char* summary;
  const char* body;
};

// Kept as JSON text so the presets read exactly like user configuration.
constexpr Preset kPresets[] = {
    {"newtonian-tg", "2D Taylor-Green vortex, p = 2, 2 pi box, closed-form regression",
     R"({
  "grid": {"dim": 2, "nodes": 64, "length": 6.283185307179586},
  "exponent": {"kind": "constant", "value": 2.0},
  "initial": {"kind": "taylor_green", "amplitude": 1.0},
  "time": {"dt": 0.001, "t_end": 1.0, "record_every": 50, "integrator": "imex_heun"}
})"},
    {"stokes-oracle", "linear-only run against the exact per-mode heat solution",
     R"({
  "grid": {"dim": 2, "nodes": 128, "length": 100.53096491487338},
  "exponent": {"kind": "constant", "value": 2.0},
  "initial": {"kind": "random_spectrum", "slope": 0.0, "k0": 1.4142135623730951, "amplitude": 1.0},
  "linear_only": true,
  "seed": 7,
  "time": {"dt": 0.1, "t_end": 12.8, "record_every": 4},
  "monitors": {"amplitude": true, "splitting": true},
  "diagnostics": {"retain_spectra": true, "split_weight": "cubic"}
})"},
    {"thm21", "3D variable-p energy decay, bump exponent in [2.3, 2.6]",
     R"({
  "grid": {"dim": 3, "nodes": 64, "length": 64.0},
  "exponent": {"kind": "bump", "base": 2.3, "amplitude": 0.3, "width": 16.0},
  "initial": {"kind": "random_spectrum", "slope": 0.0, "k0": 1.4142135623730951, "amplitude": 3.0},
  "seed": 1,
  "time": {"dt": 0.1, "t_end": 20.0, "record_every": 5},
  "monitors": {"amplitude": true, "splitting": true},
  "diagnostics": {"retain_spectra": true, "fit_t0": 1.0, "fit_t1": 20.0}
})"},
    {"thm22-smalldata", "3D small-data gradient decay, bump exponent in [2.2, 2.6]",
     R"({
  "grid": {"dim": 3, "nodes": 64, "length": 64.0},
  "exponent": {"kind": "bump", "base": 2.2, "amplitude": 0.4, "width": 16.0},
  "initial": {"kind": "random_spectrum", "slope": 0.0, "k0": 1.4142135623730951, "amplitude": 0.0004},
  "seed": 2,
  "small_data": {"enabled": true, "h1_cap": 0.07071067811865475},
  "time": {"dt": 0.1, "t_end": 20.0, "record_every": 5},
  "monitors": {"amplitude": true, "splitting": true},
  "diagnostics": {"retain_spectra": true, "split_weight": "sqrt_inverse", "fit_t0": 1.0, "fit_t1": 20.0}
})"},
};

const Preset* find_preset(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return &p;
  }
  return nullptr;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

std::string preset_summary(const std::string& name) {
  const Preset* p = find_preset(name);
  return p ? p->summary : "";
}

json preset_json(const std::string& name) {
  const Preset* p = find_preset(name);
  if (!p) {
    std::string names;
    for (const auto& q : kPresets) names += names.empty() ? q.name : std::string(", ") + q.name;
    throw ConfigError("unknown preset '" + name + "' (available: " + names + ")");
  }
  return parse_json_text(p->body, std::string("preset ") + name);
}

void check_preset_hypotheses(const ExperimentConfig& cfg, const ExponentField& p) {
  std::ostringstream os;
  if (cfg.preset == "thm21") {
    if (p.p_minus() < kPMinFloor - kSlack) {
      os << "preset thm21 assumes p_minus >= 11/5, but the exponent field has p_minus = " << p.p_minus();
      throw ConfigError(os.str());
    }
  } else if (cfg.preset == "thm22-smalldata") {
    if (p.p_minus() < kPMinFloor - kSlack || p.p_plus() >= kPPlusCeiling) {
      os << "preset thm22-smalldata assumes 11/5 <= p_minus <= p_plus < 8/3, but the exponent field spans ["
         << p.p_minus() << ", " << p.p_plus() << "]";
      throw ConfigError(os.str());
    }
    if (!cfg.sim.small_data.enabled) throw ConfigError("preset thm22-smalldata needs small_data.enabled = true");
  }
}

}  // namespace pxflow::experiment
