#include "pxflow/experiment/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pxflow/experiment/presets.hpp"

namespace pxflow::experiment {

namespace {

// Tracks which keys of an object were consumed so leftovers can be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + " must be a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || j_.at(key).is_null()) {
      if (has(key)) used_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(key_path(key) + " must be an integer");
    return v.get<long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + " must be a string");
    return v.get<std::string>();
  }

  std::optional<Point> point(const std::string& key) {
    if (!has(key) || j_.at(key).is_null()) {
      if (has(key)) used_.insert(key);
      return std::nullopt;
    }
    const json& v = raw(key);
    if (!v.is_array() || v.size() < 2 || v.size() > 3) throw ConfigError(key_path(key) + " must be [x, y] or [x, y, z]");
    Point p{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(key_path(key) + " entries must be numbers");
      p[i] = v[i].get<double>();
    }
    return p;
  }

  Section child(const std::string& key) {
    static const json empty = json::object();
    if (!has(key)) return Section(empty, key_path(key));
    return Section(raw(key), key_path(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw ConfigError("unknown configuration key '" + key_path(k) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "configuration" : "'" + path_ + "'"; }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class Enum>
Enum parse_enum(Section& s, const std::string& key, Enum fallback,
                std::initializer_list<std::pair<const char*, Enum>> options) {
  if (!s.has(key)) return fallback;
  const std::string v = s.string(key, "");
  std::string names;
  for (const auto& [name, e] : options) {
    if (v == name) return e;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(s.key_path(key) + " must be one of " + names + " (got '" + v + "')");
}

Grid parse_grid(Section s) {
  Grid g;
  g.dim = static_cast<int>(s.integer("dim", 2));
  if (g.dim != 2 && g.dim != 3) throw ConfigError("grid.dim must be 2 or 3");
  g.nodes = {64, 64, 1};
  g.length = {1.0, 1.0, 1.0};
  if (g.dim == 3) g.nodes[2] = 64;
  auto read_axes = [&](const std::string& key, auto& dst, auto fallback, bool integral) {
    if (!s.has(key)) {
      for (int a = 0; a < g.dim; ++a) dst[a] = fallback;
      return;
    }
    const json& v = s.raw(key);
    auto one = [&](const json& x) {
      if (integral ? !x.is_number_integer() : !x.is_number()) {
        throw ConfigError("grid." + key + (integral ? " must be integers" : " must be numbers"));
      }
      return x.template get<typename std::decay_t<decltype(dst)>::value_type>();
    };
    if (v.is_array()) {
      if (static_cast<int>(v.size()) != g.dim) throw ConfigError("grid." + key + " needs one entry per axis");
      for (int a = 0; a < g.dim; ++a) dst[a] = one(v[a]);
    } else {
      const auto x = one(v);
      for (int a = 0; a < g.dim; ++a) dst[a] = x;
    }
  };
  read_axes("nodes", g.nodes, 64, true);
  read_axes("length", g.length, 2.0 * 3.14159265358979323846, false);
  if (g.dim == 2) {
    g.nodes[2] = 1;
    g.length[2] = 1.0;
  }
  s.finish();
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  return g;
}

InitialSpec parse_initial(Section s) {
  const std::string kind = s.string("kind", "taylor_green");
  InitialSpec out;
  if (kind == "taylor_green") {
    TaylorGreenInit tg;
    tg.amplitude = s.number("amplitude", tg.amplitude);
    out = tg;
  } else if (kind == "random_spectrum") {
    RandomSpectrumInit rs;
    rs.slope = s.number("slope", rs.slope);
    rs.k0 = s.number("k0", rs.k0);
    rs.amplitude = s.number("amplitude", rs.amplitude);
    if (!(rs.k0 > 0.0)) throw ConfigError("initial.k0 must be positive");
    if (rs.amplitude < 0.0) throw ConfigError("initial.amplitude must be non-negative");
    out = rs;
  } else if (kind == "checkpoint") {
    CheckpointInit ck;
    ck.path = s.string("path", "");
    if (ck.path.empty()) throw ConfigError("initial.path is required for a checkpoint");
    out = ck;
  } else {
    throw ConfigError("initial.kind must be taylor_green, random_spectrum or checkpoint (got '" + kind + "')");
  }
  s.finish();
  return out;
}

json point_json(const std::optional<Point>& p, int dim) {
  if (!p) return nullptr;
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back((*p)[i]);
  return a;
}

}  // namespace

ExponentSpec parse_exponent(const json& j, const std::string& where) {
  Section s(j, where);
  const std::string kind = s.string("kind", "constant");
  ExponentSpec out;
  if (kind == "constant") {
    out = ConstantExponent{s.number("value", 2.0)};
  } else if (kind == "radial_log") {
    RadialLogExponent r;
    r.p_infinity = s.number("p_infinity", r.p_infinity);
    r.coefficient = s.number("coefficient", r.coefficient);
    r.center = s.point("center");
    out = r;
  } else if (kind == "bump") {
    BumpExponent b;
    b.base = s.number("base", b.base);
    b.amplitude = s.number("amplitude", b.amplitude);
    b.width = s.number("width", b.width);
    b.center = s.point("center");
    if (!(b.width > 0.0)) throw ConfigError(where + ".width must be positive");
    out = b;
  } else if (kind == "step") {
    StepExponent st;
    st.low = s.number("low", st.low);
    st.high = s.number("high", st.high);
    st.axis = static_cast<int>(s.integer("axis", st.axis));
    out = st;
  } else {
    throw ConfigError(where + ".kind must be constant, radial_log, bump or step (got '" + kind + "')");
  }
  s.finish();
  return out;
}

json to_json(const ExponentSpec& spec) {
  return std::visit(
      [](const auto& e) -> json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ConstantExponent>) {
          return {{"kind", "constant"}, {"value", e.value}};
        } else if constexpr (std::is_same_v<T, RadialLogExponent>) {
          return {{"kind", "radial_log"},
                  {"p_infinity", e.p_infinity},
                  {"coefficient", e.coefficient},
                  {"center", point_json(e.center, 3)}};
        } else if constexpr (std::is_same_v<T, BumpExponent>) {
          return {{"kind", "bump"},
                  {"base", e.base},
                  {"amplitude", e.amplitude},
                  {"width", e.width},
                  {"center", point_json(e.center, 3)}};
        } else {
          return {{"kind", "step"}, {"low", e.low}, {"high", e.high}, {"axis", e.axis}};
        }
      },
      spec);
}

ExperimentConfig parse_config(const json& j) {
  Section root(j, "");
  ExperimentConfig cfg;
  SimConfig& sim = cfg.sim;

  const long version = root.integer("schema_version", kSchemaVersion);
  if (version != kSchemaVersion) {
    throw ConfigError("schema_version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  cfg.preset = root.string("preset", "");
  sim.grid = parse_grid(root.child("grid"));
  sim.exponent = root.has("exponent") ? parse_exponent(root.raw("exponent")) : ExponentSpec{ConstantExponent{2.0}};
  sim.initial = parse_initial(root.child("initial"));
  const long seed = root.integer("seed", 0);
  if (seed < 0) throw ConfigError("seed must be non-negative");
  sim.seed = static_cast<std::uint64_t>(seed);
  sim.linear_only = root.boolean("linear_only", false);

  {
    Section t = root.child("time");
    sim.dt = t.number("dt", 0.0);
    sim.t_end = t.number("t_end", 1.0);
    sim.record_every = static_cast<int>(t.integer("record_every", 1));
    sim.integrator = parse_enum(t, "integrator", Integrator::imex_heun,
                                {{"imex_heun", Integrator::imex_heun}, {"imex_euler", Integrator::imex_euler}});
    sim.dealias =
        parse_enum(t, "dealias", Dealias::two_thirds, {{"two_thirds", Dealias::two_thirds}, {"none", Dealias::none}});
    sim.cfl = parse_enum(t, "cfl", CflPolicy::warn, {{"warn", CflPolicy::warn}, {"error", CflPolicy::error}});
    t.finish();
  }
  {
    Section s = root.child("small_data");
    sim.small_data.enabled = s.boolean("enabled", false);
    sim.small_data.h1_cap = s.number("h1_cap", sim.small_data.h1_cap);
    sim.small_data_scale = s.number("scale", 1.0);
    s.finish();
  }
  {
    Section m = root.child("monitors");
    sim.monitors.energy = m.boolean("energy", true);
    sim.monitors.enstrophy = m.boolean("enstrophy", true);
    sim.monitors.g_mass = m.boolean("g_mass", true);
    sim.monitors.amplitude = m.boolean("amplitude", false);
    sim.monitors.splitting = m.boolean("splitting", false);
    m.finish();
  }
  {
    Section d = root.child("diagnostics");
    auto& dc = sim.diagnostics;
    dc.C0 = d.number("C0", 1.0);
    dc.split_weight = parse_enum(d, "split_weight", SplitWeight::cubic,
                                 {{"cubic", SplitWeight::cubic}, {"sqrt_inverse", SplitWeight::sqrt_inverse}});
    dc.retain_spectra = d.boolean("retain_spectra", false);
    dc.fit_t0 = d.optional_number("fit_t0");
    dc.fit_t1 = d.optional_number("fit_t1");
    dc.tol_energy_factor = d.number("tol_energy_factor", 10.0);
    d.finish();
  }
  {
    Section o = root.child("output");
    if (o.has("checkpoint_times")) {
      const json& v = o.raw("checkpoint_times");
      if (!v.is_array()) throw ConfigError("output.checkpoint_times must be an array of numbers");
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("output.checkpoint_times must be an array of numbers");
        cfg.output.checkpoint_times.push_back(x.get<double>());
      }
    }
    cfg.output.final_checkpoint = o.boolean("final_checkpoint", false);
    cfg.output.plot = o.boolean("plot", true);
    o.finish();
  }
  root.finish();

  if (sim.dt < 0.0) throw ConfigError("time.dt must be positive (0 selects the default step)");
  if (!(sim.t_end >= 0.0)) throw ConfigError("time.t_end must be non-negative");
  if (sim.record_every < 1) throw ConfigError("time.record_every must be >= 1");
  if (!(sim.diagnostics.C0 > 0.0)) throw ConfigError("diagnostics.C0 must be positive");
  if ((sim.monitors.amplitude || sim.monitors.splitting) && !sim.diagnostics.retain_spectra) {
    throw ConfigError("monitors.amplitude and monitors.splitting need diagnostics.retain_spectra = true");
  }
  if (sim.small_data.enabled && !(sim.small_data.h1_cap > 0.0)) throw ConfigError("small_data.h1_cap must be positive");
  if (const auto* st = std::get_if<StepExponent>(&sim.exponent); st && (st->axis < 0 || st->axis >= sim.grid.dim)) {
    throw ConfigError("exponent.axis must name an axis of the grid");
  }
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  const SimConfig& s = cfg.sim;
  const Grid& g = s.grid;
  json nodes = json::array();
  json length = json::array();
  for (int a = 0; a < g.dim; ++a) {
    nodes.push_back(g.nodes[a]);
    length.push_back(g.length[a]);
  }
  json initial = std::visit(
      [](const auto& e) -> json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, TaylorGreenInit>) {
          return {{"kind", "taylor_green"}, {"amplitude", e.amplitude}};
        } else if constexpr (std::is_same_v<T, RandomSpectrumInit>) {
          return {{"kind", "random_spectrum"}, {"slope", e.slope}, {"k0", e.k0}, {"amplitude", e.amplitude}};
        } else {
          return {{"kind", "checkpoint"}, {"path", e.path}};
        }
      },
      s.initial);
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };

  json j;
  j["schema_version"] = kSchemaVersion;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  j["grid"] = {{"dim", g.dim}, {"nodes", nodes}, {"length", length}};
  j["exponent"] = to_json(s.exponent);
  j["initial"] = initial;
  j["seed"] = s.seed;
  j["linear_only"] = s.linear_only;
  j["time"] = {{"dt", s.dt},
               {"t_end", s.t_end},
               {"record_every", s.record_every},
               {"integrator", to_string(s.integrator)},
               {"dealias", to_string(s.dealias)},
               {"cfl", to_string(s.cfl)}};
  j["small_data"] = {{"enabled", s.small_data.enabled}, {"h1_cap", s.small_data.h1_cap}, {"scale", s.small_data_scale}};
  j["monitors"] = {{"energy", s.monitors.energy},
                   {"enstrophy", s.monitors.enstrophy},
                   {"g_mass", s.monitors.g_mass},
                   {"amplitude", s.monitors.amplitude},
                   {"splitting", s.monitors.splitting}};
  j["diagnostics"] = {{"C0", s.diagnostics.C0},
                      {"split_weight", to_string(s.diagnostics.split_weight)},
                      {"retain_spectra", s.diagnostics.retain_spectra},
                      {"fit_t0", opt(s.diagnostics.fit_t0)},
                      {"fit_t1", opt(s.diagnostics.fit_t1)},
                      {"tol_energy_factor", s.diagnostics.tol_energy_factor}};
  j["output"] = {{"checkpoint_times", cfg.output.checkpoint_times},
                 {"final_checkpoint", cfg.output.final_checkpoint},
                 {"plot", cfg.output.plot}};
  return j;
}

json parse_json_text(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' must look like section.key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override key '" + key + "' descends into a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

json resolve_config(const std::optional<std::string>& config_path, const std::optional<std::string>& preset,
                    const std::vector<std::string>& overrides) {
  json file = config_path ? load_json_file(*config_path) : json::object();
  if (!file.is_object()) throw ConfigError("configuration must be a JSON object");
  std::optional<std::string> base = preset;
  if (!base && file.contains("preset")) {
    if (!file["preset"].is_string()) throw ConfigError("preset must be a string");
    base = file["preset"].get<std::string>();
  }
  json merged = base ? preset_json(*base) : json::object();
  merged.merge_patch(file);
  if (base) merged["preset"] = *base;
  for (const auto& o : overrides) apply_override(merged, o);
  return merged;
}

}  // namespace pxflow::experiment
