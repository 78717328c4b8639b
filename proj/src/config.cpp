#include "execbarrier/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <yaml-cpp/yaml.h>

namespace execbarrier {

namespace {

const std::vector<PresetInfo> kPresets = {
    {"baseline", "single batch under the baseline parameters (or the surrogate process)"},
    {"section5", "single batch under the running-penalty parameters"},
    {"fig1", "double-barrier value function curves for three lambda values"},
    {"fig2", "P1 and P0 schedules with simulated performance bands, one-at-a-time parameter variations"},
    {"fig2b", "P1 performance bands for narrow (1 +/- 0.05) and wide (1 +/- 0.5) barriers"},
    {"fig3", "hitting probabilities by t=1 over lower- and upper-barrier sweeps, P0 and P1"},
    {"table2", "P1/P0 mean and variance of performance at t = 0.02, 0.06, 0.10 per parameter block"},
    {"fig4", "P1' versus Almgren-Chriss inventory and rate trajectories"},
    {"fig5", "terminal liquidation objective histograms, P1' versus Almgren-Chriss"},
};

bool uses_section5(std::string_view preset) {
  return preset == "section5" || preset == "fig4" || preset == "fig5";
}

std::vector<double> uniform_grid(double horizon, double step) {
  const auto n = static_cast<std::size_t>(std::llround(horizon / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) * step;
  return grid;
}

std::string where(const YAML::Node& node, const std::string& key) {
  const YAML::Mark mark = node.Mark();
  std::string out = "key '" + key + "'";
  if (mark.line >= 0) out = "line " + std::to_string(mark.line + 1) + ": " + out;
  return out;
}

std::string scalar_of(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(where(node, key) + ": expected a scalar value");
  return node.Scalar();
}

double to_double(const YAML::Node& node, const std::string& key) {
  const std::string text = scalar_of(node, key);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(where(node, key) + ": '" + text + "' is not a finite number");
  }
  return value;
}

std::uint64_t to_unsigned(const YAML::Node& node, const std::string& key) {
  const std::string text = scalar_of(node, key);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(where(node, key) + ": '" + text + "' is not a non-negative integer");
  }
  return value;
}

bool to_bool(const YAML::Node& node, const std::string& key) {
  const std::string text = scalar_of(node, key);
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(where(node, key) + ": expected true or false");
}

void require_map(const YAML::Node& node, const std::string& key) {
  if (!node.IsMap()) throw ConfigError(where(node, key) + ": expected a mapping");
}

template <class Handler>
void for_each_key(const YAML::Node& section, const std::string& section_name,
                  const std::set<std::string>& allowed, Handler&& handle) {
  require_map(section, section_name);
  for (const auto& entry : section) {
    const std::string key = entry.first.Scalar();
    const std::string full = section_name.empty() ? key : section_name + "." + key;
    if (!allowed.contains(key)) throw ConfigError(where(entry.first, full) + ": unknown key");
    handle(key, entry.second, full);
  }
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

const std::vector<PresetInfo>& list_presets() { return kPresets; }

bool is_known_preset(std::string_view name) {
  return std::any_of(kPresets.begin(), kPresets.end(), [&](const PresetInfo& p) { return p.name == name; });
}

RunConfig preset_defaults(std::string_view preset) {
  if (!is_known_preset(preset)) throw ConfigError("unknown preset '" + std::string(preset) + "'");
  RunConfig config;
  config.preset = std::string(preset);
  if (uses_section5(preset)) {
    config.params = ModelParams::section5();
    config.running_penalty = true;
    config.price_floor = 19.9;
  } else {
    config.params = ModelParams::baseline();
  }
  config.strategy = "p1";
  if (preset == "table2") {
    config.sample_times = {0.02, 0.06, 0.10};
  } else {
    config.sample_times = uniform_grid(config.params.t_max, 0.01);
  }
  config.output_dir = "out/" + std::string(preset);
  return config;
}

void validate(const RunConfig& config) {
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  if (config.n_paths == 0) throw ConfigError("run.paths: must be at least 1");
  if (!(config.dt > 0.0)) throw ConfigError("run.dt: must be positive");
  if (config.threads == 0) throw ConfigError("run.threads: must be at least 1");
  if (config.histogram_bins < 2) throw ConfigError("run.histogram_bins: must be at least 2");
  if (config.v_max && !(*config.v_max >= 0.0)) throw ConfigError("run.v_max: must be non-negative");
  if (config.surrogate.enabled && !(config.surrogate.s > 0.0)) throw ConfigError("run.surrogate.s: must be positive");
  for (double t : config.sample_times) {
    if (t < 0.0 || t > config.params.t_max) throw ConfigError("run.sample_times: times must lie in [0, t_max]");
    const double steps = std::round(t / config.dt);
    if (std::abs(steps * config.dt - t) > 1e-12) {
      throw ConfigError("run.sample_times: " + format_double(t) + " is not a multiple of dt");
    }
  }
  if (!std::is_sorted(config.sample_times.begin(), config.sample_times.end())) {
    throw ConfigError("run.sample_times: must be sorted");
  }
}

RunConfig parse_config(std::string_view document, std::optional<std::string> preset_override) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::Exception& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsNull()) require_map(root, "<document>");

  std::string preset = "baseline";
  if (root["preset"]) preset = scalar_of(root["preset"], "preset");
  if (preset_override) preset = *preset_override;
  RunConfig config = preset_defaults(preset);
  if (root.IsNull()) {
    validate(config);
    return config;
  }

  bool sample_times_given = false;
  for_each_key(root, "", {"preset", "params", "run", "output"}, [&](const std::string& key, const YAML::Node& node,
                                                                     const std::string&) {
    if (key == "params") {
      ModelParams& p = config.params;
      for_each_key(node, "params",
                   {"b", "l", "gamma", "sigma", "phi", "q0", "s0", "x0", "k_lower", "h_upper", "t_max"},
                   [&](const std::string& k, const YAML::Node& v, const std::string& full) {
                     const double value = to_double(v, full);
                     if (k == "b") p.b = value;
                     else if (k == "l") p.l = value;
                     else if (k == "gamma") p.gamma = value;
                     else if (k == "sigma") p.sigma = value;
                     else if (k == "phi") p.phi = value;
                     else if (k == "q0") p.q0 = value;
                     else if (k == "s0") p.s0 = value;
                     else if (k == "x0") p.x0 = value;
                     else if (k == "k_lower") p.k_lower = value;
                     else if (k == "h_upper") p.h_upper = value;
                     else if (k == "t_max") p.t_max = value;
                   });
    } else if (key == "run") {
      for_each_key(
          node, "run",
          {"strategy", "paths", "dt", "sample_times", "seed", "threads", "running_penalty", "v_max", "price_floor",
           "external_strategy", "histogram_bins", "surrogate"},
          [&](const std::string& k, const YAML::Node& v, const std::string& full) {
            if (k == "strategy") config.strategy = scalar_of(v, full);
            else if (k == "paths") config.n_paths = to_unsigned(v, full);
            else if (k == "dt") config.dt = to_double(v, full);
            else if (k == "seed") config.master_seed = to_unsigned(v, full);
            else if (k == "threads") config.threads = static_cast<unsigned>(to_unsigned(v, full));
            else if (k == "running_penalty") config.running_penalty = to_bool(v, full);
            else if (k == "histogram_bins") config.histogram_bins = to_unsigned(v, full);
            else if (k == "v_max") config.v_max = v.IsNull() ? std::nullopt : std::optional(to_double(v, full));
            else if (k == "price_floor") {
              config.price_floor = v.IsNull() ? std::nullopt : std::optional(to_double(v, full));
            } else if (k == "external_strategy") {
              config.external_strategy = v.IsNull() ? std::nullopt : std::optional(scalar_of(v, full));
            } else if (k == "sample_times") {
              if (!v.IsSequence()) throw ConfigError(where(v, full) + ": expected a list of times");
              config.sample_times.clear();
              for (const auto& item : v) config.sample_times.push_back(to_double(item, full));
              sample_times_given = true;
            } else if (k == "surrogate") {
              for_each_key(v, full, {"enabled", "mu", "s"},
                           [&](const std::string& sk, const YAML::Node& sv, const std::string& sfull) {
                             if (sk == "enabled") config.surrogate.enabled = to_bool(sv, sfull);
                             else if (sk == "mu") config.surrogate.mu = to_double(sv, sfull);
                             else if (sk == "s") config.surrogate.s = to_double(sv, sfull);
                           });
            }
          });
    } else if (key == "output") {
      for_each_key(node, "output", {"dir"}, [&](const std::string&, const YAML::Node& v, const std::string& full) {
        config.output_dir = scalar_of(v, full);
      });
    }
  });

  // A changed horizon moves the default sampling grid with it.
  if (!sample_times_given && config.preset != "table2") {
    config.sample_times = uniform_grid(config.params.t_max, 0.01);
  }
  validate(config);
  return config;
}

std::string emit_config(const RunConfig& c) {
  YAML::Emitter out;
  const auto num = [&](double v) { out << format_double(v); };
  out << YAML::BeginMap;
  out << YAML::Key << "preset" << YAML::Value << c.preset;

  out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  const ModelParams& p = c.params;
  const std::pair<const char*, double> fields[] = {
      {"b", p.b},   {"l", p.l},   {"gamma", p.gamma},     {"sigma", p.sigma},     {"phi", p.phi},     {"q0", p.q0},
      {"s0", p.s0}, {"x0", p.x0}, {"k_lower", p.k_lower}, {"h_upper", p.h_upper}, {"t_max", p.t_max},
  };
  for (const auto& [name, value] : fields) {
    out << YAML::Key << name << YAML::Value;
    num(value);
  }
  out << YAML::EndMap;

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "strategy" << YAML::Value << YAML::DoubleQuoted << c.strategy;
  out << YAML::Key << "paths" << YAML::Value << c.n_paths;
  out << YAML::Key << "dt" << YAML::Value;
  num(c.dt);
  out << YAML::Key << "sample_times" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double t : c.sample_times) num(t);
  out << YAML::EndSeq;
  out << YAML::Key << "seed" << YAML::Value << c.master_seed;
  out << YAML::Key << "threads" << YAML::Value << c.threads;
  out << YAML::Key << "running_penalty" << YAML::Value << (c.running_penalty ? "true" : "false");
  out << YAML::Key << "v_max" << YAML::Value;
  if (c.v_max) num(*c.v_max); else out << YAML::Null;
  out << YAML::Key << "price_floor" << YAML::Value;
  if (c.price_floor) num(*c.price_floor); else out << YAML::Null;
  out << YAML::Key << "external_strategy" << YAML::Value;
  if (c.external_strategy) out << YAML::DoubleQuoted << *c.external_strategy; else out << YAML::Null;
  out << YAML::Key << "histogram_bins" << YAML::Value << c.histogram_bins;
  out << YAML::Key << "surrogate" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << (c.surrogate.enabled ? "true" : "false");
  out << YAML::Key << "mu" << YAML::Value;
  num(c.surrogate.mu);
  out << YAML::Key << "s" << YAML::Value;
  num(c.surrogate.s);
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << YAML::DoubleQuoted << c.output_dir.string();
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace execbarrier
