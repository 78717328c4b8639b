#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "execbarrier/model.hpp"

namespace execbarrier {

/// Parse or validation failure in a run configuration. The message carries
/// the offending key and, for syntax errors, the line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SurrogateConfig {
  bool enabled = false;
  double mu = 0.0;
  double s = 0.1;

  bool operator==(const SurrogateConfig&) const = default;
};

struct RunConfig {
  std::string preset = "baseline";
  ModelParams params;
  std::string strategy = "p1";
  std::size_t n_paths = 10000;
  double dt = 1e-4;
  std::vector<double> sample_times;
  std::uint64_t master_seed = 42;
  unsigned threads = 1;
  bool running_penalty = false;
  std::optional<double> v_max;
  std::optional<double> price_floor;
  std::optional<std::string> external_strategy;  // extra strategy for fig4/fig5
  std::size_t histogram_bins = 50;
  SurrogateConfig surrogate;
  std::filesystem::path output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& list_presets();
bool is_known_preset(std::string_view name);

/// Fully populated defaults for a preset. Liquidation presets use the
/// baseline parameter set; "section5", "fig4" and "fig5" use the running
/// penalty set with a price floor of 19.9.
RunConfig preset_defaults(std::string_view preset);

/// Reads a YAML document with optional top-level keys `preset`, `params`,
/// `run` and `output`. Keys absent from the document take the preset
/// defaults; unknown keys and invariant violations raise ConfigError.
/// `preset_override` (the command line --preset) wins over the document.
RunConfig parse_config(std::string_view document, std::optional<std::string> preset_override = std::nullopt);

/// Serializes every field so that parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Throws ConfigError on the first violated invariant.
void validate(const RunConfig& config);

}  // namespace execbarrier
