#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "execbarrier/config.hpp"
#include "execbarrier/sim_engine.hpp"
#include "execbarrier/stats.hpp"

namespace execbarrier {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal form; the only number format used in output files.
std::string format_number(double value);

void write_moments_csv(std::ostream& out, std::span<const ReportRow> rows);
void write_probabilities_csv(std::ostream& out, std::span<const HitProbabilities> rows);
void write_histogram_csv(std::ostream& out, const Histogram& histogram);
nlohmann::json report_to_json(const ExperimentReport& report);
nlohmann::json params_to_json(const ModelParams& params);

/// One parameter changed from the base set, everything else held fixed.
struct ParameterVariation {
  std::string parameter;  // "b", "l", "gamma", "sigma" or "baseline"
  double value = 0.0;
  ModelParams params;

  std::string tag() const;
};

/// The eight blocks of the table2 preset: b in {0.001, 0.002}, l in {0.001, 0.002},
/// gamma in {0.05, 0.1}, sigma in {0.1, 0.2}, in that order.
std::vector<ParameterVariation> table2_variations(const ModelParams& base);

/// Distinct parameter sets of the same grid (baseline plus the four changes).
std::vector<ParameterVariation> figure_variations(const ModelParams& base);

std::vector<DoubleBarrier> lower_barrier_sweep(const ModelParams& base);
std::vector<DoubleBarrier> upper_barrier_sweep(const ModelParams& base);

struct Table2Row {
  std::string parameter;
  double value = 0.0;
  double t = 0.0;
  double p1_mean = 0.0;
  double p1_variance = 0.0;
  double p0_mean = 0.0;
  double p0_variance = 0.0;
};

/// Simulates P1 and P0 for every table2 block under the standard stopping
/// rules, sampling at config.sample_times. P0 uses T = params.t_max.
std::vector<Table2Row> run_table2(const RunConfig& config);

/// Simulation setup for a config: the standard barrier rules for liquidation
/// presets, the price-floor stopping time for the running-penalty presets.
SimulationSetup make_setup(const RunConfig& config, const ModelParams& params);

/// The configured strategy with the optional v_max cap applied.
Strategy make_configured_strategy(const std::string& label, const RunConfig& config, const ModelParams& params);

struct ExperimentOutput {
  std::vector<std::filesystem::path> files;  // data files, in emission order
  std::filesystem::path manifest;
  double wall_seconds = 0.0;
};

/// Runs the preset named in `config` and writes its files under
/// config.output_dir, followed by manifest.json. Files are staged and only
/// moved into place once the whole preset succeeded; on error nothing from
/// this run is left behind and the exception propagates.
ExperimentOutput run_experiment(const RunConfig& config);

}  // namespace execbarrier
