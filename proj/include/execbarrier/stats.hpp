#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "execbarrier/model.hpp"
#include "execbarrier/sim_engine.hpp"
#include "execbarrier/strategies.hpp"

namespace execbarrier {

struct HitProbabilities {
  double by_time = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_upper = 0;
  std::size_t n_lower = 0;
  std::size_t n_neither = 0;
  double p_upper = 0.0;
  double p_lower = 0.0;
  double p_neither = 0.0;
  double se_upper = 0.0;  // sqrt(p (1 - p) / n)
  double se_lower = 0.0;

  bool operator==(const HitProbabilities&) const = default;
};

/// Fractions of paths stopped at the upper / lower barrier no later than
/// `by_time`; everything else counts as neither.
HitProbabilities hitting_probabilities(std::span<const PathResult> results, double by_time);

struct MomentRow {
  double t = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for a single path

  bool operator==(const MomentRow&) const = default;
};

/// Mean and variance of Y at each requested sample time. Stopped paths keep
/// contributing their frozen value.
std::vector<MomentRow> moment_table(std::span<const PathResult> results, std::span<const double> sample_times);

struct BandRow {
  double t = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const BandRow&) const = default;
};

/// Nearest-rank empirical quantile: the ceil(p n)-th smallest value (p = 0
/// gives the minimum).
double nearest_rank_quantile(std::vector<double> values, double p);

std::vector<BandRow> quantile_band(std::span<const PathResult> results, std::span<const double> sample_times,
                                   double lo = 0.05, double hi = 0.95);

enum class TerminalStatistic { performance, p5_objective };

struct Histogram {
  std::vector<double> edges;  // size = counts.size() + 1
  std::vector<std::size_t> counts;
  double sample_mean = 0.0;
  double sample_variance = 0.0;

  bool operator==(const Histogram&) const = default;
};

std::vector<double> terminal_values(std::span<const PathResult> results, TerminalStatistic statistic);

/// Equal-width bins over [min, max]. When every value is equal the
/// histogram collapses to one zero-width bin holding all paths.
Histogram terminal_histogram(std::span<const PathResult> results, TerminalStatistic statistic, std::size_t n_bins);

struct ReportRow {
  double t = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;

  bool operator==(const ReportRow&) const = default;
};

struct ReportMetadata {
  std::string strategy;
  ModelParams params;
  std::size_t n_paths = 0;
  double dt = 0.0;
  std::uint64_t master_seed = 0;
  bool running_penalty = false;
  std::string post_stop_convention = "frozen-at-stop values carried to later sample times";

  bool operator==(const ReportMetadata&) const = default;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<HitProbabilities> hit_probabilities;
  Histogram histogram;
  ReportMetadata metadata;

  bool operator==(const ExperimentReport&) const = default;
};

/// Moments, 5-95% band, hit probabilities at each `by_times` entry and a
/// terminal histogram for one batch.
ExperimentReport summarize(std::span<const PathResult> results, const SimulationSetup& setup,
                           const std::string& strategy_label, std::span<const double> by_times,
                           TerminalStatistic statistic = TerminalStatistic::performance, std::size_t n_bins = 50);

struct SweepPoint {
  double k_lower = 0.0;
  double h_upper = 0.0;
  HitProbabilities probabilities;
  double difference = 0.0;  // P(upper) - P(lower)
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<std::string> diagnostics;  // one per skipped grid point
};

/// Re-runs the batch once per (k, h) pair, keeping everything else from
/// `setup`; pairs that do not bracket Y0 are skipped with a diagnostic.
SweepResult barrier_sweep(const Strategy& strategy, const SimulationSetup& setup,
                          std::span<const DoubleBarrier> grid, std::size_t n_paths, double by_time,
                          unsigned workers = 1);

}  // namespace execbarrier
