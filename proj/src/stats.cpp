#include "execbarrier/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace execbarrier {

namespace {

void require_nonempty(std::span<const PathResult> results) {
  if (results.empty()) throw std::invalid_argument("empty result collection");
}

std::size_t sample_slot(const PathResult& path, double t) {
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    if (std::abs(path.samples[i].t - t) <= 1e-12) return i;
  }
  throw std::invalid_argument("time " + std::to_string(t) + " is not on the sampling grid");
}

std::vector<double> values_at(std::span<const PathResult> results, double t) {
  const std::size_t slot = sample_slot(results.front(), t);
  std::vector<double> values;
  values.reserve(results.size());
  for (const PathResult& path : results) {
    if (slot >= path.samples.size()) throw std::invalid_argument("paths carry different sampling grids");
    values.push_back(path.samples[slot].y);
  }
  return values;
}

std::pair<double, double> mean_and_variance(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, ss / static_cast<double>(values.size() - 1)};
}

}  // namespace

HitProbabilities hitting_probabilities(std::span<const PathResult> results, double by_time) {
  require_nonempty(results);
  HitProbabilities hp;
  hp.by_time = by_time;
  hp.n_paths = results.size();
  for (const PathResult& path : results) {
    if (path.stop_time <= by_time + 1e-12) {
      if (path.stop_cause == StopCause::upper) ++hp.n_upper;
      if (path.stop_cause == StopCause::lower) ++hp.n_lower;
    }
  }
  hp.n_neither = hp.n_paths - hp.n_upper - hp.n_lower;
  const double n = static_cast<double>(hp.n_paths);
  hp.p_upper = static_cast<double>(hp.n_upper) / n;
  hp.p_lower = static_cast<double>(hp.n_lower) / n;
  hp.p_neither = static_cast<double>(hp.n_neither) / n;
  hp.se_upper = std::sqrt(hp.p_upper * (1.0 - hp.p_upper) / n);
  hp.se_lower = std::sqrt(hp.p_lower * (1.0 - hp.p_lower) / n);
  return hp;
}

std::vector<MomentRow> moment_table(std::span<const PathResult> results, std::span<const double> sample_times) {
  require_nonempty(results);
  std::vector<MomentRow> rows;
  rows.reserve(sample_times.size());
  for (double t : sample_times) {
    const auto [mean, var] = mean_and_variance(values_at(results, t));
    rows.push_back(MomentRow{t, mean, var});
  }
  return rows;
}

double nearest_rank_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  const auto n = values.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

std::vector<BandRow> quantile_band(std::span<const PathResult> results, std::span<const double> sample_times,
                                   double lo, double hi) {
  require_nonempty(results);
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw std::invalid_argument("quantile band needs 0 <= lo < hi <= 1");
  std::vector<BandRow> rows;
  rows.reserve(sample_times.size());
  for (double t : sample_times) {
    const std::vector<double> values = values_at(results, t);
    rows.push_back(BandRow{t, nearest_rank_quantile(values, lo), nearest_rank_quantile(values, hi)});
  }
  return rows;
}

std::vector<double> terminal_values(std::span<const PathResult> results, TerminalStatistic statistic) {
  std::vector<double> values;
  values.reserve(results.size());
  for (const PathResult& path : results) {
    values.push_back(statistic == TerminalStatistic::performance ? path.final_y : path.objective.total());
  }
  return values;
}

Histogram terminal_histogram(std::span<const PathResult> results, TerminalStatistic statistic, std::size_t n_bins) {
  require_nonempty(results);
  if (n_bins < 2) throw std::invalid_argument("histogram needs at least two bins");
  const std::vector<double> values = terminal_values(results, statistic);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  Histogram hist;
  std::tie(hist.sample_mean, hist.sample_variance) = mean_and_variance(values);
  if (lo == hi) {
    hist.edges = {lo, hi};
    hist.counts = {values.size()};
    return hist;
  }
  const double width = (hi - lo) / static_cast<double>(n_bins);
  hist.edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) hist.edges[i] = lo + width * static_cast<double>(i);
  hist.edges.back() = hi;
  hist.counts.assign(n_bins, 0);
  for (double v : values) {
    auto bin = static_cast<std::size_t>((v - lo) / width);
    ++hist.counts[std::min(bin, n_bins - 1)];
  }
  return hist;
}

ExperimentReport summarize(std::span<const PathResult> results, const SimulationSetup& setup,
                           const std::string& strategy_label, std::span<const double> by_times,
                           TerminalStatistic statistic, std::size_t n_bins) {
  require_nonempty(results);
  ExperimentReport report;
  const auto moments = moment_table(results, setup.sample_times);
  const auto band = quantile_band(results, setup.sample_times);
  report.rows.reserve(moments.size());
  for (std::size_t i = 0; i < moments.size(); ++i) {
    report.rows.push_back(ReportRow{moments[i].t, moments[i].mean, moments[i].variance, band[i].lo, band[i].hi});
  }
  for (double t : by_times) report.hit_probabilities.push_back(hitting_probabilities(results, t));
  report.histogram = terminal_histogram(results, statistic, n_bins);
  report.metadata.strategy = strategy_label;
  report.metadata.params = setup.params;
  report.metadata.n_paths = results.size();
  report.metadata.dt = setup.dt;
  report.metadata.master_seed = setup.seed.master_seed;
  report.metadata.running_penalty = setup.running_penalty;
  return report;
}

SweepResult barrier_sweep(const Strategy& strategy, const SimulationSetup& setup,
                          std::span<const DoubleBarrier> grid, std::size_t n_paths, double by_time,
                          unsigned workers) {
  SweepResult sweep;
  const double y0 = setup.params.initial_performance();
  for (const DoubleBarrier& pair : grid) {
    if (!(pair.k_lower < y0 && y0 < pair.h_upper)) {
      std::ostringstream msg;
      msg << "skipped barrier pair (k=" << pair.k_lower << ", h=" << pair.h_upper
          << "): initial performance " << y0 << " not strictly inside";
      sweep.diagnostics.push_back(msg.str());
      continue;
    }
    SimulationSetup point = setup;
    point.params.k_lower = pair.k_lower;
    point.params.h_upper = pair.h_upper;
    point.rules.barrier = pair;
    const auto results = run_batch(strategy, point, n_paths, workers);
    SweepPoint sp;
    sp.k_lower = pair.k_lower;
    sp.h_upper = pair.h_upper;
    sp.probabilities = hitting_probabilities(results, by_time);
    sp.difference = sp.probabilities.p_upper - sp.probabilities.p_lower;
    sweep.points.push_back(sp);
  }
  return sweep;
}

}  // namespace execbarrier
