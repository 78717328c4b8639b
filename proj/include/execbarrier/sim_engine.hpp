#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "execbarrier/model.hpp"
#include "execbarrier/strategies.hpp"

namespace execbarrier {

enum class StopCause { upper, lower, price_floor, depleted, horizon, aborted };

std::string_view to_string(StopCause cause);

struct DoubleBarrier {
  double k_lower;
  double h_upper;
};

/// First-to-trigger composition of the stopping rules. The layout admits at
/// most one double barrier and always carries a horizon. Rules are checked on
/// the simulation grid after each step, in the order barrier, price floor,
/// depletion, horizon.
struct StoppingRules {
  std::optional<DoubleBarrier> barrier;
  std::optional<double> price_floor;
  std::optional<double> depletion_epsilon;  // stop once q <= epsilon
  double horizon = 1.0;

  /// Barriers (k, h) from params, depletion at 1e-8 * q0, horizon t_max.
  static StoppingRules standard(const ModelParams& params);
  /// Liquidation stopping time: price floor, depletion, horizon; no barriers.
  static StoppingRules liquidation(const ModelParams& params, double price_floor);
};

struct SeedSpec {
  std::uint64_t master_seed = 42;
};

struct SimulationSetup {
  ModelParams params;
  StoppingRules rules;
  double dt = 1e-4;
  std::vector<double> sample_times;  // each a multiple of dt within 1e-12
  SeedSpec seed;
  bool running_penalty = false;      // subtract phi * int Q^2 from Y

  /// Step index of each sample time; throws if a time is off the grid,
  /// negative, or beyond the horizon.
  std::vector<std::size_t> sample_steps() const;
  std::size_t horizon_steps() const;
};

struct PathSample {
  double t = 0.0;
  double x = 0.0;
  double q = 0.0;
  double s = 0.0;
  double y = 0.0;

  bool operator==(const PathSample&) const = default;
};

struct ObjectiveTerms {
  double trading_revenue = 0.0;           // int (S - l v) v du
  double terminal_inventory_value = 0.0;  // Q(tau) (S(tau) - gamma Q(tau))
  double running_penalty = 0.0;           // phi int Q^2 du

  double total() const { return trading_revenue + terminal_inventory_value - running_penalty; }
  bool operator==(const ObjectiveTerms&) const = default;
};

struct PathResult {
  StopCause stop_cause = StopCause::horizon;
  double stop_time = 0.0;
  std::vector<PathSample> samples;  // values after the stop are frozen
  std::size_t clamp_events = 0;     // inventory clamps plus v_max caps
  ObjectiveTerms objective;
  double final_y = 0.0;
  std::string diagnostic;           // set when the path was aborted

  bool hit_barrier() const { return stop_cause == StopCause::upper || stop_cause == StopCause::lower; }
  bool operator==(const PathResult&) const = default;
};

/// Euler-Maruyama path under `strategy`. Noise for step j is variate j of the
/// (master_seed, path_index) stream, so the path does not depend on how a
/// batch is scheduled. A strategy returning a negative or non-finite rate
/// aborts the path with StopCause::aborted and a diagnostic.
PathResult simulate_path(const Strategy& strategy, const SimulationSetup& setup, std::size_t path_index);

/// Paths 0..n_paths-1 in index order; `workers` only affects wall time.
std::vector<PathResult> run_batch(const Strategy& strategy, const SimulationSetup& setup, std::size_t n_paths,
                                  unsigned workers = 1);

/// Constant-coefficient test process dY = mu dt + s dW started at y0, used to
/// validate the barrier estimators against the closed-form two-barrier law.
struct SurrogateProcess {
  double mu = 0.0;
  double s = 0.1;
  double y0 = 1.0;
};

/// Only the barrier and horizon rules of `setup` apply; samples carry y only.
PathResult simulate_surrogate_path(const SurrogateProcess& process, const SimulationSetup& setup,
                                   std::size_t path_index);
std::vector<PathResult> run_surrogate_batch(const SurrogateProcess& process, const SimulationSetup& setup,
                                            std::size_t n_paths, unsigned workers = 1);

/// P(hit h before k) for dY = mu dt + s dW, continuous monitoring.
double surrogate_upper_probability(const SurrogateProcess& process, double k_lower, double h_upper);

}  // namespace execbarrier
