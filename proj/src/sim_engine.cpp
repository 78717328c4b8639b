#include "execbarrier/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "execbarrier/rng.hpp"

namespace execbarrier {

namespace {

constexpr double kGridTolerance = 1e-12;

std::size_t grid_index(double t, double dt, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(what) + " must be non-negative");
  const double steps = std::round(t / dt);
  if (std::abs(steps * dt - t) > kGridTolerance) {
    throw std::invalid_argument(std::string(what) + " is not a multiple of dt");
  }
  return static_cast<std::size_t>(steps);
}

PathSample make_sample(const MarketState& state, double y) { return PathSample{state.t, state.x, state.q, state.s, y}; }

// Holds the sample slots of one path and fills the tail once the path stops.
class SampleRecorder {
 public:
  explicit SampleRecorder(const std::vector<std::size_t>& steps) : steps_(steps) {}

  void record(std::size_t step, const PathSample& sample, std::vector<PathSample>& out) {
    while (next_ < steps_.size() && steps_[next_] == step) {
      out.push_back(sample);
      ++next_;
    }
  }

  void freeze(const PathSample& sample, double dt, std::vector<PathSample>& out) {
    for (; next_ < steps_.size(); ++next_) {
      PathSample frozen = sample;
      frozen.t = static_cast<double>(steps_[next_]) * dt;
      out.push_back(frozen);
    }
  }

 private:
  const std::vector<std::size_t>& steps_;
  std::size_t next_ = 0;
};

template <class PathFn>
std::vector<PathResult> parallel_paths(std::size_t n_paths, unsigned workers, PathFn&& path_fn) {
  if (n_paths == 0) throw std::invalid_argument("a batch needs at least one path");
  std::vector<PathResult> results(n_paths);
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(n_paths)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n_paths; ++i) results[i] = path_fn(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n_paths; i = next.fetch_add(1)) {
          try {
            results[i] = path_fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(n_paths);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

std::string_view to_string(StopCause cause) {
  switch (cause) {
    case StopCause::upper: return "upper";
    case StopCause::lower: return "lower";
    case StopCause::price_floor: return "price_floor";
    case StopCause::depleted: return "depleted";
    case StopCause::horizon: return "horizon";
    case StopCause::aborted: return "aborted";
  }
  return "unknown";
}

StoppingRules StoppingRules::standard(const ModelParams& params) {
  StoppingRules rules;
  rules.barrier = DoubleBarrier{params.k_lower, params.h_upper};
  rules.depletion_epsilon = 1e-8 * params.q0;
  rules.horizon = params.t_max;
  return rules;
}

StoppingRules StoppingRules::liquidation(const ModelParams& params, double price_floor) {
  StoppingRules rules;
  rules.price_floor = price_floor;
  rules.depletion_epsilon = 1e-8 * params.q0;
  rules.horizon = params.t_max;
  return rules;
}

std::vector<std::size_t> SimulationSetup::sample_steps() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const std::size_t last = horizon_steps();
  std::vector<std::size_t> steps;
  steps.reserve(sample_times.size());
  for (double t : sample_times) {
    const std::size_t idx = grid_index(t, dt, "sample time");
    if (idx > last) throw std::invalid_argument("sample time beyond the simulation horizon");
    steps.push_back(idx);
  }
  if (!std::is_sorted(steps.begin(), steps.end())) throw std::invalid_argument("sample times must be sorted");
  return steps;
}

std::size_t SimulationSetup::horizon_steps() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const std::size_t n = grid_index(rules.horizon, dt, "horizon");
  if (n == 0) throw std::invalid_argument("horizon must cover at least one step");
  return n;
}

PathResult simulate_path(const Strategy& strategy, const SimulationSetup& setup, std::size_t path_index) {
  const ModelParams& params = setup.params;
  const StoppingRules& rules = setup.rules;
  const double dt = setup.dt;
  const std::size_t n_steps = setup.horizon_steps();
  const std::vector<std::size_t> sample_steps = setup.sample_steps();
  const double sqrt_dt = std::sqrt(dt);

  NormalStream noise(setup.seed.master_seed, path_index);
  PathResult result;
  result.samples.reserve(sample_steps.size());
  SampleRecorder recorder(sample_steps);

  MarketState state = initial_state(params);
  PerformanceSpec perf{setup.running_penalty, 0.0};
  double penalty = 0.0;  // phi * int Q^2 regardless of whether Y includes it
  double y = performance(state, params, perf);
  recorder.record(0, make_sample(state, y), result.samples);

  std::size_t step = 0;
  bool stopped = false;
  while (!stopped) {
    const double t = static_cast<double>(step) * dt;
    const double z = noise.next();
    const Strategy::Decision decision = strategy.decide(t, state, params);
    if (!std::isfinite(decision.rate) || decision.rate < 0.0) {
      result.stop_cause = StopCause::aborted;
      result.diagnostic = "strategy '" + strategy.label() + "' returned invalid rate " +
                          std::to_string(decision.rate) + " at t=" + std::to_string(t);
      break;
    }
    if (decision.capped) ++result.clamp_events;

    penalty += params.phi * state.q * state.q * dt;
    StepOutcome next = step_dynamics(state, decision.rate, dt, sqrt_dt * z, params);
    if (next.clamped) ++result.clamp_events;
    state = next.state;
    ++step;
    state.t = static_cast<double>(step) * dt;
    perf.accumulated_penalty = penalty;
    y = performance(state, params, perf);
    recorder.record(step, make_sample(state, y), result.samples);

    stopped = true;
    if (rules.barrier && y >= rules.barrier->h_upper) {
      result.stop_cause = StopCause::upper;
    } else if (rules.barrier && y <= rules.barrier->k_lower) {
      result.stop_cause = StopCause::lower;
    } else if (rules.price_floor && state.s <= *rules.price_floor) {
      result.stop_cause = StopCause::price_floor;
    } else if (rules.depletion_epsilon && state.q <= *rules.depletion_epsilon) {
      result.stop_cause = StopCause::depleted;
    } else if (step >= n_steps) {
      result.stop_cause = StopCause::horizon;
    } else {
      stopped = false;
    }
  }

  result.stop_time = state.t;
  result.final_y = y;
  result.objective.trading_revenue = state.x - params.x0;
  result.objective.terminal_inventory_value = state.q * (state.s - params.gamma * state.q);
  result.objective.running_penalty = penalty;
  recorder.freeze(make_sample(state, y), dt, result.samples);
  return result;
}

std::vector<PathResult> run_batch(const Strategy& strategy, const SimulationSetup& setup, std::size_t n_paths,
                                  unsigned workers) {
  setup.sample_steps();  // surface grid errors before any thread starts
  return parallel_paths(n_paths, workers, [&](std::size_t i) { return simulate_path(strategy, setup, i); });
}

PathResult simulate_surrogate_path(const SurrogateProcess& process, const SimulationSetup& setup,
                                   std::size_t path_index) {
  const double dt = setup.dt;
  const std::size_t n_steps = setup.horizon_steps();
  const std::vector<std::size_t> sample_steps = setup.sample_steps();
  const double sqrt_dt = std::sqrt(dt);
  const auto& barrier = setup.rules.barrier;

  NormalStream noise(setup.seed.master_seed, path_index);
  PathResult result;
  SampleRecorder recorder(sample_steps);
  double y = process.y0;
  recorder.record(0, PathSample{0.0, 0.0, 0.0, 0.0, y}, result.samples);

  std::size_t step = 0;
  for (;;) {
    y += process.mu * dt + process.s * sqrt_dt * noise.next();
    ++step;
    const double t = static_cast<double>(step) * dt;
    recorder.record(step, PathSample{t, 0.0, 0.0, 0.0, y}, result.samples);
    if (barrier && y >= barrier->h_upper) {
      result.stop_cause = StopCause::upper;
      break;
    }
    if (barrier && y <= barrier->k_lower) {
      result.stop_cause = StopCause::lower;
      break;
    }
    if (step >= n_steps) {
      result.stop_cause = StopCause::horizon;
      break;
    }
  }
  result.stop_time = static_cast<double>(step) * dt;
  result.final_y = y;
  recorder.freeze(PathSample{result.stop_time, 0.0, 0.0, 0.0, y}, dt, result.samples);
  return result;
}

std::vector<PathResult> run_surrogate_batch(const SurrogateProcess& process, const SimulationSetup& setup,
                                            std::size_t n_paths, unsigned workers) {
  setup.sample_steps();
  return parallel_paths(n_paths, workers,
                        [&](std::size_t i) { return simulate_surrogate_path(process, setup, i); });
}

double surrogate_upper_probability(const SurrogateProcess& process, double k_lower, double h_upper) {
  if (!(k_lower < process.y0 && process.y0 < h_upper)) {
    throw std::invalid_argument("surrogate start must lie strictly between the barriers");
  }
  if (!(process.s > 0.0)) throw std::invalid_argument("surrogate volatility must be positive");
  const double a = 2.0 * process.mu / (process.s * process.s);
  if (a == 0.0) return (process.y0 - k_lower) / (h_upper - k_lower);
  // Shift by the barrier that keeps every exponent non-positive.
  if (a > 0.0) return std::expm1(-a * (process.y0 - k_lower)) / std::expm1(-a * (h_upper - k_lower));
  return 1.0 - std::expm1(a * (h_upper - process.y0)) / std::expm1(a * (h_upper - k_lower));
}

}  // namespace execbarrier
