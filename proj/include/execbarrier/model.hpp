#pragma once

// Market dynamics with linear permanent/temporary impact and the broker's
// performance mark Y = X + Q (S - gamma Q), optionally net of a running
// inventory penalty phi * int Q^2.

namespace execbarrier {

struct ModelParams {
  double b = 0.001;      // permanent impact
  double l = 0.001;      // temporary impact
  double gamma = 0.1;    // slippage cost
  double sigma = 0.1;    // price volatility
  double phi = 0.0;      // running inventory penalty
  double q0 = 1.0;
  double s0 = 1.1;       // 1 + gamma so that Y0 = 1 with Q0 = 1
  double x0 = 0.0;
  double k_lower = 0.95;
  double h_upper = 1.05;
  double t_max = 1.0;

  /// Baseline liquidation set: Q0 = Y0 = 1 with +/-5% performance barriers.
  static ModelParams baseline();
  /// Running-penalty comparison set (b = 0, S0 = 20, phi = 0.001).
  static ModelParams section5();

  double initial_performance() const;

  /// Throws std::invalid_argument naming the first violated invariant:
  /// 2 gamma - b > 0, l > 0, sigma > 0, q0 > 0, phi >= 0, k < Y0 < h, t_max > 0.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

struct MarketState {
  double t = 0.0;
  double x = 0.0;  // cash
  double q = 0.0;  // shares held
  double s = 0.0;  // market price

  bool operator==(const MarketState&) const = default;
};

MarketState initial_state(const ModelParams& params);

struct PerformanceSpec {
  bool include_running_penalty = false;
  double accumulated_penalty = 0.0;  // phi * int_0^t Q(u)^2 du
};

double performance(const MarketState& state, const ModelParams& params,
                   const PerformanceSpec& spec = {});

/// dt-coefficient of dY for selling rate v: -l v^2 + (2 gamma - b) q v,
/// less phi q^2 when the running penalty is part of Y. Throws on v < 0.
double performance_drift(const MarketState& state, double v, const ModelParams& params,
                         const PerformanceSpec& spec = {});

/// dW-coefficient of dY.
double performance_diffusion(const MarketState& state, const ModelParams& params);

struct StepOutcome {
  MarketState state;
  double executed_rate = 0.0;
  bool clamped = false;  // requested v * dt exceeded the inventory
};

/// One Euler-Maruyama step. The requested rate is cut to q / dt when it would
/// sell more than the inventory; the time coordinate advances by dt.
StepOutcome step_dynamics(const MarketState& state, double v, double dt, double dw,
                          const ModelParams& params);

}  // namespace execbarrier
