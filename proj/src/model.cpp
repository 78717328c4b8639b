#include "execbarrier/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace execbarrier {

ModelParams ModelParams::baseline() { return ModelParams{}; }

ModelParams ModelParams::section5() {
  ModelParams p;
  p.b = 0.0;
  p.l = 0.0001;
  p.gamma = 0.1;
  p.sigma = 0.1;
  p.phi = 0.001;
  p.q0 = 1.0;
  p.s0 = 20.0;
  p.x0 = 0.0;
  p.k_lower = 19.85;
  p.h_upper = 19.95;
  p.t_max = 1.0;
  return p;
}

double ModelParams::initial_performance() const { return x0 + q0 * (s0 - gamma * q0); }

void ModelParams::validate() const {
  const auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  for (double v : {b, l, gamma, sigma, phi, q0, s0, x0, k_lower, h_upper, t_max}) {
    if (!std::isfinite(v)) fail("model parameters must be finite");
  }
  if (2.0 * gamma - b <= 0.0) fail("2*gamma - b must be positive (slippage must dominate permanent impact)");
  if (l <= 0.0) fail("temporary impact l must be positive");
  if (sigma <= 0.0) fail("volatility sigma must be positive");
  if (q0 <= 0.0) fail("initial inventory q0 must be positive");
  if (phi < 0.0) fail("running penalty phi must be non-negative");
  if (t_max <= 0.0) fail("horizon t_max must be positive");
  const double y0 = initial_performance();
  if (k_lower >= y0) fail("lower barrier above initial performance");
  if (h_upper <= y0) fail("upper barrier below initial performance");
}

MarketState initial_state(const ModelParams& params) {
  return MarketState{0.0, params.x0, params.q0, params.s0};
}

double performance(const MarketState& state, const ModelParams& params, const PerformanceSpec& spec) {
  double y = state.x + state.q * (state.s - params.gamma * state.q);
  if (spec.include_running_penalty) y -= spec.accumulated_penalty;
  return y;
}

double performance_drift(const MarketState& state, double v, const ModelParams& params,
                         const PerformanceSpec& spec) {
  if (!(v >= 0.0)) throw std::invalid_argument("selling rate must be non-negative");
  double drift = -params.l * v * v + (2.0 * params.gamma - params.b) * state.q * v;
  if (spec.include_running_penalty) drift -= params.phi * state.q * state.q;
  return drift;
}

double performance_diffusion(const MarketState& state, const ModelParams& params) {
  return params.sigma * state.q;
}

StepOutcome step_dynamics(const MarketState& state, double v, double dt, double dw,
                          const ModelParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(v >= 0.0)) throw std::invalid_argument("selling rate must be non-negative");

  StepOutcome out;
  out.executed_rate = v;
  double q_next = state.q - v * dt;
  if (q_next < 0.0) {
    out.executed_rate = state.q / dt;
    out.clamped = true;
    q_next = 0.0;
  }
  const double rate = out.executed_rate;
  out.state.t = state.t + dt;
  out.state.q = q_next;
  out.state.x = state.x + (state.s - params.l * rate) * rate * dt;
  out.state.s = state.s - params.b * rate * dt + params.sigma * dw;
  return out;
}

}  // namespace execbarrier
