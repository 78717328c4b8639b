#include "execbarrier/closed_form.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace execbarrier {

namespace {

void require_in_horizon(double t, const ModelParams& params, const char* who) {
  if (t < 0.0 || t > params.t_max) throw std::invalid_argument(std::string(who) + ": time outside [0, T]");
}

}  // namespace

double lambda_p1(const ModelParams& params) {
  const double kappa = 2.0 * params.gamma - params.b;
  return kappa * kappa / (2.0 * params.l * params.sigma * params.sigma);
}

double lambda_p1prime(const ModelParams& params) {
  const double kappa = 2.0 * params.gamma - params.b;
  return (kappa * kappa - 4.0 * params.l * params.phi) / (2.0 * params.l * params.sigma * params.sigma);
}

BarrierValueFn::BarrierValueFn(double lambda, double k_lower, double h_upper)
    : lambda_(lambda), k_(k_lower), h_(h_upper) {
  if (!std::isfinite(lambda) || !std::isfinite(k_lower) || !std::isfinite(h_upper)) {
    throw std::invalid_argument("barrier value function needs finite lambda and barriers");
  }
  if (!(k_lower < h_upper)) throw std::invalid_argument("lower barrier must sit below the upper barrier");
}

double BarrierValueFn::operator()(double y) const {
  if (y < k_ || y > h_) throw std::invalid_argument("performance outside [k, h]");
  if (lambda_ == 0.0) return (y - k_) / (h_ - k_);
  if (lambda_ > 0.0) {
    // Multiply through by exp(lambda k): every exponent is <= 0.
    return std::expm1(-lambda_ * (y - k_)) / std::expm1(-lambda_ * (h_ - k_));
  }
  // lambda < 0: multiply through by exp(lambda h) instead.
  const double num = std::expm1(-lambda_ * (y - h_)) - std::expm1(-lambda_ * (k_ - h_));
  const double den = -std::expm1(-lambda_ * (k_ - h_));
  return num / den;
}

double barrier_value(double y, const BarrierValueFn& fn) { return fn(y); }

double h2_closed_form(double t, const ModelParams& params) {
  require_in_horizon(t, params, "h2_closed_form");
  if (t == params.t_max) return -params.gamma;
  const double kappa = 2.0 * params.gamma - params.b;
  return -1.0 / ((params.t_max - t) / params.l + 2.0 / kappa) - 0.5 * params.b;
}

double h2_as_printed(double t, const ModelParams& params) {
  require_in_horizon(t, params, "h2_as_printed");
  return 1.0 / ((params.t_max - t) / (2.0 * params.l) + 1.0 / (params.b - 2.0 * params.gamma)) - 0.5 * params.b;
}

H2Table h2_ode_oracle(const ModelParams& params, std::size_t n_steps) {
  if (n_steps < 1000) throw std::invalid_argument("h2_ode_oracle needs at least 1000 steps");
  const double T = params.t_max;
  const double h = T / static_cast<double>(n_steps);
  // In reversed time u = T - t the equation reads dh2/du = (b + 2 h2)^2 / (4 l).
  const auto rhs = [&](double value) {
    const double u = params.b + 2.0 * value;
    return u * u / (4.0 * params.l);
  };

  H2Table table;
  table.t.resize(n_steps + 1);
  table.h2.resize(n_steps + 1);
  double value = -params.gamma;
  table.t[n_steps] = T;
  table.h2[n_steps] = value;
  for (std::size_t i = n_steps; i > 0; --i) {
    const double k1 = rhs(value);
    const double k2 = rhs(value + 0.5 * h * k1);
    const double k3 = rhs(value + 0.5 * h * k2);
    const double k4 = rhs(value + h * k3);
    value += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    table.t[i - 1] = static_cast<double>(i - 1) * h;
    table.h2[i - 1] = value;
  }
  return table;
}

double p0_value(double t, const MarketState& state, const ModelParams& params) {
  return state.x + state.q * state.s + h2_closed_form(t, params) * state.q * state.q;
}

}  // namespace execbarrier
