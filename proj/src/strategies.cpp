#include "execbarrier/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace execbarrier {

namespace {

constexpr double kHorizonSlack = 1e-12;

double check_time_in_horizon(double t, const ModelParams& params, const char* who) {
  if (t < -kHorizonSlack || t > params.t_max * (1.0 + kHorizonSlack) + kHorizonSlack) {
    throw std::invalid_argument(std::string(who) + ": time outside [0, T]");
  }
  return std::clamp(t, 0.0, params.t_max);
}

double parse_double(std::string_view text, std::string_view context) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("cannot parse number '" + std::string(text) + "' in " + std::string(context));
  }
  return value;
}

}  // namespace

Strategy::Strategy(std::string label, RateRule rule, std::optional<double> v_max)
    : label_(std::move(label)), rule_(std::move(rule)), v_max_(v_max) {
  if (!rule_) throw std::invalid_argument("strategy rule must be callable");
  if (v_max_ && !(*v_max_ >= 0.0)) throw std::invalid_argument("v_max must be non-negative");
}

Strategy::Decision Strategy::decide(double t, const MarketState& state, const ModelParams& params) const {
  Decision d{rule_(t, state, params), false};
  if (v_max_ && d.rate > *v_max_) {
    d.rate = *v_max_;
    d.capped = true;
  }
  return d;
}

Strategy Strategy::with_cap(double v_max) const { return Strategy(label_, rule_, v_max); }

AcCoefficients AcCoefficients::from(const ModelParams& params) {
  if (params.phi < 0.0 || params.l <= 0.0) {
    throw std::invalid_argument("AC coefficients need phi >= 0 and l > 0");
  }
  const double root = std::sqrt(params.l * params.phi);
  const double base = params.gamma - 0.5 * params.b;
  if (base - root <= 0.0) {
    throw std::invalid_argument("AC coefficients undefined: gamma - b/2 - sqrt(l*phi) must be positive");
  }
  return AcCoefficients{std::sqrt(params.phi / params.l), (base + root) / (base - root)};
}

double p1_rate(double, const MarketState& state, const ModelParams& params) {
  return (2.0 * params.gamma - params.b) / (2.0 * params.l) * state.q;
}

double p1_inventory(double t, const ModelParams& params) {
  if (t < 0.0) throw std::invalid_argument("p1_inventory: negative time");
  return params.q0 * std::exp((params.b - 2.0 * params.gamma) / (2.0 * params.l) * t);
}

double p0_rate(double t, const MarketState& state, const ModelParams& params) {
  t = check_time_in_horizon(t, params, "p0_rate");
  const double kappa = 2.0 * params.gamma - params.b;
  return kappa / (2.0 * params.l + kappa * (params.t_max - t)) * state.q;
}

double p0_inventory(double t, const ModelParams& params) {
  t = check_time_in_horizon(t, params, "p0_inventory");
  const double kappa = 2.0 * params.gamma - params.b;
  return (2.0 * params.l + kappa * (params.t_max - t)) / (2.0 * params.l + kappa * params.t_max) * params.q0;
}

// Both AC formulas are rewritten with exp(-2 Gamma (T - t)) so that large
// Gamma * T never overflows.
double ac_rate(double t, const MarketState& state, const ModelParams& params, const AcCoefficients& coeffs) {
  if (coeffs.big_gamma == 0.0) return p0_rate(t, state, params);
  t = check_time_in_horizon(t, params, "ac_rate");
  const double decay = std::exp(-2.0 * coeffs.big_gamma * (params.t_max - t));
  return coeffs.big_gamma * (coeffs.zeta + decay) / (coeffs.zeta - decay) * state.q;
}

double ac_inventory(double t, const ModelParams& params, const AcCoefficients& coeffs) {
  if (coeffs.big_gamma == 0.0) return p0_inventory(t, params);
  t = check_time_in_horizon(t, params, "ac_inventory");
  const double g = coeffs.big_gamma;
  const double num = coeffs.zeta - std::exp(-2.0 * g * (params.t_max - t));
  const double den = coeffs.zeta - std::exp(-2.0 * g * params.t_max);
  return std::exp(-g * t) * num / den * params.q0;
}

RateTable::RateTable(std::vector<double> times, std::vector<double> rates)
    : times_(std::move(times)), rates_(std::move(rates)) {
  if (times_.empty() || times_.size() != rates_.size()) {
    throw std::invalid_argument("rate table needs matching, non-empty time and rate columns");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(rates_[i]) || rates_[i] < 0.0) {
      throw std::invalid_argument("rate table row " + std::to_string(i + 1) +
                                  ": values must be finite with a non-negative rate");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("rate table times must be strictly increasing");
    }
  }
}

RateTable RateTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open rate table " + path.string());
  std::vector<double> times, rates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": expected 't,rate'");
    }
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    times.push_back(parse_double(std::string_view(line).substr(0, comma), ctx));
    rates.push_back(parse_double(std::string_view(line).substr(comma + 1), ctx));
  }
  return RateTable(std::move(times), std::move(rates));
}

double RateTable::at(double t) const {
  if (t <= times_.front()) return rates_.front();
  if (t >= times_.back()) return rates_.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return rates_[lo] + w * (rates_[hi] - rates_[lo]);
}

Strategy make_p1_strategy() { return Strategy("p1", p1_rate); }

Strategy make_p0_strategy() { return Strategy("p0", p0_rate); }

Strategy make_ac_strategy(const ModelParams& params) {
  if (params.phi == 0.0) return Strategy("ac", p0_rate);
  const AcCoefficients coeffs = AcCoefficients::from(params);
  return Strategy("ac", [coeffs](double t, const MarketState& s, const ModelParams& p) {
    return ac_rate(t, s, p, coeffs);
  });
}

Strategy make_zero_strategy() {
  return Strategy("zero", [](double, const MarketState&, const ModelParams&) { return 0.0; });
}

Strategy make_constant_strategy(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("constant rate must be finite and >= 0");
  std::ostringstream label;
  label << "constant:" << rate;
  return Strategy(label.str(), [rate](double, const MarketState&, const ModelParams&) { return rate; });
}

Strategy make_table_strategy(RateTable table, std::string label) {
  return Strategy(std::move(label), [table = std::move(table)](double t, const MarketState& s, const ModelParams&) {
    return s.q > 0.0 ? table.at(t) : 0.0;
  });
}

Strategy strategy_from_label(std::string_view label, const ModelParams& params) {
  if (label == "p1") return make_p1_strategy();
  if (label == "p0") return make_p0_strategy();
  if (label == "ac") return make_ac_strategy(params);
  if (label == "zero") return make_zero_strategy();
  if (label.starts_with("constant:")) {
    return make_constant_strategy(parse_double(label.substr(9), "strategy label"));
  }
  if (label.starts_with("external:")) {
    const std::string path(label.substr(9));
    if (path.empty()) throw std::invalid_argument("external strategy needs a file path");
    return make_table_strategy(RateTable::load_csv(path), "external:" + path);
  }
  throw std::invalid_argument("unknown strategy label '" + std::string(label) + "'");
}

}  // namespace execbarrier
