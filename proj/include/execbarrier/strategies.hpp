#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "execbarrier/model.hpp"

namespace execbarrier {

using RateRule = std::function<double(double t, const MarketState&, const ModelParams&)>;

/// A selling-rate rule with an optional uniform upper bound.
///
/// Strategies are immutable once built and safe to evaluate concurrently.
/// The rule itself is not trusted: `decide` reports a non-finite or negative
/// rate unchanged so the simulation engine can flag the path.
class Strategy {
 public:
  struct Decision {
    double rate = 0.0;
    bool capped = false;
  };

  Strategy(std::string label, RateRule rule, std::optional<double> v_max = std::nullopt);

  const std::string& label() const { return label_; }
  std::optional<double> v_max() const { return v_max_; }

  Decision decide(double t, const MarketState& state, const ModelParams& params) const;
  double operator()(double t, const MarketState& state, const ModelParams& params) const {
    return decide(t, state, params).rate;
  }

  /// Same rule, rate capped at v_max.
  Strategy with_cap(double v_max) const;

 private:
  std::string label_;
  RateRule rule_;
  std::optional<double> v_max_;
};

struct AcCoefficients {
  double big_gamma = 0.0;  // sqrt(phi / l)
  double zeta = 1.0;

  /// Throws std::invalid_argument unless gamma - b/2 - sqrt(l phi) > 0.
  static AcCoefficients from(const ModelParams& params);
};

// Target (P1 / P1') strategy: sell the fixed fraction (2 gamma - b) / (2 l)
// of the outstanding shares; independent of time, price and barriers.
double p1_rate(double t, const MarketState& state, const ModelParams& params);
double p1_inventory(double t, const ModelParams& params);

// Classical finite-horizon strategy with T = params.t_max; linear inventory.
double p0_rate(double t, const MarketState& state, const ModelParams& params);
double p0_inventory(double t, const ModelParams& params);

// Almgren-Chriss with running penalty. phi == 0 falls back to the P0 formulas.
double ac_rate(double t, const MarketState& state, const ModelParams& params,
               const AcCoefficients& coeffs);
double ac_inventory(double t, const ModelParams& params, const AcCoefficients& coeffs);

/// Piecewise-linear rate schedule v(t), flat beyond its end points.
class RateTable {
 public:
  RateTable(std::vector<double> times, std::vector<double> rates);

  /// CSV with a header line and two columns: t, rate.
  static RateTable load_csv(const std::filesystem::path& path);

  double at(double t) const;
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& rates() const { return rates_; }

 private:
  std::vector<double> times_;
  std::vector<double> rates_;
};

Strategy make_p1_strategy();
Strategy make_p0_strategy();
Strategy make_ac_strategy(const ModelParams& params);
Strategy make_zero_strategy();
Strategy make_constant_strategy(double rate);
Strategy make_table_strategy(RateTable table, std::string label = "external");

/// Resolves "p0", "p1", "ac", "zero", "constant:<v>" or "external:<csv path>".
Strategy strategy_from_label(std::string_view label, const ModelParams& params);

}  // namespace execbarrier
