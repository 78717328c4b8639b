#pragma once

#include <cstddef>
#include <vector>

#include "execbarrier/model.hpp"

namespace execbarrier {

/// Exponent of the double-barrier value function, (2 gamma - b)^2 / (2 l sigma^2).
double lambda_p1(const ModelParams& params);

/// Same with the running penalty: ((2 gamma - b)^2 - 4 l phi) / (2 l sigma^2).
/// May be zero or negative; see BarrierValueFn::lambda_nonpositive().
double lambda_p1prime(const ModelParams& params);

/// J(y) = (exp(-lambda y) - exp(-lambda k)) / (exp(-lambda h) - exp(-lambda k)).
///
/// Evaluated in a barrier-shifted form so that lambda in the thousands does
/// not overflow; J(k) = 0 and J(h) = 1 hold exactly in floating point.
class BarrierValueFn {
 public:
  BarrierValueFn(double lambda, double k_lower, double h_upper);

  double lambda() const { return lambda_; }
  double k_lower() const { return k_; }
  double h_upper() const { return h_; }

  // The optimality argument behind J assumes a positive exponent. Values at
  // lambda <= 0 are still well defined and increasing, but only diagnostic.
  bool lambda_nonpositive() const { return lambda_ <= 0.0; }

  double operator()(double y) const;

 private:
  double lambda_;
  double k_;
  double h_;
};

/// Throws std::invalid_argument for y outside [k, h].
double barrier_value(double y, const BarrierValueFn& fn);

/// Quadratic coefficient of the finite-horizon value function
/// x + q s + h2(t) q^2, i.e. the solution of
///   h2' + (b + 2 h2)^2 / (4 l) = 0,  h2(T) = -gamma.
double h2_closed_form(double t, const ModelParams& params);

/// The coefficient exactly as typeset in the source derivation,
/// (1/(2l) (T - t) + 1/(b - 2 gamma))^{-1} - b/2. It misses h2(T) = -gamma
/// (gives b/2 - 2 gamma) and is kept only to document the discrepancy.
double h2_as_printed(double t, const ModelParams& params);

struct H2Table {
  std::vector<double> t;
  std::vector<double> h2;
};

/// Classical RK4 integration of the Riccati equation backward from T on a
/// uniform grid of n_steps intervals. Requires n_steps >= 1000.
H2Table h2_ode_oracle(const ModelParams& params, std::size_t n_steps);

/// x + q s + h2(t) q^2.
double p0_value(double t, const MarketState& state, const ModelParams& params);

}  // namespace execbarrier
