// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Reference values are embedded below. Tolerances are the ones stated for
// each criterion and are not tuned to the simulation output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "execbarrier/closed_form.hpp"
#include "execbarrier/experiments.hpp"
#include "execbarrier/sim_engine.hpp"
#include "execbarrier/stats.hpp"
#include "execbarrier/strategies.hpp"

namespace eb = execbarrier;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kPaths = 10000;
constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [miss] " << what << ";";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, Outcome& o) {
  std::printf("%s criterion %d: %s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void info(const std::string& text) {
  std::printf("     info: %s\n", text.c_str());
  std::fflush(stdout);
}

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> grid_0_to(double t_max, double step) {
  std::vector<double> g;
  for (long i = 0; i * step <= t_max + 1e-12; ++i) g.push_back(static_cast<double>(i) * step);
  return g;
}

// ---------------------------------------------------------------------------

void criterion1() {
  Outcome o;
  eb::ModelParams p;
  // (sigma, exact value from an independent 40-digit evaluation, printed caption value)
  const struct {
    double sigma;
    double exact;
    double caption;
  } cases[] = {{0.1, 1980.05, 1980.05}, {1.0, 19.8005, 19.80}, {std::sqrt(10.0), 1.98005, 1.98}};
  for (const auto& c : cases) {
    p.sigma = c.sigma;
    const double lambda = eb::lambda_p1(p);
    o.check(rel_err(lambda, c.exact) < 1e-9, "lambda(sigma=" + num(c.sigma) + ")=" + num(lambda, 17));
    o.check(std::round(lambda * 100.0) / 100.0 == c.caption, "caption rounding for " + num(c.caption));
    o.detail << " lambda=" << num(lambda, 10);
  }
  report(1, "lambda_p1 exact on baseline and figure variants", o);
}

void criterion2() {
  Outcome o;
  for (double lambda : {1.98, 19.80, 1980.05}) {
    const eb::BarrierValueFn fn(lambda, 0.95, 1.05);
    o.check(fn(0.95) == 0.0, "J(k) for lambda=" + num(lambda));
    o.check(fn(1.05) == 1.0, "J(h) for lambda=" + num(lambda));
    bool finite = true;
    for (int i = 0; i <= 1000; ++i) finite = finite && std::isfinite(fn(std::min(1.05, 0.95 + 1e-4 * i)));
    o.check(finite, "finite J on [k,h] for lambda=" + num(lambda));
  }
  report(2, "barrier value function boundary conditions exact", o);
}

void criterion3() {
  Outcome o;
  eb::ModelParams base;
  eb::ModelParams v1 = base;
  v1.gamma = 0.05;
  eb::ModelParams v2 = base;
  v2.l = 0.002;
  for (const auto& [name, p] : {std::pair{"baseline", base}, std::pair{"gamma=0.05", v1}, std::pair{"l=0.002", v2}}) {
    const eb::H2Table table = eb::h2_ode_oracle(p, 100000);
    double worst = 0.0;
    for (std::size_t i = 0; i < table.t.size(); ++i) {
      worst = std::max(worst, std::abs(table.h2[i] - eb::h2_closed_form(table.t[i], p)));
    }
    o.check(worst < 1e-8, std::string(name) + " max deviation " + num(worst));
    o.check(eb::h2_closed_form(p.t_max, p) == -p.gamma, std::string(name) + " h2(T)");
    o.detail << " " << name << " max|dev|=" << num(worst, 3);
  }
  report(3, "Riccati closed form versus RK4 oracle", o);
}

// RK4 on dQ/dt = -v(t, Q) using only the feedback rule.
double integrate_feedback(const std::function<double(double, double)>& rate, double q0, double t_end, double dt,
                          bool euler) {
  double q = q0;
  const auto n = static_cast<long>(std::llround(t_end / dt));
  for (long i = 0; i < n; ++i) {
    const double t = i * dt;
    if (euler) {
      q -= rate(t, q) * dt;
      continue;
    }
    const double k1 = -rate(t, q);
    const double k2 = -rate(t + dt / 2, q + dt / 2 * k1);
    const double k3 = -rate(t + dt / 2, q + dt / 2 * k2);
    const double k4 = -rate(t + dt, q + dt * k3);
    q += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return q;
}

void criterion4() {
  Outcome o;
  const double dt = 1e-4;
  const eb::ModelParams base;
  const eb::ModelParams s5 = eb::ModelParams::section5();
  const eb::AcCoefficients coeffs = eb::AcCoefficients::from(s5);
  const auto state = [](double q) { return eb::MarketState{0.0, 0.0, q, 0.0}; };

  struct Case {
    std::string name;
    std::function<double(double, double)> rate;
    std::function<double(double)> inventory;
  };
  const std::vector<Case> cases = {
      {"P0 linear", [&](double t, double q) { return eb::p0_rate(t, state(q), base); },
       [&](double t) { return eb::p0_inventory(t, base); }},
      {"P1 exponential", [&](double t, double q) { return eb::p1_rate(t, state(q), base); },
       [&](double t) { return eb::p1_inventory(t, base); }},
      {"AC hyperbolic", [&](double t, double q) { return eb::ac_rate(t, state(q), s5, coeffs); },
       [&](double t) { return eb::ac_inventory(t, s5, coeffs); }},
  };
  for (const Case& c : cases) {
    double worst = 0.0, worst_euler = 0.0;
    for (double t : grid_0_to(1.0, 0.01)) {
      worst = std::max(worst, std::abs(integrate_feedback(c.rate, 1.0, t, dt, false) - c.inventory(t)));
      worst_euler = std::max(worst_euler, std::abs(integrate_feedback(c.rate, 1.0, t, dt, true) - c.inventory(t)));
    }
    o.check(worst < 1e-3, c.name + " max deviation " + num(worst));
    o.detail << " " << c.name << " max|dev|=" << num(worst, 3);
    info(c.name + ": explicit Euler at the same dt deviates by up to " + num(worst_euler, 3));
  }
  report(4, "feedback rates integrate to the analytic inventories (RK4, dt=1e-4)", o);
}

eb::SimulationSetup baseline_setup(const eb::ModelParams& p) {
  eb::SimulationSetup setup;
  setup.params = p;
  setup.rules = eb::StoppingRules::standard(p);
  setup.dt = 1e-4;
  setup.sample_times = {p.t_max};
  setup.seed = eb::SeedSpec{kSeed};
  return setup;
}

void criterion5() {
  Outcome o;
  const eb::ModelParams p;
  const eb::SimulationSetup setup = baseline_setup(p);
  const auto p1 = eb::hitting_probabilities(eb::run_batch(eb::make_p1_strategy(), setup, kPaths), 1.0);
  const auto p0 = eb::hitting_probabilities(eb::run_batch(eb::make_p0_strategy(), setup, kPaths), 1.0);
  const auto fmt = [](const eb::HitProbabilities& h) {
    return num(h.p_upper, 4) + "/" + num(h.p_lower, 4) + "/" + num(h.p_neither, 4);
  };
  o.check(std::abs(p1.p_upper - 0.509) <= 0.02, "P1 upper " + num(p1.p_upper, 4) + " vs 0.509+-0.02");
  o.check(p1.p_lower <= 0.002, "P1 lower " + num(p1.p_lower, 4) + " vs <=0.002");
  o.check(std::abs(p1.p_neither - 0.491) <= 0.02, "P1 neither " + num(p1.p_neither, 4) + " vs 0.491+-0.02");
  o.check(std::abs(p0.p_upper - 0.816) <= 0.02, "P0 upper " + num(p0.p_upper, 4) + " vs 0.816+-0.02");
  o.check(std::abs(p0.p_lower - 0.092) <= 0.015, "P0 lower " + num(p0.p_lower, 4) + " vs 0.092+-0.015");
  o.check(std::abs(p0.p_neither - 0.092) <= 0.015, "P0 neither " + num(p0.p_neither, 4) + " vs 0.092+-0.015");
  o.detail << " P1=" << fmt(p1) << " P0=" << fmt(p0);
  report(5, "hitting probabilities by t=1 (10,000 paths, dt=1e-4, seed 42)", o);
}

struct PrintedRow {
  double p1_mean, p1_var, p0_mean, p0_var;
};

// Reference grid, blocks in the order of eb::table2_variations, t = 0.02, 0.06, 0.10.
const PrintedRow kTable2[8][3] = {
    {{1.04709, .00002, 1.03149, .00015}, {1.04742, .00002, 1.04996, .00001}, {1.04741, .00002, 1.05062, .00000}},
    {{1.04680, .00002, 1.02831, .00016}, {1.04719, .00002, 1.04935, .00002}, {1.04719, .00002, 1.05051, .00000}},
    {{1.04709, .00002, 1.03123, .00014}, {1.04742, .00002, 1.05005, .00001}, {1.04743, .00002, 1.05061, .00000}},
    {{1.04269, .00006, 1.03028, .00015}, {1.04666, .00003, 1.04977, .00001}, {1.04670, .00003, 1.05050, .00000}},
    {{1.02154, .00009, 1.01405, .00017}, {1.02489, .00010, 1.03207, .00024}, {1.02496, .00010, 1.03795, .00019}},
    {{1.04654, .00002, 1.02948, .00015}, {1.04691, .00002, 1.04962, .00002}, {1.04691, .00002, 1.05056, .00000}},
    {{1.04685, .00002, 1.03037, .00015}, {1.04719, .00002, 1.04986, .00001}, {1.04719, .00002, 1.05063, .00000}},
    {{1.04456, .00008, 1.02935, .00045}, {1.04496, .00008, 1.04622, .00021}, {1.04496, .00008, 1.04865, .00012}},
};

bool variance_ok(double sim, double printed) {
  return std::abs(sim - printed) <= 2e-5 || std::abs(sim - printed) <= 0.5 * printed;
}

struct Table2Check {
  int mean_misses = 0;
  int var_misses = 0;
  int order_misses = 0;
  double worst_p1_mean = 0.0;
  double worst_p0_mean = 0.0;
  std::vector<std::string> misses;
};

Table2Check check_table2(const std::vector<eb::Table2Row>& rows) {
  Table2Check c;
  for (std::size_t b = 0; b < 8; ++b) {
    for (std::size_t i = 0; i < 3; ++i) {
      const eb::Table2Row& r = rows[3 * b + i];
      const PrintedRow& ref = kTable2[b][i];
      const std::string at = r.parameter + "=" + num(r.value) + " t=" + num(r.t);
      const double d1 = std::abs(r.p1_mean - ref.p1_mean);
      const double d0 = std::abs(r.p0_mean - ref.p0_mean);
      c.worst_p1_mean = std::max(c.worst_p1_mean, d1);
      c.worst_p0_mean = std::max(c.worst_p0_mean, d0);
      if (d1 > 0.002) ++c.mean_misses, c.misses.push_back(at + " P1 mean " + num(r.p1_mean));
      if (d0 > 0.002) ++c.mean_misses, c.misses.push_back(at + " P0 mean " + num(r.p0_mean));
      if (!variance_ok(r.p1_variance, ref.p1_var)) ++c.var_misses, c.misses.push_back(at + " P1 var " + num(r.p1_variance));
      if (!variance_ok(r.p0_variance, ref.p0_var)) ++c.var_misses, c.misses.push_back(at + " P0 var " + num(r.p0_variance));
    }
    if (!(rows[3 * b].p1_mean > rows[3 * b].p0_mean)) ++c.order_misses;
    if (!(rows[3 * b + 2].p0_mean > rows[3 * b + 2].p1_mean)) ++c.order_misses;
  }
  return c;
}

void criterion6() {
  Outcome o;
  eb::RunConfig config = eb::preset_defaults("table2");
  config.n_paths = kPaths;
  config.master_seed = kSeed;
  const auto rows = eb::run_table2(config);
  const Table2Check c = check_table2(rows);
  o.check(c.mean_misses == 0, std::to_string(c.mean_misses) + " of 48 means outside +-0.002");
  o.check(c.var_misses == 0, std::to_string(c.var_misses) + " of 48 variances outside tolerance");
  o.check(c.order_misses == 0, std::to_string(c.order_misses) + " of 16 orderings violated");
  o.detail << " worst |P1 mean dev|=" << num(c.worst_p1_mean, 3) << " worst |P0 mean dev|=" << num(c.worst_p0_mean, 3);
  report(6, "table2 reference grid of means, variances and orderings (P0 horizon T=1)", o);
  for (std::size_t i = 0; i < std::min<std::size_t>(c.misses.size(), 6); ++i) info("miss: " + c.misses[i]);
  if (c.misses.size() > 6) info("... " + std::to_string(c.misses.size() - 6) + " more misses");

  // Diagnostic only: the same grid with the finite-horizon strategy planned
  // over T = 0.1 (the last reported time) instead of T = 1.
  eb::RunConfig short_horizon = config;
  short_horizon.params.t_max = 0.1;
  const Table2Check d = check_table2(eb::run_table2(short_horizon));
  info("with P0 horizon T=0.1: mean misses " + std::to_string(d.mean_misses) + "/48, variance misses " +
       std::to_string(d.var_misses) + "/48, ordering misses " + std::to_string(d.order_misses) +
       "/16, worst |P0 mean dev|=" + num(d.worst_p0_mean, 3));
  for (const std::string& miss : d.misses) info("T=0.1 miss: " + miss);
}

void criterion7() {
  Outcome o;
  eb::SimulationSetup setup;
  setup.params = eb::ModelParams::baseline();
  setup.rules.barrier = eb::DoubleBarrier{0.95, 1.05};
  setup.rules.horizon = 2.0;
  setup.dt = 1e-5;
  setup.sample_times = {2.0};
  setup.seed = eb::SeedSpec{kSeed};
  for (const auto& [mu, s] : {std::pair{0.0, 0.2}, std::pair{0.5, 0.2}, std::pair{-0.3, 0.25}}) {
    const eb::SurrogateProcess process{mu, s, 1.0};
    const auto results = eb::run_surrogate_batch(process, setup, kPaths);
    const auto hp = eb::hitting_probabilities(results, 2.0);
    const double exact = eb::surrogate_upper_probability(process, 0.95, 1.05);
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(kPaths));
    const double z = (hp.p_upper - exact) / se;
    o.check(std::abs(z) <= 3.0, "mu=" + num(mu) + " s=" + num(s) + " z=" + num(z, 3));
    o.check(hp.n_neither == 0, "unfinished surrogate paths");
    o.detail << " (mu=" << num(mu) << ",s=" << num(s) << ") MC=" << num(hp.p_upper, 4) << " exact=" << num(exact, 4)
             << " z=" << num(z, 2);
  }
  report(7, "surrogate double-barrier probabilities within 3 SE (dt=1e-5)", o);
}

void criterion8() {
  Outcome o;
  const eb::ModelParams p;
  const double kappa = 2.0 * p.gamma - p.b;
  for (double q : {0.1, 1.0, 10.0}) {
    const eb::MarketState st{0.0, 0.0, q, p.s0};
    const double v_star = kappa * q / (2.0 * p.l);
    const std::size_t n = 100000;
    const double v_hi = 3.0 * v_star;
    const double step = v_hi / static_cast<double>(n - 1);
    double best = -HUGE_VAL, arg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = step * static_cast<double>(i);
      const double d = eb::performance_drift(st, v, p);
      if (d > best) best = d, arg = v;
    }
    o.check(std::abs(arg - v_star) <= step, "q=" + num(q) + " argmax " + num(arg) + " vs " + num(v_star));
    o.detail << " q=" << num(q) << ": argmax=" << num(arg, 7) << " target=" << num(v_star, 7);
  }
  report(8, "drift argmax on a 1e5-point grid equals (2gamma-b)q/(2l)", o);
}

void criterion9() {
  Outcome o;
  eb::RunConfig config = eb::preset_defaults("fig5");
  config.n_paths = kPaths;
  config.master_seed = kSeed;
  const eb::ModelParams& p = config.params;
  const eb::SimulationSetup setup = eb::make_setup(config, p);
  std::map<std::string, double> variance;
  for (const std::string label : {"p1", "ac"}) {
    const auto results = eb::run_batch(eb::make_configured_strategy(label, config, p), setup, kPaths);
    variance[label] = eb::terminal_histogram(results, eb::TerminalStatistic::p5_objective, 50).sample_variance;
  }
  o.check(variance["p1"] < variance["ac"], "variance P1' " + num(variance["p1"]) + " vs AC " + num(variance["ac"]));

  const eb::AcCoefficients coeffs = eb::AcCoefficients::from(p);
  std::size_t violations = 0, points = 0;
  for (int i = 1; i < 100000; ++i) {
    const double t = p.t_max * i / 100000.0;
    ++points;
    if (!(eb::p1_inventory(t, p) < eb::ac_inventory(t, p, coeffs))) ++violations;
  }
  o.check(violations == 0, std::to_string(violations) + " grid times with P1' inventory not below AC");
  o.detail << " var(P1')=" << num(variance["p1"], 4) << " var(AC)=" << num(variance["ac"], 4) << " inventory below AC at "
           << points - violations << "/" << points << " interior times";
  report(9, "running-penalty comparison: P1' more concentrated and more aggressive than AC", o);
}

void criterion10() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "execbarrier_acceptance_determinism";
  fs::remove_all(root);
  std::size_t compared = 0;
  for (const std::string preset : {"baseline", "fig5", "table2"}) {
    eb::RunConfig config = eb::preset_defaults(preset);
    config.n_paths = kPaths;
    config.master_seed = kSeed;
    config.threads = 1;
    config.output_dir = root / preset / "w1";
    const auto one = eb::run_experiment(config);
    config.threads = 8;
    config.output_dir = root / preset / "w8";
    const auto eight = eb::run_experiment(config);
    o.check(one.files.size() == eight.files.size(), preset + " file count");
    for (std::size_t i = 0; i < std::min(one.files.size(), eight.files.size()); ++i) {
      std::ifstream a(one.files[i], std::ios::binary), b(eight.files[i], std::ios::binary);
      std::ostringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      o.check(sa.str() == sb.str(), preset + "/" + one.files[i].filename().string() + " differs");
      ++compared;
    }
  }
  fs::remove_all(root);
  o.detail << " " << compared << " data files compared";
  report(10, "1 versus 8 workers give byte-identical data files", o);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
