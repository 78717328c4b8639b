#include "execbarrier/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "execbarrier/closed_form.hpp"
#include "execbarrier/strategies.hpp"

namespace execbarrier {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects output files in a hidden staging directory next to the final
// location; commit() moves them in, the destructor discards anything left.
class StagedOutput {
 public:
  explicit StagedOutput(fs::path out_dir) : out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
    std::random_device rd;
    std::ostringstream name;
    name << ".staging-" << std::hex << rd() << rd();
    staging_ = out_dir_ / name.str();
    fs::create_directory(staging_);
  }

  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  ~StagedOutput() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }

  void write(const std::string& name, const std::string& content) {
    if (std::find(names_.begin(), names_.end(), name) != names_.end()) {
      throw std::logic_error("output file emitted twice: " + name);
    }
    std::ofstream out(staging_ / name, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("failed writing " + (staging_ / name).string());
    names_.push_back(name);
  }

  std::vector<fs::path> commit() {
    std::vector<fs::path> final_paths;
    for (const std::string& name : names_) {
      fs::rename(staging_ / name, out_dir_ / name);
      final_paths.push_back(out_dir_ / name);
    }
    return final_paths;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path out_dir_;
  fs::path staging_;
  std::vector<std::string> names_;
};

std::string moments_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  write_moments_csv(out, rows);
  return out.str();
}

std::string probabilities_csv(std::span<const HitProbabilities> rows) {
  std::ostringstream out;
  write_probabilities_csv(out, rows);
  return out.str();
}

std::string histogram_csv(const Histogram& histogram) {
  std::ostringstream out;
  write_histogram_csv(out, histogram);
  return out.str();
}

std::string file_tag(const std::string& label) {
  const auto colon = label.find(':');
  std::string tag = colon == std::string::npos ? label : label.substr(0, colon);
  if (tag == "constant") tag = "constant_" + label.substr(colon + 1);
  return tag;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

struct BatchRun {
  std::vector<PathResult> results;
  ExperimentReport report;
};

BatchRun simulate_and_summarize(const Strategy& strategy, const SimulationSetup& setup, const RunConfig& config,
                                std::span<const double> by_times,
                                TerminalStatistic statistic = TerminalStatistic::performance) {
  BatchRun run;
  run.results = run_batch(strategy, setup, config.n_paths, config.threads);
  run.report = summarize(run.results, setup, strategy.label(), by_times, statistic, config.histogram_bins);
  return run;
}

std::vector<double> mean_inventory(std::span<const PathResult> results) {
  std::vector<double> means(results.front().samples.size(), 0.0);
  for (const PathResult& path : results) {
    for (std::size_t i = 0; i < means.size(); ++i) means[i] += path.samples[i].q;
  }
  for (double& m : means) m /= static_cast<double>(results.size());
  return means;
}

// -- presets ----------------------------------------------------------------

void run_single(const RunConfig& config, StagedOutput& out, json& summary) {
  const SimulationSetup setup = make_setup(config, config.params);
  const std::vector<double> by_times = setup.sample_times;
  if (config.surrogate.enabled) {
    const SurrogateProcess process{config.surrogate.mu, config.surrogate.s, config.params.initial_performance()};
    SimulationSetup surrogate_setup = setup;
    surrogate_setup.rules.price_floor.reset();
    surrogate_setup.rules.depletion_epsilon.reset();
    surrogate_setup.rules.barrier = DoubleBarrier{config.params.k_lower, config.params.h_upper};
    const auto results = run_surrogate_batch(process, surrogate_setup, config.n_paths, config.threads);
    ExperimentReport report = summarize(results, surrogate_setup, "surrogate", by_times,
                                        TerminalStatistic::performance, config.histogram_bins);
    out.write("moments.csv", moments_csv(report.rows));
    out.write("probabilities.csv", probabilities_csv(report.hit_probabilities));
    out.write("histogram.csv", histogram_csv(report.histogram));
    json j = report_to_json(report);
    j["surrogate"] = {{"mu", process.mu},
                      {"s", process.s},
                      {"y0", process.y0},
                      {"analytic_p_upper", surrogate_upper_probability(process, config.params.k_lower,
                                                                       config.params.h_upper)}};
    summary["report"] = j;
    return;
  }
  const Strategy strategy = make_configured_strategy(config.strategy, config, config.params);
  const TerminalStatistic statistic =
      config.running_penalty ? TerminalStatistic::p5_objective : TerminalStatistic::performance;
  const BatchRun run = simulate_and_summarize(strategy, setup, config, by_times, statistic);
  out.write("moments.csv", moments_csv(run.report.rows));
  out.write("probabilities.csv", probabilities_csv(run.report.hit_probabilities));
  out.write("histogram.csv", histogram_csv(run.report.histogram));
  summary["report"] = report_to_json(run.report);
}

void run_fig1(const RunConfig& config, StagedOutput& out, json& summary) {
  const ModelParams base = config.params;
  std::vector<std::pair<std::string, ModelParams>> variants;
  ModelParams low = base;
  low.sigma = base.sigma * std::sqrt(1000.0);
  ModelParams mid = base;
  mid.sigma = base.sigma * 10.0;
  variants.emplace_back("sigma_x_sqrt1000", low);
  variants.emplace_back("sigma_x10", mid);
  variants.emplace_back("base", base);

  constexpr std::size_t kPoints = 201;
  json curves = json::array();
  for (const auto& [name, params] : variants) {
    const double lambda = lambda_p1(params);
    const BarrierValueFn fn(lambda, base.k_lower, base.h_upper);
    std::ostringstream csv;
    csv << "y,J\n";
    for (std::size_t i = 0; i < kPoints; ++i) {
      double y = base.k_lower + (base.h_upper - base.k_lower) * static_cast<double>(i) / (kPoints - 1);
      if (i == kPoints - 1) y = base.h_upper;
      csv << format_number(y) << ',' << format_number(fn(y)) << '\n';
    }
    char label[32];
    const auto end = std::to_chars(label, label + sizeof(label), lambda, std::chars_format::general, 6).ptr;
    const std::string file = "fig1_lambda_" + std::string(label, end) + ".csv";
    out.write(file, csv.str());
    curves.push_back({{"variant", name}, {"sigma", params.sigma}, {"lambda", lambda}, {"file", file}});
  }
  summary["curves"] = curves;
}

void write_schedule(StagedOutput& out, const std::string& name, const std::string& strategy,
                    const ModelParams& params, std::span<const double> times) {
  std::ostringstream csv;
  csv << "t,rate,inventory\n";
  for (double t : times) {
    double q = 0.0, v = 0.0;
    if (strategy == "p1") {
      q = p1_inventory(t, params);
      v = p1_rate(t, MarketState{t, 0.0, q, params.s0}, params);
    } else if (strategy == "p0") {
      q = p0_inventory(t, params);
      v = p0_rate(t, MarketState{t, 0.0, q, params.s0}, params);
    } else {
      const AcCoefficients coeffs = AcCoefficients::from(params);
      q = ac_inventory(t, params, coeffs);
      v = ac_rate(t, MarketState{t, 0.0, q, params.s0}, params, coeffs);
    }
    csv << format_number(t) << ',' << format_number(v) << ',' << format_number(q) << '\n';
  }
  out.write(name, csv.str());
}

void run_fig2(const RunConfig& config, StagedOutput& out, json& summary) {
  json reports = json::array();
  const std::vector<double> by_times = {config.params.t_max};
  for (const ParameterVariation& variation : figure_variations(config.params)) {
    const SimulationSetup setup = make_setup(config, variation.params);
    for (const std::string strategy_label : {"p1", "p0"}) {
      const std::string stem = "fig2_" + variation.tag() + "_" + strategy_label;
      write_schedule(out, stem + "_schedule.csv", strategy_label, variation.params, setup.sample_times);
      const Strategy strategy = make_configured_strategy(strategy_label, config, variation.params);
      const BatchRun run = simulate_and_summarize(strategy, setup, config, by_times);
      out.write(stem + "_moments.csv", moments_csv(run.report.rows));
      out.write(stem + "_probabilities.csv", probabilities_csv(run.report.hit_probabilities));
      json j = report_to_json(run.report);
      j["variation"] = {{"parameter", variation.parameter}, {"value", variation.value}};
      reports.push_back(std::move(j));
    }
  }
  summary["reports"] = reports;
}

void run_fig2b(const RunConfig& config, StagedOutput& out, json& summary) {
  json reports = json::array();
  const std::vector<double> by_times = {config.params.t_max};
  const double y0 = config.params.initial_performance();
  const std::pair<std::string, double> widths[] = {{"narrow", 0.05}, {"wide", 0.5}};
  for (const ParameterVariation& variation : figure_variations(config.params)) {
    for (const auto& [band, half_width] : widths) {
      ModelParams params = variation.params;
      params.k_lower = y0 - half_width;
      params.h_upper = y0 + half_width;
      const SimulationSetup setup = make_setup(config, params);
      const Strategy strategy = make_configured_strategy("p1", config, params);
      const BatchRun run = simulate_and_summarize(strategy, setup, config, by_times);
      const std::string stem = "fig2b_" + variation.tag() + "_" + band;
      out.write(stem + "_moments.csv", moments_csv(run.report.rows));
      out.write(stem + "_probabilities.csv", probabilities_csv(run.report.hit_probabilities));
      json j = report_to_json(run.report);
      j["variation"] = {{"parameter", variation.parameter}, {"value", variation.value}, {"barriers", band}};
      reports.push_back(std::move(j));
    }
  }
  summary["reports"] = reports;
}

void run_fig3(const RunConfig& config, StagedOutput& out, json& summary) {
  const SimulationSetup setup = make_setup(config, config.params);
  const double by_time = config.params.t_max;
  json sweeps = json::array();
  for (const std::string strategy_label : {"p1", "p0"}) {
    const Strategy strategy = make_configured_strategy(strategy_label, config, config.params);
    const std::pair<std::string, std::vector<DoubleBarrier>> grids[] = {
        {"lower", lower_barrier_sweep(config.params)}, {"upper", upper_barrier_sweep(config.params)}};
    for (const auto& [which, grid] : grids) {
      const SweepResult sweep = barrier_sweep(strategy, setup, grid, config.n_paths, by_time, config.threads);
      std::ostringstream csv;
      csv << "k_lower,h_upper,p_upper,p_lower,p_neither,se_upper,se_lower,difference\n";
      json points = json::array();
      for (const SweepPoint& p : sweep.points) {
        const HitProbabilities& hp = p.probabilities;
        csv << format_number(p.k_lower) << ',' << format_number(p.h_upper) << ',' << format_number(hp.p_upper)
            << ',' << format_number(hp.p_lower) << ',' << format_number(hp.p_neither) << ','
            << format_number(hp.se_upper) << ',' << format_number(hp.se_lower) << ','
            << format_number(p.difference) << '\n';
        points.push_back({{"k_lower", p.k_lower},
                          {"h_upper", p.h_upper},
                          {"p_upper", hp.p_upper},
                          {"p_lower", hp.p_lower},
                          {"p_neither", hp.p_neither},
                          {"difference", p.difference}});
      }
      out.write("fig3_" + strategy_label + "_" + which + "_sweep.csv", csv.str());
      sweeps.push_back({{"strategy", strategy_label},
                        {"sweep", which},
                        {"by_time", by_time},
                        {"points", points},
                        {"diagnostics", sweep.diagnostics}});
    }
  }
  summary["sweeps"] = sweeps;
}

void run_table2_preset(const RunConfig& config, StagedOutput& out, json& summary) {
  const std::vector<Table2Row> rows = run_table2(config);
  std::ostringstream csv;
  csv << "parameter,value,t,p1_mean,p1_var,p0_mean,p0_var\n";
  json jrows = json::array();
  for (const Table2Row& r : rows) {
    csv << r.parameter << ',' << format_number(r.value) << ',' << format_number(r.t) << ','
        << format_number(r.p1_mean) << ',' << format_number(r.p1_variance) << ',' << format_number(r.p0_mean)
        << ',' << format_number(r.p0_variance) << '\n';
    jrows.push_back({{"parameter", r.parameter},
                     {"value", r.value},
                     {"t", r.t},
                     {"p1_mean", r.p1_mean},
                     {"p1_var", r.p1_variance},
                     {"p0_mean", r.p0_mean},
                     {"p0_var", r.p0_variance}});
  }
  out.write("table2.csv", csv.str());
  summary["rows"] = jrows;
}

std::vector<std::string> section5_strategies(const RunConfig& config) {
  std::vector<std::string> labels = {"p1", "ac"};
  if (config.external_strategy) labels.push_back("external:" + *config.external_strategy);
  return labels;
}

void run_fig4(const RunConfig& config, StagedOutput& out, json& summary) {
  const ModelParams& params = config.params;
  const SimulationSetup setup = make_setup(config, params);
  const AcCoefficients coeffs = AcCoefficients::from(params);
  const std::vector<std::string> labels = section5_strategies(config);

  std::vector<std::vector<double>> simulated_q;
  json reports = json::array();
  for (const std::string& label : labels) {
    const Strategy strategy = make_configured_strategy(label, config, params);
    const BatchRun run = simulate_and_summarize(strategy, setup, config, setup.sample_times,
                                                TerminalStatistic::p5_objective);
    simulated_q.push_back(mean_inventory(run.results));
    out.write("fig4_" + file_tag(label) + "_moments.csv", moments_csv(run.report.rows));
    reports.push_back(report_to_json(run.report));
  }

  std::ostringstream csv;
  csv << "t,q_p1,v_p1,q_ac,v_ac";
  for (const std::string& label : labels) csv << ",mean_q_" << file_tag(label);
  csv << '\n';
  for (std::size_t i = 0; i < setup.sample_times.size(); ++i) {
    const double t = setup.sample_times[i];
    const double q_p1 = p1_inventory(t, params);
    const double q_ac = ac_inventory(t, params, coeffs);
    csv << format_number(t) << ',' << format_number(q_p1) << ','
        << format_number(p1_rate(t, MarketState{t, 0.0, q_p1, params.s0}, params)) << ',' << format_number(q_ac)
        << ',' << format_number(ac_rate(t, MarketState{t, 0.0, q_ac, params.s0}, params, coeffs));
    for (const auto& q : simulated_q) csv << ',' << format_number(q[i]);
    csv << '\n';
  }
  out.write("fig4_trajectories.csv", csv.str());
  summary["ac"] = {{"big_gamma", coeffs.big_gamma}, {"zeta", coeffs.zeta}};
  summary["reports"] = reports;
}

void run_fig5(const RunConfig& config, StagedOutput& out, json& summary) {
  const SimulationSetup setup = make_setup(config, config.params);
  const std::vector<double> by_times = {config.params.t_max};
  std::ostringstream table;
  table << "strategy,n_paths,mean,variance\n";
  json reports = json::array();
  for (const std::string& label : section5_strategies(config)) {
    const Strategy strategy = make_configured_strategy(label, config, config.params);
    const BatchRun run = simulate_and_summarize(strategy, setup, config, by_times, TerminalStatistic::p5_objective);
    const Histogram& h = run.report.histogram;
    out.write("fig5_" + file_tag(label) + "_histogram.csv", histogram_csv(h));
    table << file_tag(label) << ',' << run.results.size() << ',' << format_number(h.sample_mean) << ','
          << format_number(h.sample_variance) << '\n';
    reports.push_back(report_to_json(run.report));
  }
  out.write("fig5_summary.csv", table.str());
  summary["statistic"] = "p5_objective";
  summary["reports"] = reports;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_moments_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << "t,mean,var,q05,q95\n";
  for (const ReportRow& r : rows) {
    out << format_number(r.t) << ',' << format_number(r.mean) << ',' << format_number(r.variance) << ','
        << format_number(r.q05) << ',' << format_number(r.q95) << '\n';
  }
}

void write_probabilities_csv(std::ostream& out, std::span<const HitProbabilities> rows) {
  out << "by_time,p_upper,p_lower,p_neither,se_upper,se_lower\n";
  for (const HitProbabilities& r : rows) {
    out << format_number(r.by_time) << ',' << format_number(r.p_upper) << ',' << format_number(r.p_lower) << ','
        << format_number(r.p_neither) << ',' << format_number(r.se_upper) << ',' << format_number(r.se_lower)
        << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out << format_number(histogram.edges[i]) << ',' << format_number(histogram.edges[i + 1]) << ','
        << histogram.counts[i] << '\n';
  }
}

json params_to_json(const ModelParams& p) {
  return {{"b", p.b},       {"l", p.l},   {"gamma", p.gamma},     {"sigma", p.sigma},
          {"phi", p.phi},   {"q0", p.q0}, {"s0", p.s0},           {"x0", p.x0},
          {"k_lower", p.k_lower}, {"h_upper", p.h_upper}, {"t_max", p.t_max}};
}

json report_to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const ReportRow& r : report.rows) {
    rows.push_back({{"t", r.t}, {"mean", r.mean}, {"var", r.variance}, {"q05", r.q05}, {"q95", r.q95}});
  }
  json hits = json::array();
  for (const HitProbabilities& h : report.hit_probabilities) {
    hits.push_back({{"by_time", h.by_time},
                    {"n_paths", h.n_paths},
                    {"n_upper", h.n_upper},
                    {"n_lower", h.n_lower},
                    {"n_neither", h.n_neither},
                    {"p_upper", h.p_upper},
                    {"p_lower", h.p_lower},
                    {"p_neither", h.p_neither},
                    {"se_upper", h.se_upper},
                    {"se_lower", h.se_lower}});
  }
  const ReportMetadata& m = report.metadata;
  return {{"rows", rows},
          {"hit_probabilities", hits},
          {"histogram",
           {{"edges", report.histogram.edges},
            {"counts", report.histogram.counts},
            {"mean", report.histogram.sample_mean},
            {"variance", report.histogram.sample_variance}}},
          {"metadata",
           {{"strategy", m.strategy},
            {"params", params_to_json(m.params)},
            {"n_paths", m.n_paths},
            {"dt", m.dt},
            {"seed", m.master_seed},
            {"running_penalty", m.running_penalty},
            {"post_stop_convention", m.post_stop_convention}}}};
}

std::string ParameterVariation::tag() const {
  if (parameter == "baseline") return "baseline";
  return parameter + "_" + format_number(value);
}

std::vector<ParameterVariation> table2_variations(const ModelParams& base) {
  std::vector<ParameterVariation> out;
  const auto add = [&](const std::string& name, double value) {
    ModelParams p = base;
    if (name == "b") p.b = value;
    if (name == "l") p.l = value;
    if (name == "gamma") {
      // Keep Y0 = 1 with Q0 = 1: S0 = 1 + gamma.
      p.s0 = p.s0 - base.gamma + value;
      p.gamma = value;
    }
    if (name == "sigma") p.sigma = value;
    out.push_back(ParameterVariation{name, value, p});
  };
  add("b", 0.001);
  add("b", 0.002);
  add("l", 0.001);
  add("l", 0.002);
  add("gamma", 0.05);
  add("gamma", 0.1);
  add("sigma", 0.1);
  add("sigma", 0.2);
  return out;
}

std::vector<ParameterVariation> figure_variations(const ModelParams& base) {
  std::vector<ParameterVariation> out;
  out.push_back(ParameterVariation{"baseline", 0.0, base});
  for (const ParameterVariation& v : table2_variations(base)) {
    if (!(v.params == base)) out.push_back(v);
  }
  return out;
}

std::vector<DoubleBarrier> lower_barrier_sweep(const ModelParams& base) {
  const double y0 = base.initial_performance();
  std::vector<DoubleBarrier> grid;
  for (double gap : {0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001}) {
    grid.push_back(DoubleBarrier{y0 - gap, base.h_upper});
  }
  return grid;
}

std::vector<DoubleBarrier> upper_barrier_sweep(const ModelParams& base) {
  const double y0 = base.initial_performance();
  std::vector<DoubleBarrier> grid;
  for (double gap : {0.001, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05}) {
    grid.push_back(DoubleBarrier{base.k_lower, y0 + gap});
  }
  return grid;
}

SimulationSetup make_setup(const RunConfig& config, const ModelParams& params) {
  SimulationSetup setup;
  setup.params = params;
  const bool liquidation = config.preset == "section5" || config.preset == "fig4" || config.preset == "fig5";
  if (liquidation) {
    setup.rules = StoppingRules::liquidation(params, config.price_floor.value_or(-HUGE_VAL));
    if (!config.price_floor) setup.rules.price_floor.reset();
  } else {
    setup.rules = StoppingRules::standard(params);
    setup.rules.price_floor = config.price_floor;
  }
  setup.dt = config.dt;
  setup.sample_times = config.sample_times;
  setup.seed = SeedSpec{config.master_seed};
  setup.running_penalty = config.running_penalty;
  if (!setup.sample_times.empty()) setup.rules.horizon = std::max(params.t_max, setup.sample_times.back());
  return setup;
}

Strategy make_configured_strategy(const std::string& label, const RunConfig& config, const ModelParams& params) {
  Strategy strategy = strategy_from_label(label, params);
  if (config.v_max) strategy = strategy.with_cap(*config.v_max);
  return strategy;
}

std::vector<Table2Row> run_table2(const RunConfig& config) {
  if (config.sample_times.empty()) throw std::invalid_argument("table2 needs sample times");
  std::vector<Table2Row> rows;
  for (const ParameterVariation& variation : table2_variations(config.params)) {
    SimulationSetup setup = make_setup(config, variation.params);
    // Paths are counter-seeded per step, so stopping the simulation at the
    // last sample time leaves every sampled value unchanged.
    setup.rules.horizon = config.sample_times.back();
    std::map<std::string, std::vector<MomentRow>> moments;
    for (const std::string label : {"p1", "p0"}) {
      const Strategy strategy = make_configured_strategy(label, config, variation.params);
      const auto results = run_batch(strategy, setup, config.n_paths, config.threads);
      moments[label] = moment_table(results, setup.sample_times);
    }
    for (std::size_t i = 0; i < setup.sample_times.size(); ++i) {
      rows.push_back(Table2Row{variation.parameter, variation.value, setup.sample_times[i], moments["p1"][i].mean,
                               moments["p1"][i].variance, moments["p0"][i].mean, moments["p0"][i].variance});
    }
  }
  return rows;
}

ExperimentOutput run_experiment(const RunConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  const std::string created_at = utc_timestamp();

  StagedOutput out(config.output_dir);
  json summary = {{"preset", config.preset}};
  const std::string& preset = config.preset;
  if (preset == "baseline" || preset == "section5") run_single(config, out, summary);
  else if (preset == "fig1") run_fig1(config, out, summary);
  else if (preset == "fig2") run_fig2(config, out, summary);
  else if (preset == "fig2b") run_fig2b(config, out, summary);
  else if (preset == "fig3") run_fig3(config, out, summary);
  else if (preset == "table2") run_table2_preset(config, out, summary);
  else if (preset == "fig4") run_fig4(config, out, summary);
  else if (preset == "fig5") run_fig5(config, out, summary);
  else throw ConfigError("unknown preset '" + preset + "'");

  summary["config"] = {{"params", params_to_json(config.params)},
                       {"strategy", config.strategy},
                       {"n_paths", config.n_paths},
                       {"dt", config.dt},
                       {"seed", config.master_seed}};
  out.write(preset + "_report.json", summary.dump(2) + "\n");

  ExperimentOutput result;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json manifest = {{"tool", "execbarrier"},
                   {"version", kToolVersion},
                   {"preset", preset},
                   {"seed", config.master_seed},
                   {"n_paths", config.n_paths},
                   {"dt", config.dt},
                   {"threads", config.threads},
                   {"config", emit_config(config)},
                   {"files", out.names()},
                   {"created_at", created_at},
                   {"wall_seconds", result.wall_seconds}};
  out.write("manifest.json", manifest.dump(2) + "\n");

  result.files = out.commit();
  result.manifest = result.files.back();
  result.files.pop_back();
  return result;
}

}  // namespace execbarrier
