#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "execbarrier/closed_form.hpp"
#include "execbarrier/config.hpp"
#include "execbarrier/experiments.hpp"
#include "execbarrier/model.hpp"
#include "execbarrier/sim_engine.hpp"
#include "execbarrier/stats.hpp"
#include "execbarrier/strategies.hpp"

namespace py = pybind11;
using namespace execbarrier;

namespace {

// Simulation releases the GIL; a Python-defined rate rule must take it back.
Strategy strategy_from_python(const std::string& label, py::function fn) {
  auto holder = std::make_shared<py::function>(std::move(fn));
  return Strategy(label, [holder](double t, const MarketState& s, const ModelParams& p) {
    py::gil_scoped_acquire gil;
    return (*holder)(t, s, p).cast<double>();
  });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Barrier-target optimal execution core";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_static("baseline", &ModelParams::baseline)
      .def_static("section5", &ModelParams::section5)
      .def_readwrite("b", &ModelParams::b)
      .def_readwrite("l", &ModelParams::l)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def_readwrite("phi", &ModelParams::phi)
      .def_readwrite("q0", &ModelParams::q0)
      .def_readwrite("s0", &ModelParams::s0)
      .def_readwrite("x0", &ModelParams::x0)
      .def_readwrite("k_lower", &ModelParams::k_lower)
      .def_readwrite("h_upper", &ModelParams::h_upper)
      .def_readwrite("t_max", &ModelParams::t_max)
      .def("initial_performance", &ModelParams::initial_performance)
      .def("validate", &ModelParams::validate)
      .def(py::self == py::self)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(b=" + format_number(p.b) + ", l=" + format_number(p.l) +
               ", gamma=" + format_number(p.gamma) + ", sigma=" + format_number(p.sigma) +
               ", phi=" + format_number(p.phi) + ", q0=" + format_number(p.q0) + ", s0=" + format_number(p.s0) +
               ", k_lower=" + format_number(p.k_lower) + ", h_upper=" + format_number(p.h_upper) +
               ", t_max=" + format_number(p.t_max) + ")";
      });

  py::class_<MarketState>(m, "MarketState")
      .def(py::init<double, double, double, double>(), py::arg("t") = 0.0, py::arg("x") = 0.0, py::arg("q") = 0.0,
           py::arg("s") = 0.0)
      .def_readwrite("t", &MarketState::t)
      .def_readwrite("x", &MarketState::x)
      .def_readwrite("q", &MarketState::q)
      .def_readwrite("s", &MarketState::s);
  m.def("initial_state", &initial_state);

  py::class_<PerformanceSpec>(m, "PerformanceSpec")
      .def(py::init<bool, double>(), py::arg("include_running_penalty") = false,
           py::arg("accumulated_penalty") = 0.0)
      .def_readwrite("include_running_penalty", &PerformanceSpec::include_running_penalty)
      .def_readwrite("accumulated_penalty", &PerformanceSpec::accumulated_penalty);

  m.def("performance", &performance, py::arg("state"), py::arg("params"), py::arg("spec") = PerformanceSpec{});
  m.def("performance_drift", &performance_drift, py::arg("state"), py::arg("v"), py::arg("params"),
        py::arg("spec") = PerformanceSpec{});
  m.def("performance_diffusion", &performance_diffusion);

  py::class_<StepOutcome>(m, "StepOutcome")
      .def_readonly("state", &StepOutcome::state)
      .def_readonly("executed_rate", &StepOutcome::executed_rate)
      .def_readonly("clamped", &StepOutcome::clamped);
  m.def("step_dynamics", &step_dynamics, py::arg("state"), py::arg("v"), py::arg("dt"), py::arg("dw"),
        py::arg("params"));

  // strategies
  py::class_<Strategy>(m, "Strategy")
      .def(py::init(&strategy_from_python), py::arg("label"), py::arg("rule"))
      .def_property_readonly("label", &Strategy::label)
      .def_property_readonly("v_max", &Strategy::v_max)
      .def("with_cap", &Strategy::with_cap)
      .def("__call__", &Strategy::operator());
  py::class_<AcCoefficients>(m, "AcCoefficients")
      .def_static("from_params", &AcCoefficients::from)
      .def_readonly("big_gamma", &AcCoefficients::big_gamma)
      .def_readonly("zeta", &AcCoefficients::zeta);
  m.def("p1_rate", &p1_rate);
  m.def("p1_inventory", &p1_inventory);
  m.def("p0_rate", &p0_rate);
  m.def("p0_inventory", &p0_inventory);
  m.def("ac_rate", &ac_rate);
  m.def("ac_inventory", &ac_inventory);
  m.def("strategy_from_label", &strategy_from_label);

  // closed forms
  m.def("lambda_p1", &lambda_p1);
  m.def("lambda_p1prime", &lambda_p1prime);
  py::class_<BarrierValueFn>(m, "BarrierValueFn")
      .def(py::init<double, double, double>(), py::arg("lam"), py::arg("k_lower"), py::arg("h_upper"))
      .def_property_readonly("lam", &BarrierValueFn::lambda)
      .def_property_readonly("lambda_nonpositive", &BarrierValueFn::lambda_nonpositive)
      .def("__call__", &BarrierValueFn::operator());
  m.def("barrier_value", &barrier_value);
  m.def("h2_closed_form", &h2_closed_form);
  m.def("h2_as_printed", &h2_as_printed);
  m.def("h2_ode_oracle", [](const ModelParams& p, std::size_t n) {
    H2Table table = h2_ode_oracle(p, n);
    return py::make_tuple(table.t, table.h2);
  });
  m.def("p0_value", &p0_value);

  // simulation
  py::enum_<StopCause>(m, "StopCause")
      .value("upper", StopCause::upper)
      .value("lower", StopCause::lower)
      .value("price_floor", StopCause::price_floor)
      .value("depleted", StopCause::depleted)
      .value("horizon", StopCause::horizon)
      .value("aborted", StopCause::aborted);
  py::class_<DoubleBarrier>(m, "DoubleBarrier")
      .def(py::init<double, double>(), py::arg("k_lower"), py::arg("h_upper"))
      .def_readwrite("k_lower", &DoubleBarrier::k_lower)
      .def_readwrite("h_upper", &DoubleBarrier::h_upper);
  py::class_<StoppingRules>(m, "StoppingRules")
      .def(py::init<>())
      .def_static("standard", &StoppingRules::standard)
      .def_static("liquidation", &StoppingRules::liquidation)
      .def_readwrite("barrier", &StoppingRules::barrier)
      .def_readwrite("price_floor", &StoppingRules::price_floor)
      .def_readwrite("depletion_epsilon", &StoppingRules::depletion_epsilon)
      .def_readwrite("horizon", &StoppingRules::horizon);
  py::class_<SimulationSetup>(m, "SimulationSetup")
      .def(py::init<>())
      .def_readwrite("params", &SimulationSetup::params)
      .def_readwrite("rules", &SimulationSetup::rules)
      .def_readwrite("dt", &SimulationSetup::dt)
      .def_readwrite("sample_times", &SimulationSetup::sample_times)
      .def_property(
          "master_seed", [](const SimulationSetup& s) { return s.seed.master_seed; },
          [](SimulationSetup& s, std::uint64_t seed) { s.seed.master_seed = seed; })
      .def_readwrite("running_penalty", &SimulationSetup::running_penalty);
  py::class_<PathSample>(m, "PathSample")
      .def_readonly("t", &PathSample::t)
      .def_readonly("x", &PathSample::x)
      .def_readonly("q", &PathSample::q)
      .def_readonly("s", &PathSample::s)
      .def_readonly("y", &PathSample::y);
  py::class_<ObjectiveTerms>(m, "ObjectiveTerms")
      .def_readonly("trading_revenue", &ObjectiveTerms::trading_revenue)
      .def_readonly("terminal_inventory_value", &ObjectiveTerms::terminal_inventory_value)
      .def_readonly("running_penalty", &ObjectiveTerms::running_penalty)
      .def("total", &ObjectiveTerms::total);
  py::class_<PathResult>(m, "PathResult")
      .def_readonly("stop_cause", &PathResult::stop_cause)
      .def_readonly("stop_time", &PathResult::stop_time)
      .def_readonly("samples", &PathResult::samples)
      .def_readonly("clamp_events", &PathResult::clamp_events)
      .def_readonly("objective", &PathResult::objective)
      .def_readonly("final_y", &PathResult::final_y)
      .def_readonly("diagnostic", &PathResult::diagnostic)
      .def("hit_barrier", &PathResult::hit_barrier);
  m.def("simulate_path", &simulate_path, py::call_guard<py::gil_scoped_release>());
  m.def("run_batch", &run_batch, py::arg("strategy"), py::arg("setup"), py::arg("n_paths"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  py::class_<SurrogateProcess>(m, "SurrogateProcess")
      .def(py::init<double, double, double>(), py::arg("mu") = 0.0, py::arg("s") = 0.1, py::arg("y0") = 1.0)
      .def_readwrite("mu", &SurrogateProcess::mu)
      .def_readwrite("s", &SurrogateProcess::s)
      .def_readwrite("y0", &SurrogateProcess::y0);
  m.def("run_surrogate_batch", &run_surrogate_batch, py::arg("process"), py::arg("setup"), py::arg("n_paths"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("surrogate_upper_probability", &surrogate_upper_probability);

  // statistics
  py::class_<HitProbabilities>(m, "HitProbabilities")
      .def_readonly("by_time", &HitProbabilities::by_time)
      .def_readonly("n_paths", &HitProbabilities::n_paths)
      .def_readonly("n_upper", &HitProbabilities::n_upper)
      .def_readonly("n_lower", &HitProbabilities::n_lower)
      .def_readonly("n_neither", &HitProbabilities::n_neither)
      .def_readonly("p_upper", &HitProbabilities::p_upper)
      .def_readonly("p_lower", &HitProbabilities::p_lower)
      .def_readonly("p_neither", &HitProbabilities::p_neither)
      .def_readonly("se_upper", &HitProbabilities::se_upper)
      .def_readonly("se_lower", &HitProbabilities::se_lower);
  m.def("hitting_probabilities",
        [](const std::vector<PathResult>& r, double by) { return hitting_probabilities(r, by); });
  py::class_<MomentRow>(m, "MomentRow")
      .def_readonly("t", &MomentRow::t)
      .def_readonly("mean", &MomentRow::mean)
      .def_readonly("variance", &MomentRow::variance);
  m.def("moment_table", [](const std::vector<PathResult>& r, const std::vector<double>& times) {
    return moment_table(r, times);
  });
  m.def("nearest_rank_quantile", &nearest_rank_quantile);
  py::enum_<TerminalStatistic>(m, "TerminalStatistic")
      .value("performance", TerminalStatistic::performance)
      .value("p5_objective", TerminalStatistic::p5_objective);
  py::class_<Histogram>(m, "Histogram")
      .def_readonly("edges", &Histogram::edges)
      .def_readonly("counts", &Histogram::counts)
      .def_readonly("sample_mean", &Histogram::sample_mean)
      .def_readonly("sample_variance", &Histogram::sample_variance);
  m.def(
      "terminal_histogram",
      [](const std::vector<PathResult>& r, TerminalStatistic stat, std::size_t bins) {
        return terminal_histogram(r, stat, bins);
      },
      py::arg("results"), py::arg("statistic") = TerminalStatistic::performance, py::arg("n_bins") = 50);

  // configuration and experiments
  py::class_<SurrogateConfig>(m, "SurrogateConfig")
      .def(py::init<>())
      .def_readwrite("enabled", &SurrogateConfig::enabled)
      .def_readwrite("mu", &SurrogateConfig::mu)
      .def_readwrite("s", &SurrogateConfig::s);
  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("preset", &RunConfig::preset)
      .def_readwrite("params", &RunConfig::params)
      .def_readwrite("strategy", &RunConfig::strategy)
      .def_readwrite("n_paths", &RunConfig::n_paths)
      .def_readwrite("dt", &RunConfig::dt)
      .def_readwrite("sample_times", &RunConfig::sample_times)
      .def_readwrite("master_seed", &RunConfig::master_seed)
      .def_readwrite("threads", &RunConfig::threads)
      .def_readwrite("running_penalty", &RunConfig::running_penalty)
      .def_readwrite("v_max", &RunConfig::v_max)
      .def_readwrite("price_floor", &RunConfig::price_floor)
      .def_readwrite("external_strategy", &RunConfig::external_strategy)
      .def_readwrite("histogram_bins", &RunConfig::histogram_bins)
      .def_readwrite("surrogate", &RunConfig::surrogate)
      .def_property(
          "output_dir", [](const RunConfig& c) { return c.output_dir.string(); },
          [](RunConfig& c, const std::string& dir) { c.output_dir = dir; })
      .def(py::self == py::self);
  m.def("list_presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : list_presets()) out.emplace_back(p.name, p.description);
    return out;
  });
  m.def("preset_defaults", [](const std::string& name) { return preset_defaults(name); });
  m.def(
      "parse_config",
      [](const std::string& doc, std::optional<std::string> preset) { return parse_config(doc, preset); },
      py::arg("document") = "", py::arg("preset") = py::none());
  m.def("emit_config", &emit_config);
  m.def("validate_config", &validate);
  py::class_<ExperimentOutput>(m, "ExperimentOutput")
      .def_property_readonly("files",
                             [](const ExperimentOutput& o) {
                               std::vector<std::string> files;
                               for (const auto& f : o.files) files.push_back(f.string());
                               return files;
                             })
      .def_property_readonly("manifest", [](const ExperimentOutput& o) { return o.manifest.string(); })
      .def_readonly("wall_seconds", &ExperimentOutput::wall_seconds);
  m.def("run_experiment", &run_experiment, py::call_guard<py::gil_scoped_release>());
}
