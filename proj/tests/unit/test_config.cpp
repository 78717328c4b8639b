#include <gtest/gtest.h>

#include <random>
#include <string>

#include "execbarrier/config.hpp"

namespace eb = execbarrier;

TEST(ParseConfig, EmptyDocumentGivesBaseline) {
  const eb::RunConfig c = eb::parse_config("");
  EXPECT_EQ(c.preset, "baseline");
  EXPECT_EQ(c.params, eb::ModelParams::baseline());
  EXPECT_EQ(c.n_paths, 10000u);
  EXPECT_EQ(c.dt, 1e-4);
  EXPECT_EQ(c.master_seed, 42u);
  EXPECT_EQ(c.sample_times.size(), 101u);
  EXPECT_EQ(c.sample_times.back(), 1.0);
}

TEST(ParseConfig, Section5Preset) {
  const eb::RunConfig c = eb::parse_config("", std::string("section5"));
  EXPECT_EQ(c.params, eb::ModelParams::section5());
  EXPECT_EQ(c.params.b, 0.0);
  EXPECT_TRUE(c.running_penalty);
  ASSERT_TRUE(c.price_floor.has_value());
  EXPECT_EQ(*c.price_floor, 19.9);
}

TEST(ParseConfig, Table2SampleTimes) {
  const eb::RunConfig c = eb::parse_config("preset: table2\n");
  EXPECT_EQ(c.sample_times, (std::vector<double>{0.02, 0.06, 0.10}));
}

TEST(ParseConfig, OverridesApply) {
  const eb::RunConfig c = eb::parse_config(
      "preset: fig3\n"
      "params:\n  sigma: 0.2\n  t_max: 0.5\n"
      "run:\n  strategy: p0\n  paths: 123\n  seed: 7\n  v_max: 50\n"
      "output:\n  dir: somewhere\n");
  EXPECT_EQ(c.preset, "fig3");
  EXPECT_EQ(c.params.sigma, 0.2);
  EXPECT_EQ(c.strategy, "p0");
  EXPECT_EQ(c.n_paths, 123u);
  EXPECT_EQ(c.master_seed, 7u);
  EXPECT_EQ(c.v_max, 50.0);
  EXPECT_EQ(c.output_dir, "somewhere");
  EXPECT_EQ(c.sample_times.back(), 0.5);
}

TEST(ParseConfig, CommandLinePresetWins) {
  EXPECT_EQ(eb::parse_config("preset: fig1\n", std::string("fig2")).preset, "fig2");
}

namespace {

std::string error_of(const std::string& doc) {
  try {
    eb::parse_config(doc);
  } catch (const eb::ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseConfig, ErrorsCarryContext) {
  EXPECT_EQ(error_of("params:\n  k_lower: 1.2\n  h_upper: 1.3\n"),
            "params: lower barrier above initial performance");
  EXPECT_NE(error_of("params:\n  gamma: 0.0001\n").find("2*gamma - b"), std::string::npos);
  EXPECT_EQ(error_of("run:\n  pathz: 3\n"), "line 2: key 'run.pathz': unknown key");
  EXPECT_EQ(error_of("bogus: 1\n"), "line 1: key 'bogus': unknown key");
  EXPECT_NE(error_of("params:\n  b: abc\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("params: [1, 2\n").find("line"), std::string::npos);
  EXPECT_NE(error_of("preset: nope\n").find("unknown preset"), std::string::npos);
  EXPECT_NE(error_of("run:\n  sample_times: [0.00005]\n").find("multiple of dt"), std::string::npos);
  EXPECT_NE(error_of("run:\n  paths: 0\n").find("run.paths"), std::string::npos);
  EXPECT_NE(error_of("run:\n  paths: -5\n").find("non-negative integer"), std::string::npos);
}

TEST(EmitConfig, RoundTripsPresetDefaults) {
  for (const auto& preset : eb::list_presets()) {
    const eb::RunConfig c = eb::preset_defaults(preset.name);
    EXPECT_EQ(eb::parse_config(eb::emit_config(c)), c) << preset.name;
  }
}

// Property: random valid configurations survive emit -> parse unchanged,
// including awkward doubles that need all 17 significant digits.
TEST(EmitConfig, RoundTripsRandomConfigs) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& presets = eb::list_presets();
  for (int trial = 0; trial < 300; ++trial) {
    eb::RunConfig c = eb::preset_defaults(presets[trial % presets.size()].name);
    c.params.gamma = 0.05 + 0.1 * u(gen);
    c.params.b = c.params.gamma * u(gen);
    c.params.l = 1e-5 + 1e-2 * u(gen);
    c.params.sigma = 0.01 + u(gen);
    c.params.phi = u(gen) < 0.5 ? 0.0 : 1e-3 * u(gen);
    c.params.k_lower = c.params.initial_performance() - 0.01 - u(gen);
    c.params.h_upper = c.params.initial_performance() + 0.01 + u(gen);
    c.n_paths = 1 + static_cast<std::size_t>(1e6 * u(gen));
    c.master_seed = gen();
    c.threads = 1 + trial % 8;
    c.running_penalty = u(gen) < 0.5;
    c.v_max = u(gen) < 0.5 ? std::optional<double>(1e3 * u(gen)) : std::nullopt;
    c.price_floor = u(gen) < 0.5 ? std::optional<double>(u(gen)) : std::nullopt;
    c.external_strategy = u(gen) < 0.3 ? std::optional<std::string>("rates: v1.csv") : std::nullopt;
    c.strategy = trial % 3 == 0 ? "constant:1.5" : "ac";
    c.surrogate = {u(gen) < 0.5, u(gen) - 0.5, 0.05 + u(gen)};
    c.output_dir = "out dir/#" + std::to_string(trial);
    const eb::RunConfig back = eb::parse_config(eb::emit_config(c));
    ASSERT_EQ(back, c) << eb::emit_config(c);
  }
}
