#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "semilt/config.hpp"
#include "semilt/experiments.hpp"
#include "semilt/report_io.hpp"

using namespace semilt;

namespace {
ExperimentSpec small_spec(const std::string& name, std::int64_t paths = 64,
                          std::int64_t steps = 512) {
  ExperimentSpec spec = default_spec(name);
  spec.grid = TimeGrid(1.0, steps);
  spec.paths = paths;
  return spec;
}
}  // namespace

TEST_CASE("registry exposes at least twelve anchored experiments") {
  const auto& reg = experiment_registry();
  REQUIRE(reg.size() >= 12);
  std::set<std::string> names;
  for (const auto& e : reg) {
    REQUIRE_FALSE(e.name.empty());
    REQUIRE_FALSE(e.anchor.empty());
    REQUIRE(names.insert(e.name).second);
    REQUIRE(e.run != nullptr);
  }
  REQUIRE_THROWS_AS(find_experiment("nope"), std::invalid_argument);
}

TEST_CASE("every experiment runs at reduced scale and reports checks") {
  for (const auto& e : experiment_registry()) {
    auto spec = small_spec(e.name, e.name == "minmax_gap" ? 4 : 64);
    auto rep = run_experiment(spec, 2);
    INFO(e.name);
    REQUIRE(rep.name == e.name);
    REQUIRE_FALSE(rep.checks.empty());
    REQUIRE_FALSE(rep.config_echo.empty());
    REQUIRE(rep.residual_rows.size() == static_cast<std::size_t>(spec.paths));
  }
}

TEST_CASE("reports are byte-identical across reruns and shard counts") {
  auto spec = small_spec("gen_tanaka", 128);
  auto a = report_to_json(run_experiment(spec, 2));
  auto b = report_to_json(run_experiment(spec, 2));
  auto c = report_to_json(run_experiment(spec, 1));
  auto d = report_to_json(run_experiment(spec, 3));
  REQUIRE(a == b);
  REQUIRE(a == c);
  REQUIRE(a == d);
  auto csv1 = residuals_to_csv(run_experiment(spec, 1));
  auto csv2 = residuals_to_csv(run_experiment(spec, 3));
  REQUIRE(csv1 == csv2);
}

TEST_CASE("loosening the tolerance never flips pass into fail") {
  for (const auto& name : {"gen_tanaka", "comparison_main", "occupation_zero"}) {
    auto spec = small_spec(name);
    auto tight = run_experiment(spec, 2);
    spec.tol_scale = 10.0;
    auto loose = run_experiment(spec, 2);
    INFO(name);
    REQUIRE_FALSE((tight.pass && !loose.pass));
  }
}

TEST_CASE("gen_tanaka telescopes exactly at z = inf even at reduced scale") {
  auto rep = run_experiment(small_spec("gen_tanaka", 32), 2);
  REQUIRE(rep.summaries.at("residual_inf").max <= 1e-12);
}

TEST_CASE("skew_law honors a single-beta override and rejects out-of-range beta") {
  auto spec = small_spec("skew_law", 512, 1024);
  spec.params["beta"] = 0.5;
  auto rep = run_experiment(spec, 2);
  REQUIRE(rep.scalars.count("p_walk.beta=0.5") == 1);
  REQUIRE(rep.scalars.count("ks.beta=1_vs_half_normal") == 0);  // single-beta mode
  REQUIRE(rep.pass);

  spec.params["beta"] = 1.5;
  REQUIRE_THROWS_AS(run_experiment(spec, 2), std::invalid_argument);
}

TEST_CASE("comparison_main recovers the configured ratio") {
  auto spec = small_spec("comparison_main", 64, 2048);
  spec.params["ratio"] = 0.25;
  auto rep = run_experiment(spec, 2);
  REQUIRE(rep.pass);
  REQUIRE(rep.scalars.at("mean_theta") == Catch::Approx(0.25).margin(0.01));
}

TEST_CASE("perturbed_tanaka ladder medians come out strictly decreasing") {
  auto spec = small_spec("perturbed_tanaka_uniqueness", 256, 2048);
  auto rep = run_experiment(spec, 2);
  for (const auto& c : rep.checks) {
    INFO(c.name);
    REQUIRE(c.pass);
  }
}

TEST_CASE("experiment reports declare their tolerance checks monotonically") {
  auto rep = run_experiment(small_spec("barlow", 64, 1024), 2);
  for (const auto& c : rep.checks) {
    if (c.op == "<=") REQUIRE(c.pass == (c.value <= c.threshold));
    if (c.op == ">=") REQUIRE(c.pass == (c.value >= c.threshold));
    if (c.op == ">") REQUIRE(c.pass == (c.value > c.threshold));
  }
}

TEST_CASE("config echo in a report reparses to the spec that produced it") {
  auto spec = small_spec("gen_tanaka", 16);
  spec.params["z"] = 0.35;
  auto rep = run_experiment(spec, 1);
  RunConfig echo;
  echo.entries = rep.config_echo;
  // The echo stores params under "param.<name>".
  auto round = spec_from_config(echo);
  REQUIRE(round.name == spec.name);
  REQUIRE(round.grid == spec.grid);
  REQUIRE(round.paths == spec.paths);
  REQUIRE(round.seed == spec.seed);
  REQUIRE(round.params == spec.params);
}
