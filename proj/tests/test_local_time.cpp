#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semilt/balayage.hpp"
#include "semilt/brownian.hpp"
#include "semilt/comparison.hpp"
#include "semilt/local_time.hpp"
#include "semilt/stats.hpp"
#include "semilt/variation.hpp"

using namespace semilt;

namespace {

constexpr double kHalfNormalMean = 0.79788456080286535588;

SamplePath scaled(const SamplePath& x, double c) {
  std::vector<double> v(x.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * x.values[i];
  return SamplePath(x.grid, std::move(v));
}

SamplePath shifted(const SamplePath& x, double c) {
  std::vector<double> v(x.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.values[i] + c;
  return SamplePath(x.grid, std::move(v));
}

SamplePath abs_path(const SamplePath& x) {
  std::vector<double> v(x.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(x.values[i]);
  return SamplePath(x.grid, std::move(v));
}

}  // namespace

TEST_CASE("lt_occupation basics") {
  TimeGrid g(1.0, 256);

  SECTION("constant path accrues no local time at any level") {
    SamplePath p(g, std::vector<double>(257, 0.7));
    for (double level : {0.0, 0.7, 1.0})
      REQUIRE(lt_occupation(p, level).terminal() == 0.0);
  }

  SECTION("bandwidth must be positive") {
    SamplePath p(g, std::vector<double>(257, 0.0));
    EstimatorConfig cfg;
    cfg.bandwidth_scale = -1.0;
    REQUIRE_THROWS_AS(lt_occupation(p, 0.0, cfg), std::invalid_argument);
  }

  SECTION("scaling the path by 2 with doubled bandwidth doubles the curve exactly") {
    auto b = sample_brownian(TimeGrid(1.0, 2048), SeedSpec{17, 3});
    EstimatorConfig cfg1;
    EstimatorConfig cfg2;
    cfg2.bandwidth = 2.0 * cfg1.eps(b.grid);
    auto c1 = lt_occupation(b, 0.0, cfg1);
    auto c2 = lt_occupation(scaled(b, 2.0), 0.0, cfg2);
    for (std::size_t i = 0; i < c1.values.size(); ++i)
      REQUIRE(c2.values[i] == 2.0 * c1.values[i]);
  }

  SECTION("Brownian Monte Carlo mean matches E|B_1|") {
    TimeGrid fine(1.0, 4096);
    std::vector<double> terms;
    for (std::uint64_t s = 0; s < 1024; ++s)
      terms.push_back(lt_occupation(sample_brownian(fine, SeedSpec{1001, s}), 0.0).terminal());
    REQUIRE(std::abs(mean_of(terms) - kHalfNormalMean) <= 3.0 * stderr_of(terms) + 0.03);
  }
}

TEST_CASE("lt_upcrossing hand counts") {
  TimeGrid g(1.0, 4);
  EstimatorConfig cfg;
  cfg.bandwidth = 0.5;

  SECTION("monotone rise from the level through the band counts once") {
    SamplePath p(g, {0.0, 0.25, 0.5, 0.75, 1.0});
    auto c = lt_upcrossing(p, 0.0, cfg);
    REQUIRE(c.terminal() == 1.0);  // 2 eps
  }

  SECTION("sawtooth crossing the band three times upward gives 6 eps") {
    TimeGrid g6(1.0, 6);
    SamplePath p(g6, {0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0});
    auto c = lt_upcrossing(p, 0.0, cfg);
    REQUIRE(c.terminal() == 3.0);
  }

  SECTION("curves are nondecreasing and start at zero") {
    auto b = sample_brownian(TimeGrid(1.0, 2048), SeedSpec{5, 5});
    for (auto est : {LtEstimator::occupation, LtEstimator::upcrossing}) {
      auto c = lt_estimate(b, 0.0, est);
      REQUIRE(c.values.front() == 0.0);
      for (std::size_t i = 1; i < c.values.size(); ++i)
        REQUIRE(c.values[i] >= c.values[i - 1]);
    }
  }
}

TEST_CASE("lt_tanaka residual structure") {
  SECTION("path strictly above the level telescopes to zero") {
    TimeGrid g(1.0, 128);
    auto b = sample_brownian(g, SeedSpec{7, 1});
    auto p = shifted(b, 10.0);
    auto c = lt_tanaka(p, 0.0, TanakaSide::right);
    for (double v : c.values) REQUIRE(std::abs(v) <= 1e-12);
  }

  SECTION("bounded-variation path loses its residual as N grows") {
    auto residual = [](std::int64_t n) {
      TimeGrid g(1.0, n);
      std::vector<double> v(static_cast<std::size_t>(n + 1));
      for (std::int64_t k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = g.time(k) - 0.5;
      return lt_tanaka(SamplePath(g, v), 0.0, TanakaSide::right).terminal();
    };
    double coarse = residual(100), fine = residual(10000);
    REQUIRE(std::abs(fine) < std::abs(coarse));
    REQUIRE(std::abs(fine) <= 3e-4);
  }

  SECTION("agrees with the occupation estimator on matched Brownian seeds") {
    TimeGrid g(1.0, 4096);
    std::vector<double> diffs;
    for (std::uint64_t s = 0; s < 1024; ++s) {
      auto b = sample_brownian(g, SeedSpec{2002, s});
      diffs.push_back(lt_tanaka(b, 0.0, TanakaSide::right).terminal() -
                      lt_occupation(b, 0.0).terminal());
    }
    double allow = 3.0 * stderr_of(diffs) + std::pow(g.dt(), 0.25);
    REQUIRE(std::abs(mean_of(diffs)) <= allow);
  }

  SECTION("scaling by 2 scales the curve by exactly 2") {
    TimeGrid g(1.0, 1024);
    auto b = sample_brownian(g, SeedSpec{21, 9});
    auto c1 = lt_tanaka(b, 0.0, TanakaSide::right);
    auto c2 = lt_tanaka(scaled(b, 2.0), 0.0, TanakaSide::right);
    for (std::size_t i = 0; i < c1.values.size(); ++i)
      REQUIRE(c2.values[i] == 2.0 * c1.values[i]);
  }
}

TEST_CASE("shift invariance across all estimators") {
  TimeGrid g(1.0, 2048);
  auto b = sample_brownian(g, SeedSpec{33, 2});
  const double a = 0.25;
  auto down = shifted(b, -a);
  for (auto est : {LtEstimator::occupation, LtEstimator::upcrossing, LtEstimator::tanaka_right,
                   LtEstimator::tanaka_left, LtEstimator::tanaka_symmetric}) {
    auto at_level = lt_estimate(b, a, est);
    auto at_zero = lt_estimate(down, 0.0, est);
    for (std::size_t i = 0; i < at_level.values.size(); ++i)
      REQUIRE(at_level.values[i] == Catch::Approx(at_zero.values[i]).margin(1e-12));
  }
}

TEST_CASE("right_left_gap") {
  SECTION("strictly positive path has an exactly zero gap") {
    TimeGrid g(1.0, 64);
    auto p = shifted(sample_brownian(g, SeedSpec{3, 3}), 5.0);
    REQUIRE(right_left_gap(p, 0.0) == 0.0);
  }

  SECTION("Brownian gap is statistically zero") {
    TimeGrid g(1.0, 1024);
    std::vector<double> gaps;
    for (std::uint64_t s = 0; s < 2048; ++s)
      gaps.push_back(right_left_gap(sample_brownian(g, SeedSpec{44, s}), 0.0));
    REQUIRE(std::abs(mean_of(gaps)) <= 3.0 * stderr_of(gaps) + 1e-15);
  }

  SECTION("path parked at zero then rising with drift accrues twice the drift") {
    TimeGrid g(1.0, 5);
    SamplePath p(g, {0.0, 0.0, 0.0, 0.1, 0.2, 0.3});
    REQUIRE(right_left_gap(p, 0.0) == Catch::Approx(0.2).margin(1e-15));
  }
}

TEST_CASE("occupation_formula_check") {
  TimeGrid g(1.0, 4096);
  auto b = sample_brownian(g, SeedSpec{55, 0});
  const double eps = EstimatorConfig{}.eps(g);
  LevelGrid levels{-4.0, 4.0, static_cast<std::int64_t>(8.0 / eps) + 1};

  SECTION("f = 1 reproduces the quadratic variation") {
    auto r = occupation_formula_check(b, [](double) { return 1.0; }, levels);
    REQUIRE(r.range_covered);
    REQUIRE(r.lhs == Catch::Approx(quadratic_variation(b).terminal()).epsilon(1e-12));
    REQUIRE(r.relative_residual <= 0.05);
  }

  SECTION("f supported away from the path range vanishes on both sides") {
    auto r = occupation_formula_check(
        b, [](double a) { return std::exp(-(a - 50.0) * (a - 50.0)); }, levels);
    REQUIRE(r.lhs <= 1e-300);
    REQUIRE(r.relative_residual <= 1e-12);
  }

  SECTION("Gaussian bump stays within ten percent") {
    auto r = occupation_formula_check(
        b, [](double a) { return std::exp(-2.0 * a * a); }, levels);
    REQUIRE(r.relative_residual <= 0.10);
  }

  SECTION("a level grid that misses the path range is flagged") {
    LevelGrid narrow{-0.01, 0.01, 5};
    auto r = occupation_formula_check(b, [](double) { return 1.0; }, narrow);
    REQUIRE_FALSE(r.range_covered);
  }
}

TEST_CASE("support_check") {
  TimeGrid g(1.0, 4096);

  SECTION("occupation estimator never charges outside its band") {
    auto b = sample_brownian(g, SeedSpec{66, 1});
    auto c = lt_occupation(b, 0.0);
    REQUIRE(support_check(c, b, 0.0) == 0.0);
  }

  SECTION("upcrossing mass is bounded by the total") {
    auto b = sample_brownian(g, SeedSpec{66, 2});
    auto c = lt_upcrossing(b, 0.0);
    REQUIRE(support_check(c, b, 0.0) <= c.terminal());
  }

  SECTION("tanaka mass off the level is a small fraction of the total") {
    std::vector<double> frac;
    for (std::uint64_t s = 0; s < 256; ++s) {
      auto b = sample_brownian(g, SeedSpec{66, s});
      auto c = lt_tanaka(b, 0.0, TanakaSide::right);
      double total = lt_occupation(b, 0.0).terminal();
      if (total > 0.1) frac.push_back(std::abs(support_check(c, b, 0.0)) / total);
    }
    REQUIRE(mean_of(frac) <= 0.05);
  }
}

TEST_CASE("balayage_transform") {
  TimeGrid g(1.0, 2048);

  SECTION("k = 1 is the identity") {
    auto b = sample_brownian(g, SeedSpec{77, 0});
    std::vector<double> k(b.values.size(), 1.0);
    auto r = balayage_transform(b, k);
    REQUIRE(r.transformed.values == b.values);
    REQUIRE(r.residual_sup() <= 1e-12);
  }

  SECTION("local-time truncation weight reproduces the integral form") {
    std::vector<double> res;
    for (std::uint64_t s = 0; s < 256; ++s) {
      auto b = sample_brownian(g, SeedSpec{77, s});
      auto lt = lt_tanaka(b, 0.0, TanakaSide::symmetric);
      std::vector<double> k(b.values.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = lt.values[i] <= 0.3 ? 1.0 : 0.0;
      res.push_back(balayage_transform(b, k).residual_sup());
    }
    REQUIRE(median_of(res) <= 0.1);
  }

  SECTION("local time of the transformed path matches the k-weighted measure") {
    std::vector<double> rel;
    for (std::uint64_t s = 0; s < 256; ++s) {
      auto b = sample_brownian(g, SeedSpec{78, s});
      std::vector<double> k(b.values.size());
      for (std::size_t i = 0; i < k.size(); ++i)
        k[i] = 1.0 + 0.5 * std::sin(6.28318530717958648 * g.time(static_cast<std::int64_t>(i)));
      auto r = balayage_transform(b, k);
      double lhs = lt_occupation(r.transformed, 0.0).terminal();
      auto base = lt_occupation(b, 0.0);
      double rhs = 0.0;
      for (std::int64_t j = 0; j < g.steps; ++j)
        rhs += k[static_cast<std::size_t>(j)] * (base.at(j + 1) - base.at(j));
      if (rhs > 0.2) rel.push_back(std::abs(lhs - rhs) / rhs);
    }
    REQUIRE(mean_of(rel) <= 0.10);
  }
}

TEST_CASE("domination_diagnostic") {
  TimeGrid g(1.0, 4096);

  SECTION("X = 0.5 |B| against Y = |B|: hypotheses hold and theta is one half") {
    for (std::uint64_t s = 0; s < 64; ++s) {
      auto y = abs_path(sample_brownian(g, SeedSpec{88, s}));
      auto x = scaled(y, 0.5);
      auto rep = domination_diagnostic(x, y);
      REQUIRE(rep.hypotheses_ok);
      REQUIRE(rep.violation_count == 0);
      for (const auto& w : rep.windows)
        if (w.active) REQUIRE(w.theta_raw == Catch::Approx(0.5).margin(1e-9));
    }
  }

  SECTION("X = Y is the exact equality case") {
    auto y = abs_path(sample_brownian(g, SeedSpec{88, 99}));
    auto rep = domination_diagnostic(y, y);
    REQUIRE(rep.hypotheses_ok);
    REQUIRE(rep.violation_count == 0);
    for (const auto& w : rep.windows)
      if (w.active) REQUIRE(w.theta_raw == 1.0);
  }

  SECTION("a stranger path raises the zero-set inclusion flag") {
    auto y = abs_path(sample_brownian(g, SeedSpec{88, 1}));
    auto x = abs_path(sample_brownian(g, SeedSpec{88, 2}));
    auto rep = domination_diagnostic(x, y);
    REQUIRE_FALSE(rep.zero_set_included);
    REQUIRE_FALSE(rep.hypotheses_ok);
  }

  SECTION("localized mode skips windows where the order fails") {
    auto y = abs_path(sample_brownian(g, SeedSpec{88, 3}));
    auto x = scaled(y, 1.5);  // violates X <= Y everywhere
    ComparisonConfig cfg;
    cfg.mode = ComparisonMode::localized;
    auto rep = domination_diagnostic(x, y, cfg);
    REQUIRE(rep.active_count == 0);
  }
}

TEST_CASE("rn_liminf") {
  TimeGrid g(1.0, 2048);
  auto y = abs_path(sample_brownian(g, SeedSpec{99, 0}));

  SECTION("exact ratios") {
    REQUIRE(rn_liminf(scaled(y, 0.5), y, g.steps).value() == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(rn_liminf(y, y, g.steps).value() == Catch::Approx(1.0).margin(1e-15));
  }

  SECTION("slowly varying factor is recovered at the last zero") {
    std::vector<double> errs;
    for (std::uint64_t s = 0; s < 64; ++s) {
      auto yy = abs_path(sample_brownian(g, SeedSpec{99, s}));
      std::vector<double> xs(yy.values.size());
      auto xi = [&](std::int64_t k) { return 1.2 + 0.3 * std::sin(3.0 * g.time(k)); };
      for (std::int64_t k = 0; k <= g.steps; ++k)
        xs[static_cast<std::size_t>(k)] = xi(k) * yy.value(k);
      SamplePath x(g, xs);
      auto est = rn_liminf(x, yy, g.steps);
      if (!est) continue;
      auto zp = zero_points(yy);
      auto gamma = last_zero_index_before(zp, g.steps);
      errs.push_back(std::abs(*est - xi(gamma < 0 ? 0 : gamma)));
    }
    REQUIRE(median_of(errs) <= 0.05);
  }

  SECTION("a path with no usable post-zero points reports missing") {
    SamplePath zero_path(g, std::vector<double>(static_cast<std::size_t>(g.points()), 0.0));
    REQUIRE_FALSE(rn_liminf(zero_path, zero_path, g.steps).has_value());
  }
}

TEST_CASE("excursion_comparison") {
  TimeGrid g(1.0, 4096);

  SECTION("uniformly damped copy: hypotheses hold with no violations") {
    for (std::uint64_t s = 0; s < 64; ++s) {
      auto y = abs_path(sample_brownian(g, SeedSpec{111, s}));
      auto x = scaled(y, 0.7);
      auto rep = excursion_comparison(x, y);
      REQUIRE(rep.hypotheses_ok);
      REQUIRE(rep.violation_count == 0);
    }
  }

  SECTION("equality case") {
    auto y = abs_path(sample_brownian(g, SeedSpec{111, 200}));
    auto rep = excursion_comparison(y, y);
    REQUIRE(rep.hypotheses_ok);
    REQUIRE(rep.violation_count == 0);
  }

  SECTION("an amplified copy trips the maxima ordering") {
    auto y = abs_path(sample_brownian(g, SeedSpec{111, 5}));
    auto x = scaled(y, 1.4);
    auto rep = excursion_comparison(x, y);
    REQUIRE_FALSE(rep.excursion_maxima_ordered);
  }
}
