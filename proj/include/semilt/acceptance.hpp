#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "semilt/brownian.hpp"
#include "semilt/experiments.hpp"
#include "semilt/local_time.hpp"
#include "semilt/report_io.hpp"
#include "semilt/solvers.hpp"
#include "semilt/stats.hpp"
#include "semilt/variation.hpp"

namespace semilt {

inline constexpr double kSqrt2OverPi = 0.79788456080286535588;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  TimeGrid grid{1.0, 4096};
  std::int64_t paths = 4096;
  std::uint64_t seed = kDefaultSeed;
  double tol_scale = 1.0;
  int threads = 0;
};

namespace acceptance_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

inline ExperimentSpec spec_for(const AcceptanceOptions& opt, const std::string& name) {
  ExperimentSpec spec = default_spec(name);
  spec.grid = opt.grid;
  spec.paths = opt.paths;
  spec.seed = opt.seed;
  spec.tol_scale = opt.tol_scale;
  return spec;
}

inline std::string join_failed(const ExperimentReport& rep) {
  std::ostringstream out;
  bool first = true;
  for (const auto& c : rep.checks) {
    if (c.pass) continue;
    if (!first) out << "; ";
    out << c.name << " (" << fmt(c.value) << " vs " << fmt(c.threshold) << ")";
    first = false;
  }
  return out.str();
}

}  // namespace acceptance_detail

/// Runs the twelve acceptance criteria at the desk scale (T = 1, dt = 2^-12,
/// 4096 paths, fixed seed) and reports one pass/fail line per criterion.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                                   std::ostream* live = nullptr) {
  using acceptance_detail::fmt;
  using acceptance_detail::join_failed;
  using acceptance_detail::spec_for;

  std::vector<CriterionResult> results;
  auto emit = [&](int id, const std::string& name, bool pass, const std::string& detail) {
    results.push_back({id, name, pass, detail});
    if (live) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%02d", id);
      (*live) << (pass ? "[PASS] " : "[FAIL] ") << buf << " " << name
              << (detail.empty() ? "" : " - " + detail) << "\n";
      live->flush();
    }
  };

  const TimeGrid g = opt.grid;
  const double tol = opt.tol_scale;

  // 1: Monte Carlo calibration of the three estimators against E L_1^0(B) =
  //    E|B_1| = sqrt(2/pi). The band-counting estimator runs at its
  //    calibrated bandwidth (see kUpcrossingBandScale).
  {
    EstimatorConfig up_cfg;
    up_cfg.bandwidth_scale = kUpcrossingBandScale;
    auto rows = detail::per_path(opt.paths, opt.threads, [&](std::int64_t i) {
      auto b = sample_brownian(g, SeedSpec{opt.seed, static_cast<std::uint64_t>(i)});
      return std::vector<double>{lt_occupation(b, 0.0).terminal(),
                                 lt_upcrossing(b, 0.0, up_cfg).terminal(),
                                 lt_tanaka(b, 0.0, TanakaSide::right).terminal()};
    });
    bool pass = true;
    std::ostringstream detail_s;
    const char* names[3] = {"occupation", "upcrossing", "tanaka"};
    for (int j = 0; j < 3; ++j) {
      auto col = detail::column(rows, static_cast<std::size_t>(j));
      double m = mean_of(col), se = stderr_of(col);
      double err = std::abs(m - kSqrt2OverPi);
      double allow = (3.0 * se + 0.03) * tol;
      pass = pass && err <= allow;
      detail_s << names[j] << " mean " << fmt(m) << " (|err| " << fmt(err) << " <= " << fmt(allow)
               << (j + 1 < 3 ? "); " : ")");
    }
    emit(1, "local-time calibration vs sqrt(2/pi)", pass, detail_s.str());
  }

  // 2: occupation times formula for f = 1 and a Gaussian bump.
  {
    const double eps = EstimatorConfig{}.eps(g);
    auto rows = detail::per_path(opt.paths, opt.threads, [&](std::int64_t i) {
      auto b = sample_brownian(g, SeedSpec{opt.seed, static_cast<std::uint64_t>(i)});
      double lo = -4.0, hi = 4.0;
      LevelGrid levels{lo, hi, static_cast<std::int64_t>((hi - lo) / eps) + 1};
      auto one = occupation_formula_check(b, [](double) { return 1.0; }, levels);
      auto bump = occupation_formula_check(
          b, [](double a) { return std::exp(-2.0 * a * a); }, levels);
      return std::vector<double>{one.relative_residual, bump.relative_residual};
    });
    double m1 = mean_of(detail::column(rows, 0));
    double m2 = mean_of(detail::column(rows, 1));
    bool pass = m1 <= 0.05 * tol && m2 <= 0.05 * tol;
    emit(2, "occupation formula residuals (f=1, Gaussian bump)", pass,
         "mean rel residual " + fmt(m1) + ", " + fmt(m2) + " <= " + fmt(0.05 * tol));
  }

  // 3: generalized Tanaka identity.
  {
    auto rep = run_experiment(spec_for(opt, "gen_tanaka"), opt.threads);
    emit(3, "generalized Tanaka identity (z = 0.2 and z = inf)", rep.pass,
         rep.pass ? "median " + fmt(rep.summaries.at("residual_z_over_scale").median) +
                        ", telescoping max " + fmt(rep.summaries.at("residual_inf").max)
                  : join_failed(rep));
  }

  // 4: generalized Skorokhod identity with Phi = 1.
  {
    auto rep = run_experiment(spec_for(opt, "gen_skorokhod"), opt.threads);
    const Check& c = rep.checks.at(0);
    emit(4, "generalized Skorokhod identity (Phi = 1)", c.pass,
         "MC-mean relative gap " + fmt(c.value) + " <= " + fmt(c.threshold));
  }

  // 5: comparison theorem on X = 0.5 |B| vs Y = |B|.
  {
    auto rep = run_experiment(spec_for(opt, "comparison_main"), opt.threads);
    emit(5, "local-time comparison (hypotheses, theta, rn limit)", rep.pass,
         rep.pass ? "mean theta " + fmt(rep.scalars.at("mean_theta")) + ", rn " +
                        fmt(rep.summaries.at("rn_liminf").mean) + ", violation rate " +
                        fmt(rep.scalars.at("violation_rate"))
                  : join_failed(rep));
  }

  // 6: excursion comparison with 0.7 damping.
  {
    auto rep = run_experiment(spec_for(opt, "comparison_excursion"), opt.threads);
    emit(6, "excursion comparison (0.7 damping)", rep.pass,
         rep.pass ? "violation rate " + fmt(rep.scalars.at("violation_rate"))
                  : join_failed(rep));
  }

  // 7: skew law (walk and solver, plus beta = 1 boundary case).
  {
    auto rep = run_experiment(spec_for(opt, "skew_law"), opt.threads);
    emit(7, "skew Brownian law and cross-scheme agreement", rep.pass,
         rep.pass ? "KS(beta=0.5) " + fmt(rep.scalars.at("ks.beta=0.5")) + ", beta=1 KS " +
                        fmt(rep.scalars.at("ks.beta=1_vs_half_normal"))
                  : join_failed(rep));
  }

  // 8: reflected SDE law and the Skorokhod-lemma tally oracle.
  {
    Coefficient one = make_coefficient("constant", {1.0});
    Coefficient zero = make_coefficient("constant", {0.0});
    auto rows = detail::per_path(opt.paths, opt.threads, [&](std::int64_t i) {
      auto b = sample_brownian(g, SeedSpec{opt.seed, static_cast<std::uint64_t>(i)});
      auto y = reflected_euler(one, zero, b, 0.0);
      double mn = 0.0;
      for (std::int64_t k = 0; k <= g.steps; ++k) mn = std::min(mn, b.value(k));
      double oracle = -mn;
      double relerr = std::abs(0.5 * y.tally->terminal() - oracle) / std::max(oracle, 0.05);
      return std::vector<double>{y.terminal(), relerr};
    });
    double ks = ks_statistic(detail::column(rows, 0), [](double x) { return half_normal_cdf(x); });
    double ks_crit = ks_critical_one_sample(opt.paths) * tol;
    double tally_err = mean_of(detail::column(rows, 1));
    bool pass = ks <= ks_crit && tally_err <= 0.05 * tol;
    emit(8, "reflected SDE: |N(0,1)| law and Skorokhod tally oracle", pass,
         "KS " + fmt(ks) + " <= " + fmt(ks_crit) + ", tally rel err " + fmt(tally_err));
  }

  // 9: Barlow transform identity and phi-uniqueness.
  {
    auto rep = run_experiment(spec_for(opt, "barlow"), opt.threads);
    emit(9, "Barlow transform: identity residual and phi-coupling", rep.pass,
         rep.pass ? "residual p95 " + fmt(rep.summaries.at("identity_residual_over_scale").p95) +
                        ", phi-dist median " + fmt(rep.summaries.at("phi_distance").median) +
                        ", raw median " + fmt(rep.summaries.at("raw_distance").median)
                  : join_failed(rep));
  }

  // 10: uniqueness discrimination for the (perturbed) Tanaka equation.
  {
    auto non = run_experiment(spec_for(opt, "tanaka_nonuniqueness"), opt.threads);
    auto uni = run_experiment(spec_for(opt, "perturbed_tanaka_uniqueness"), opt.threads);
    bool ladder = true;
    for (const auto& c : uni.checks)
      if (c.name.rfind("median decreases", 0) == 0) ladder = ladder && c.pass;
    bool pass = non.pass && ladder;
    emit(10, "uniqueness discrimination (perturbed vs bare Tanaka)", pass,
         "separation median " + fmt(non.summaries.at("sup_separation").median) +
             (ladder ? ", ladder strictly decreasing" : ", ladder NOT decreasing"));
  }

  // 11: M/N transform brackets at eta = 2.
  {
    const double eta = 2.0;
    auto rows = detail::per_path(opt.paths, opt.threads, [&](std::int64_t i) {
      auto pair = sample_correlated_pair(g, SeedSpec{opt.seed, static_cast<std::uint64_t>(i)},
                                         PairMode::bracket_minus_t_over_eta, eta);
      auto [m, n] = mn_transform(pair.channel(0), pair.channel(1), eta);
      return std::vector<double>{cross_variation(m, n).terminal(),
                                 quadratic_variation(n).terminal()};
    });
    auto mn = detail::column(rows, 0);
    auto nn = detail::column(rows, 1);
    double mean_mn = mean_of(mn), se_mn = stderr_of(mn);
    double mean_nn = mean_of(nn);
    const double target_nn = (eta * eta - 1.0) / 4.0;
    bool pass = std::abs(mean_mn) <= 3.0 * se_mn * tol &&
                std::abs(mean_nn - target_nn) <= 0.05 * target_nn * tol;
    emit(11, "mn_transform brackets: <M,N> = 0 and <N>_1 = 3/4", pass,
         "<M,N> " + fmt(mean_mn) + " (3se " + fmt(3.0 * se_mn) + "), <N> " + fmt(mean_nn));
  }

  // 12: determinism: byte-identical reports on rerun and across shard counts.
  {
    ExperimentSpec spec = spec_for(opt, "gen_tanaka");
    spec.paths = std::min<std::int64_t>(spec.paths, 256);
    auto a = report_to_json(run_experiment(spec, 2));
    auto b = report_to_json(run_experiment(spec, 2));
    auto c = report_to_json(run_experiment(spec, 1));
    auto d = report_to_json(run_experiment(spec, 3));
    bool pass = a == b && a == c && a == d;
    emit(12, "determinism: rerun and shard-count invariance", pass,
         pass ? "byte-identical across reruns and 1/2/3-thread runs" : "mismatch detected");
  }

  return results;
}

}  // namespace semilt
