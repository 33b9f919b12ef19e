// semilt command-line front end: simulate paths, estimate local times, run
// named experiments, and drive the acceptance suite.
//
//   semilt simulate <family>   emit path CSV
//   semilt localtime <est>     emit a local-time curve CSV
//   semilt experiment <name>   emit report JSON + residual CSV
//   semilt list                registered experiments with their anchors
//   semilt verify-all          run the acceptance criteria
//
// Exit codes: 0 all passes, 1 an experiment or criterion failed, 2 bad usage
// or configuration. SEMILT_THREADS caps worker threads.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semilt/acceptance.hpp"
#include "semilt/brownian.hpp"
#include "semilt/config.hpp"
#include "semilt/experiments.hpp"
#include "semilt/local_time.hpp"
#include "semilt/report_io.hpp"
#include "semilt/solvers.hpp"

namespace fs = std::filesystem;
using namespace semilt;

namespace {

struct GridFlags {
  double horizon = 1.0;
  std::int64_t steps = 4096;
  double dt = 0.0;  // when set, overrides steps via round(horizon / dt)

  TimeGrid grid() const {
    if (dt > 0.0) {
      auto n = static_cast<std::int64_t>(std::llround(horizon / dt));
      if (n < 1) throw std::invalid_argument("--dt larger than the horizon");
      return TimeGrid(horizon, n);
    }
    return TimeGrid(horizon, steps);
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags& gf) {
  cmd->add_option("--horizon", gf.horizon, "time horizon T")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", gf.steps, "number of grid steps N");
  cmd->add_option("--dt", gf.dt, "grid spacing (overrides --steps)");
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

SignedMeasure parse_measure(const std::string& atoms, const std::string& density) {
  std::vector<MeasureAtom> atom_list;
  if (!atoms.empty()) {
    std::stringstream ss(atoms);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
      if (tok.empty()) continue;
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("atom literal must be location:weight, got '" + tok + "'");
      atom_list.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
    }
  }
  if (density.empty() || density == "none") return SignedMeasure(std::move(atom_list));
  auto colon = density.find(':');
  std::string family = density.substr(0, colon);
  if (family == "uniform") {
    std::stringstream ss(density.substr(colon + 1));
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
      throw std::invalid_argument("density 'uniform' needs lo,hi,c");
    double lo = std::stod(a), hi = std::stod(b), cc = std::stod(c);
    return SignedMeasure(std::move(atom_list),
                         [lo, hi, cc](double x) { return (x >= lo && x <= hi) ? cc : 0.0; }, lo,
                         hi, "uniform");
  }
  throw std::invalid_argument("unknown density family '" + family + "' (use none|uniform:lo,hi,c)");
}

int cmd_simulate(const std::string& family, const GridFlags& gf, std::int64_t paths,
                 std::uint64_t seed, const std::string& out, const std::string& sigma_s,
                 const std::string& b_s, double x0, double beta, double eta,
                 const std::string& mode, const std::string& atoms, const std::string& density) {
  TimeGrid grid = gf.grid();
  auto dir = prepare_out(out);
  std::vector<SamplePath> out_paths;
  for (std::int64_t p = 0; p < paths; ++p) {
    SeedSpec s{seed, static_cast<std::uint64_t>(p)};
    if (family == "brownian") {
      out_paths.push_back(sample_brownian(grid, s));
    } else if (family == "correlated") {
      PairMode m = mode == "bracket" ? PairMode::bracket_minus_t_over_eta : PairMode::independent;
      auto d = sample_correlated_pair(grid, s, m, eta);
      out_paths.push_back(d.channel(0));
      out_paths.push_back(d.channel(1));
    } else if (family == "euler") {
      auto b = sample_brownian(grid, s);
      out_paths.push_back(
          euler_maruyama(parse_coefficient(sigma_s), parse_coefficient(b_s), b, x0).state);
    } else if (family == "reflected") {
      auto b = sample_brownian(grid, s);
      out_paths.push_back(
          reflected_euler(parse_coefficient(sigma_s), parse_coefficient(b_s), b, x0).state);
    } else if (family == "skew_walk") {
      out_paths.push_back(skew_walk(beta, grid, s).state);
    } else if (family == "local_time_drift") {
      ScaleFunction scale(parse_measure(atoms, density));
      auto b = sample_brownian(grid, s);
      out_paths.push_back(local_time_drift_solver(scale, parse_coefficient(sigma_s), b, x0).state);
    } else {
      throw std::invalid_argument(
          "unknown family '" + family +
          "' (brownian|correlated|euler|reflected|skew_walk|local_time_drift)");
    }
  }
  auto file = dir / (family + "_paths.csv");
  write_file(file.string(), paths_to_csv(out_paths));
  std::cout << "wrote " << file.string() << "\n";
  return 0;
}

int cmd_localtime(const std::string& estimator, const GridFlags& gf, std::uint64_t seed,
                  double level, double bandwidth_scale, const std::string& out) {
  TimeGrid grid = gf.grid();
  auto dir = prepare_out(out);
  LtEstimator which;
  if (estimator == "occupation") which = LtEstimator::occupation;
  else if (estimator == "upcrossing") which = LtEstimator::upcrossing;
  else if (estimator == "tanaka_right") which = LtEstimator::tanaka_right;
  else if (estimator == "tanaka_left") which = LtEstimator::tanaka_left;
  else if (estimator == "tanaka_symmetric") which = LtEstimator::tanaka_symmetric;
  else
    throw std::invalid_argument("unknown estimator '" + estimator +
                                "' (occupation|upcrossing|tanaka_right|tanaka_left|tanaka_symmetric)");
  auto b = sample_brownian(grid, SeedSpec{seed, 0});
  EstimatorConfig cfg;
  cfg.bandwidth_scale = bandwidth_scale;
  auto curve = lt_estimate(b, level, which, cfg);
  auto file = dir / ("localtime_" + estimator + ".csv");
  write_file(file.string(), curve_to_csv(curve));
  std::cout << "wrote " << file.string() << "\n";
  return 0;
}

int cmd_experiment(const std::string& name, const GridFlags& gf, const CLI::App* cmd,
                   std::int64_t paths, std::uint64_t seed, double tol_scale,
                   const std::string& out, const std::string& config_path,
                   const std::vector<std::string>& param_kv) {
  RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot read config file: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = RunConfig::parse(ss.str());
  }
  cfg.set("experiment", name);
  // CLI flags override file values; only flags the user actually passed.
  if (cmd->count("--horizon")) cfg.set("horizon", detail::format_double(gf.horizon));
  if (cmd->count("--steps") || cmd->count("--dt"))
    cfg.set("steps", std::to_string(gf.grid().steps));
  if (cmd->count("--paths")) cfg.set("paths", std::to_string(paths));
  if (cmd->count("--seed")) cfg.set("seed", std::to_string(seed));
  if (cmd->count("--tol-scale")) cfg.set("tol_scale", detail::format_double(tol_scale));
  for (const auto& kv : param_kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
    cfg.set("param." + kv.substr(0, eq), kv.substr(eq + 1));
  }

  std::string out_dir = cfg.get("out", out);
  cfg.entries.erase("out");
  ExperimentSpec spec = spec_from_config(cfg);
  auto rep = run_experiment(spec);

  auto dir = prepare_out(out_dir);
  auto json_file = dir / (name + "_report.json");
  auto csv_file = dir / (name + "_residuals.csv");
  write_file(json_file.string(), report_to_json(rep));
  write_file(csv_file.string(), residuals_to_csv(rep));

  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "[ok]   " : "[FAIL] ") << c.name << " (value "
              << acceptance_detail::fmt(c.value) << ", threshold "
              << acceptance_detail::fmt(c.threshold) << ")\n";
  std::cout << (rep.pass ? "PASS " : "FAIL ") << name << "; report " << json_file.string() << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_list() {
  for (const auto& e : experiment_registry()) std::cout << e.name << " - " << e.anchor << "\n";
  return 0;
}

int cmd_verify_all(const GridFlags& gf, std::int64_t paths, std::uint64_t seed, double tol_scale) {
  AcceptanceOptions opt;
  opt.grid = gf.grid();
  opt.paths = paths;
  opt.seed = seed;
  opt.tol_scale = tol_scale;
  auto results = run_acceptance(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semimartingale local-time toolkit"};
  app.require_subcommand(1);

  GridFlags gf;
  std::int64_t paths = 1;
  std::uint64_t seed = kDefaultSeed;
  double tol_scale = 1.0;
  std::string out = "out";

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a path family and emit CSV");
  std::string family, sigma_s = "constant:1", b_s = "constant:0", mode = "independent";
  std::string atoms, density = "none";
  double x0 = 0.0, beta = 0.5, eta = 2.0;
  sim->add_option("family", family, "brownian|correlated|euler|reflected|skew_walk|local_time_drift")
      ->required();
  add_grid_flags(sim, gf);
  sim->add_option("--paths", paths, "number of paths");
  sim->add_option("--seed", seed, "master seed");
  sim->add_option("--out", out, "output directory");
  sim->add_option("--sigma", sigma_s, "diffusion coefficient family, e.g. constant:1, sign, sqrt_cap");
  sim->add_option("--b", b_s, "drift coefficient family");
  sim->add_option("--x0", x0, "initial state");
  sim->add_option("--beta", beta, "skew parameter");
  sim->add_option("--eta", eta, "correlated-pair parameter");
  sim->add_option("--mode", mode, "correlated pair mode: independent|bracket");
  sim->add_option("--atoms", atoms, "measure atoms 'loc:w;loc:w'");
  sim->add_option("--density", density, "measure density 'none' or 'uniform:lo,hi,c'");

  // localtime
  auto* lt = app.add_subcommand("localtime", "estimate a local-time curve on a Brownian path");
  std::string estimator;
  double level = 0.0, bandwidth_scale = 1.0;
  lt->add_option("estimator", estimator,
                 "occupation|upcrossing|tanaka_right|tanaka_left|tanaka_symmetric")
      ->required();
  add_grid_flags(lt, gf);
  lt->add_option("--seed", seed, "master seed");
  lt->add_option("--level", level, "level a");
  lt->add_option("--bandwidth-scale", bandwidth_scale, "eps = scale * sqrt(dt)");
  lt->add_option("--out", out, "output directory");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a registered experiment");
  std::string exp_name, config_path;
  std::vector<std::string> param_kv;
  exp->add_option("name", exp_name, "experiment name (see 'list')")->required();
  add_grid_flags(exp, gf);
  exp->add_option("--paths", paths, "Monte Carlo paths");
  exp->add_option("--seed", seed, "master seed");
  exp->add_option("--tol-scale", tol_scale, "multiplies every tolerance");
  exp->add_option("--out", out, "output directory");
  exp->add_option("--config", config_path, "config file (flat key = value with [param] section)");
  exp->add_option("--param", param_kv, "experiment parameter key=value (repeatable)");
  double z_opt = 0.0, beta_opt = 0.0, eta_opt = 0.0, delta_opt = 0.0;
  exp->add_option("--z", z_opt, "shorthand for --param z=...");
  exp->add_option("--beta", beta_opt, "shorthand for --param beta=...");
  exp->add_option("--eta", eta_opt, "shorthand for --param eta=...");
  exp->add_option("--delta", delta_opt, "shorthand for --param delta=...");

  // list / verify-all
  app.add_subcommand("list", "list registered experiments with their anchors");
  auto* verify = app.add_subcommand("verify-all", "run the acceptance criteria");
  add_grid_flags(verify, gf);
  std::int64_t verify_paths = 4096;
  verify->add_option("--paths", verify_paths, "Monte Carlo paths");
  verify->add_option("--seed", seed, "master seed");
  verify->add_option("--tol-scale", tol_scale, "multiplies every tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand("simulate"))
      return cmd_simulate(family, gf, paths, seed, out, sigma_s, b_s, x0, beta, eta, mode, atoms,
                          density);
    if (app.got_subcommand("localtime"))
      return cmd_localtime(estimator, gf, seed, level, bandwidth_scale, out);
    if (app.got_subcommand("experiment")) {
      if (exp->count("--z")) param_kv.push_back("z=" + detail::format_double(z_opt));
      if (exp->count("--beta")) param_kv.push_back("beta=" + detail::format_double(beta_opt));
      if (exp->count("--eta")) param_kv.push_back("eta=" + detail::format_double(eta_opt));
      if (exp->count("--delta")) param_kv.push_back("delta=" + detail::format_double(delta_opt));
      return cmd_experiment(exp_name, gf, exp, paths, seed, tol_scale, out, config_path, param_kv);
    }
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("verify-all")) return cmd_verify_all(gf, verify_paths, seed, tol_scale);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
