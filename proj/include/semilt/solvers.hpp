#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "semilt/coefficients.hpp"
#include "semilt/core.hpp"
#include "semilt/local_time.hpp"
#include "semilt/rng.hpp"
#include "semilt/scale_function.hpp"

namespace semilt {

/// Output of a discrete SDE scheme: the state path, the local-time tally when
/// the scheme produces one (reflection), and a flag for aborted paths.
struct SolutionPath {
  SamplePath state;
  std::optional<LocalTimeCurve> tally;
  std::optional<std::int64_t> failed_at;  // first step with a non-finite coefficient

  double terminal() const { return state.terminal(); }
};

/// Euler-Maruyama for dX = sigma(X) dB + b(X) dt driven by the increments of
/// `driver`. A NaN coefficient aborts the path and flags the report.
inline SolutionPath euler_maruyama(const Coefficient& sigma, const Coefficient& drift,
                                   const SamplePath& driver, double x0) {
  const TimeGrid& grid = driver.grid;
  const double dt = grid.dt();
  std::vector<double> v(static_cast<std::size_t>(grid.points()));
  v[0] = x0;
  SolutionPath out;
  for (std::int64_t k = 0; k < grid.steps; ++k) {
    double x = v[static_cast<std::size_t>(k)];
    double s = sigma(x), b = drift(x);
    if (!std::isfinite(s) || !std::isfinite(b)) {
      out.failed_at = k;
      for (std::int64_t j = k; j < grid.steps; ++j) v[static_cast<std::size_t>(j + 1)] = x;
      break;
    }
    v[static_cast<std::size_t>(k + 1)] = x + s * driver.step_of(k) + b * dt;
  }
  out.state = SamplePath(grid, std::move(v));
  return out;
}

/// Projected scheme for the reflected equation
///   dY = sigma(Y) dB + b(Y) dt + (1/2) dL_t^0(Y),  Y >= 0.
/// The candidate step is clipped at zero and the clipped amount is tallied as
/// (1/2) dL, i.e. the tally accumulates 2 * max(-Ytilde, 0).
inline SolutionPath reflected_euler(const Coefficient& sigma, const Coefficient& drift,
                                    const SamplePath& driver, double x0) {
  if (x0 < 0.0) throw std::invalid_argument("reflected_euler: x0 must be nonnegative");
  const TimeGrid& grid = driver.grid;
  const double dt = grid.dt();
  std::vector<double> v(static_cast<std::size_t>(grid.points()));
  LocalTimeCurve tally{grid, 0.0, LtEstimator::occupation, std::vector<double>(v.size(), 0.0)};
  v[0] = x0;
  SolutionPath out;
  for (std::int64_t k = 0; k < grid.steps; ++k) {
    double y = v[static_cast<std::size_t>(k)];
    double s = sigma(y), b = drift(y);
    if (!std::isfinite(s) || !std::isfinite(b)) {
      out.failed_at = k;
      for (std::int64_t j = k; j < grid.steps; ++j) {
        v[static_cast<std::size_t>(j + 1)] = y;
        tally.values[static_cast<std::size_t>(j + 1)] = tally.values[static_cast<std::size_t>(j)];
      }
      break;
    }
    double cand = y + s * driver.step_of(k) + b * dt;
    double pushed = cand < 0.0 ? -cand : 0.0;
    v[static_cast<std::size_t>(k + 1)] = cand < 0.0 ? 0.0 : cand;
    tally.values[static_cast<std::size_t>(k + 1)] =
        tally.values[static_cast<std::size_t>(k)] + 2.0 * pushed;
  }
  out.state = SamplePath(grid, std::move(v));
  out.tally = std::move(tally);
  return out;
}

/// Solver for dX = sigma(X) dB + int L^a(X) nu(da) through the scale map:
/// Y = F_nu(X) satisfies the drift-free dY = f_nu(F^{-1}(Y)) sigma(F^{-1}(Y)) dB,
/// which is advanced by Euler and pulled back through F^{-1}. With nu = 0 the
/// arithmetic reduces exactly to euler_maruyama.
inline SolutionPath local_time_drift_solver(const ScaleFunction& scale, const Coefficient& sigma,
                                            const SamplePath& driver, double x0) {
  const TimeGrid& grid = driver.grid;
  std::vector<double> v(static_cast<std::size_t>(grid.points()));
  v[0] = x0;
  SolutionPath out;
  double y = scale.value(x0);
  for (std::int64_t k = 0; k < grid.steps; ++k) {
    double x = v[static_cast<std::size_t>(k)];
    double g = scale.density(x) * sigma(x);
    if (!std::isfinite(g)) {
      out.failed_at = k;
      for (std::int64_t j = k; j < grid.steps; ++j) v[static_cast<std::size_t>(j + 1)] = x;
      break;
    }
    y = y + g * driver.step_of(k);
    v[static_cast<std::size_t>(k + 1)] = scale.inverse(y);
  }
  out.state = SamplePath(grid, std::move(v));
  return out;
}

/// Lattice scheme for skew Brownian motion X = B + beta L^0(X): a +-sqrt(dt)
/// walk whose step at an exact lattice zero goes up with probability
/// (1 + beta)/2. Requires |beta| <= 1; outside that range no solution exists.
inline SolutionPath skew_walk(double beta, const TimeGrid& grid, SeedSpec seed) {
  if (std::abs(beta) > 1.0)
    throw std::invalid_argument("skew_walk: |beta| <= 1 required (no solution otherwise)");
  CounterStream rng(seed, 7);
  const double sdt = std::sqrt(grid.dt());
  const double p_up_at_zero = 0.5 * (1.0 + beta);
  std::vector<double> v(static_cast<std::size_t>(grid.points()));
  std::int64_t lattice = 0;  // exact integer position; value = lattice * sdt
  v[0] = 0.0;
  for (std::int64_t k = 0; k < grid.steps; ++k) {
    double u = rng.uniform(static_cast<std::uint64_t>(k));
    double p_up = lattice == 0 ? p_up_at_zero : 0.5;
    lattice += (u < p_up) ? 1 : -1;
    v[static_cast<std::size_t>(k + 1)] = static_cast<double>(lattice) * sdt;
  }
  SolutionPath out;
  out.state = SamplePath(grid, std::move(v));
  return out;
}

/// phi(x) = x^+ / a + (-x)^+ / b, the transform under which every solution of
/// dX = (a 1{X>0} - b 1{X<=0}) dB satisfies phi(X) = B + (1/2) L^0(phi(X)).
inline double barlow_phi_value(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("barlow_phi: a and b must be positive");
  return x > 0.0 ? x / a : -x / b;
}

inline SamplePath barlow_phi(const SamplePath& x, double a, double b) {
  std::vector<double> v(x.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = barlow_phi_value(x.values[i], a, b);
  return SamplePath(x.grid, std::move(v));
}

/// Euler step X_{k+1} = X_k + sigma(X_k) dM_k + dN_k for the perturbed Tanaka
/// equation dX = sigma(X) dM + dN.
inline SolutionPath perturbed_tanaka_solver(const Coefficient& sigma, const SamplePath& m,
                                            const SamplePath& n, double x0) {
  if (!(m.grid == n.grid)) throw std::invalid_argument("perturbed_tanaka_solver: drivers must share a grid");
  const TimeGrid& grid = m.grid;
  std::vector<double> v(static_cast<std::size_t>(grid.points()));
  v[0] = x0;
  SolutionPath out;
  for (std::int64_t k = 0; k < grid.steps; ++k) {
    double x = v[static_cast<std::size_t>(k)];
    double s = sigma(x);
    if (!std::isfinite(s)) {
      out.failed_at = k;
      for (std::int64_t j = k; j < grid.steps; ++j) v[static_cast<std::size_t>(j + 1)] = x;
      break;
    }
    v[static_cast<std::size_t>(k + 1)] = x + s * m.step_of(k) + n.step_of(k);
  }
  out.state = SamplePath(grid, std::move(v));
  return out;
}

/// M := W/2, N := (W + eta V)/2. With <W,V> = -t/eta these are orthogonal and
/// <N>_t = (eta^2 - 1) t / 4; the checks live with cross_variation, not here.
inline std::pair<SamplePath, SamplePath> mn_transform(const SamplePath& w, const SamplePath& v,
                                                      double eta) {
  if (!(w.grid == v.grid)) throw std::invalid_argument("mn_transform: drivers must share a grid");
  auto build = [&](double cw, double cv) {
    std::vector<double> incs(static_cast<std::size_t>(w.grid.steps));
    for (std::int64_t k = 0; k < w.grid.steps; ++k)
      incs[static_cast<std::size_t>(k)] = cw * w.step_of(k) + cv * v.step_of(k);
    return SamplePath::from_increments(w.grid, 0.0, std::move(incs));
  };
  return {build(0.5, 0.0), build(0.5, 0.5 * eta)};
}

}  // namespace semilt
