#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "semilt/coefficients.hpp"
#include "semilt/core.hpp"
#include "semilt/solvers.hpp"

namespace semilt {

/// n-Lipschitz lower envelope by inf-convolution:
///   b_n(x) = inf_y ( b(y) + n |x - y| ).
/// Satisfies b_n <= b, is nondecreasing in n, and converges to b pointwise at
/// continuity points. Evaluated by grid search over [box_lo, box_hi] with two
/// rounds of local refinement.
inline std::function<double(double)> lipschitz_envelope(std::function<double(double)> b, double n,
                                                        double box_lo, double box_hi,
                                                        std::int64_t coarse_points = 2048) {
  if (!(n > 0.0)) throw std::invalid_argument("lipschitz_envelope: n must be positive");
  if (!(box_hi > box_lo)) throw std::invalid_argument("lipschitz_envelope: empty eval box");
  return [b = std::move(b), n, box_lo, box_hi, coarse_points](double x) {
    auto objective = [&](double y) { return b(y) + n * std::abs(x - y); };
    double h = (box_hi - box_lo) / static_cast<double>(coarse_points);
    double best = objective(x);  // y = x is always admissible
    double besty = x;
    for (std::int64_t i = 0; i <= coarse_points; ++i) {
      double y = box_lo + h * static_cast<double>(i);
      double v = objective(y);
      if (v < best) { best = v; besty = y; }
      if (!std::isfinite(v)) throw std::runtime_error("lipschitz_envelope: b unbounded below on box");
    }
    double lo = besty - h, hi = besty + h;
    for (int round = 0; round < 3; ++round) {
      double step = (hi - lo) / 64.0;
      double rb = best, ry = besty;
      for (int i = 0; i <= 64; ++i) {
        double y = lo + step * i;
        double v = objective(y);
        if (v < rb) { rb = v; ry = y; }
      }
      best = rb; besty = ry;
      lo = besty - step; hi = besty + step;
    }
    return best;
  };
}

/// n-Lipschitz upper envelope (sup-convolution), the mirror of the above.
inline std::function<double(double)> lipschitz_upper_envelope(std::function<double(double)> b,
                                                              double n, double box_lo, double box_hi,
                                                              std::int64_t coarse_points = 2048) {
  auto neg = [b = std::move(b)](double x) { return -b(x); };
  auto env = lipschitz_envelope(neg, n, box_lo, box_hi, coarse_points);
  return [env](double x) { return -env(x); };
}

struct MinMaxResult {
  SolutionPath minimal;  // limit of solutions with increasing lower envelopes
  SolutionPath maximal;  // limit with decreasing upper envelopes
  double gap_sup = 0.0;  // sup_k |maximal - minimal|
  std::vector<double> lower_monotone_violation;  // fraction of grid points per level pair
};

namespace envelope_detail {

/// Tabulates an envelope on the eval box so the Euler loop pays O(1) per step.
/// Outside the box the inf-convolution rises with slope n and the
/// sup-convolution falls with slope n, so the edge slope is +n for the lower
/// envelope and -n for the upper one.
inline Coefficient tabulate_envelope(const std::function<double(double)>& env, double edge_slope,
                                     double box_lo, double box_hi, const char* name,
                                     std::int64_t table_points = 2048) {
  std::vector<double> ys(static_cast<std::size_t>(table_points + 1));
  double h = (box_hi - box_lo) / static_cast<double>(table_points);
  for (std::int64_t i = 0; i <= table_points; ++i)
    ys[static_cast<std::size_t>(i)] = env(box_lo + h * static_cast<double>(i));
  auto fn = [ys = std::move(ys), box_lo, box_hi, h, edge_slope, table_points](double x) {
    if (x <= box_lo) return ys.front() + edge_slope * (box_lo - x);
    if (x >= box_hi) return ys.back() + edge_slope * (x - box_hi);
    double pos = (x - box_lo) / h;
    auto i = static_cast<std::int64_t>(pos);
    if (i >= table_points) i = table_points - 1;
    double w = pos - static_cast<double>(i);
    return ys[static_cast<std::size_t>(i)] * (1.0 - w) + ys[static_cast<std::size_t>(i + 1)] * w;
  };
  return Coefficient{name, {std::abs(edge_slope)}, std::move(fn)};
}

}  // namespace envelope_detail

/// Minimal / maximal solution construction: run the Euler scheme with the
/// Lipschitz envelopes b_n (lower) and their sup-convolution mirrors (upper)
/// for n = 1..n_levels on one driver, and report the terminal-level gap.
inline MinMaxResult min_max_solutions(const Coefficient& sigma, const std::function<double(double)>& b,
                                      const SamplePath& driver, double x0, std::int64_t n_levels,
                                      double box_lo = -8.0, double box_hi = 8.0) {
  if (n_levels < 1) throw std::invalid_argument("min_max_solutions: n_levels must be >= 1");
  MinMaxResult out;
  SamplePath prev_lower;
  for (std::int64_t n = 1; n <= n_levels; ++n) {
    auto bn = lipschitz_envelope(b, static_cast<double>(n), box_lo, box_hi);
    auto bn_up = lipschitz_upper_envelope(b, static_cast<double>(n), box_lo, box_hi);
    Coefficient lower = envelope_detail::tabulate_envelope(bn, static_cast<double>(n), box_lo, box_hi,
                                                  "envelope_lower");
    Coefficient upper = envelope_detail::tabulate_envelope(bn_up, -static_cast<double>(n), box_lo, box_hi,
                                                  "envelope_upper");
    SolutionPath xl = euler_maruyama(sigma, lower, driver, x0);
    SolutionPath xu = euler_maruyama(sigma, upper, driver, x0);
    if (n > 1) {
      std::int64_t bad = 0;
      for (std::int64_t k = 0; k <= driver.steps(); ++k)
        if (xl.state.value(k) < prev_lower.value(k) - 1e-9) ++bad;
      out.lower_monotone_violation.push_back(static_cast<double>(bad) /
                                             static_cast<double>(driver.steps() + 1));
    }
    prev_lower = xl.state;
    if (n == n_levels) {
      out.minimal = std::move(xl);
      out.maximal = std::move(xu);
    }
  }
  for (std::int64_t k = 0; k <= driver.steps(); ++k)
    out.gap_sup = std::max(out.gap_sup,
                           std::abs(out.maximal.state.value(k) - out.minimal.state.value(k)));
  return out;
}

}  // namespace semilt
