#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "semilt/core.hpp"
#include "semilt/local_time.hpp"
#include "semilt/zeros.hpp"

namespace semilt {

enum class ComparisonMode { global, localized };

struct ComparisonConfig {
  std::int64_t windows = 32;
  double violation_rel_tol = 0.05;  // window violates when dL_X > (1 + tol) dL_Y + abs floor
  double violation_abs_tol = 1e-12;
  ComparisonMode mode = ComparisonMode::global;
  EstimatorConfig estimator;
};

struct DominationWindow {
  double dl_x = 0.0;
  double dl_y = 0.0;
  double theta_raw = 0.0;      // dl_x / dl_y on active windows
  double theta_reported = 0.0; // clipped to [0, 1 + tol]; violations are counted on raw values
  bool active = false;
  bool order_ok = true;        // localized mode: 0 <= X <= Y held throughout the window
  bool violated = false;
};

/// Windowed comparison of the local-time measures of two paths at level 0.
struct DominationReport {
  std::vector<DominationWindow> windows;
  bool zero_set_included = true;   // zeros of X inside zeros of Y
  bool zero_set_equal = true;      // for the excursion variant
  bool positive_part_ordered = true;
  bool excursion_maxima_ordered = true;
  bool hypotheses_ok = true;       // verdict suppressed when false
  std::int64_t violation_count = 0;
  std::int64_t active_count = 0;
  double terminal_lx = 0.0;
  double terminal_ly = 0.0;

  double mean_theta_reported() const {
    double s = 0.0;
    std::int64_t n = 0;
    for (const auto& w : windows)
      if (w.active) { s += w.theta_reported; ++n; }
    return n > 0 ? s / static_cast<double>(n) : 0.0;
  }
};

namespace detail {

/// Realized volatility scale sqrt(<P>_T / T). Scale-equivariant exactly:
/// scaling the path by c scales this by c, which keeps bandwidths and zero
/// tolerances consistent when comparing a path against a scaled copy.
inline double realized_scale(const SamplePath& p) {
  double qv = 0.0;
  for (std::int64_t k = 0; k < p.steps(); ++k) {
    double d = p.step_of(k);
    qv += d * d;
  }
  return std::sqrt(qv / p.grid.horizon);
}

/// Zero set with a tolerance proportional to the path's realized scale
/// (no absolute floor, unlike the generic zero_points rule; comparing X
/// against cX needs exact proportionality).
inline std::vector<std::uint8_t> zero_points_scaled(const SamplePath& x, double scale) {
  const std::int64_t n = x.steps();
  std::vector<std::uint8_t> z(static_cast<std::size_t>(n + 1), 0);
  const double tol = std::sqrt(x.grid.dt()) * std::max(scale, 1e-12);
  for (std::int64_t k = 0; k <= n; ++k) {
    bool at_level = std::abs(x.value(k)) < tol;
    bool crossing = k < n && x.value(k) * x.value(k + 1) < 0.0;
    z[static_cast<std::size_t>(k)] = (at_level || crossing) ? 1 : 0;
  }
  return z;
}

inline DominationReport windowed_domination(const SamplePath& x, const SamplePath& y,
                                            const ComparisonConfig& cfg) {
  DominationReport rep;
  EstimatorConfig ex = cfg.estimator, ey = cfg.estimator;
  ex.bandwidth = ex.eps(x.grid) * std::max(realized_scale(x), 1e-12);
  ey.bandwidth = ey.eps(y.grid) * std::max(realized_scale(y), 1e-12);
  auto lx = lt_occupation(x, 0.0, ex);
  auto ly = lt_occupation(y, 0.0, ey);
  rep.terminal_lx = lx.terminal();
  rep.terminal_ly = ly.terminal();

  const std::int64_t n = x.steps();
  const std::int64_t wins = std::max<std::int64_t>(1, cfg.windows);
  const double active_floor = 10.0 * std::numeric_limits<double>::epsilon() *
                              std::max(1.0, rep.terminal_ly);
  rep.windows.resize(static_cast<std::size_t>(wins));
  for (std::int64_t w = 0; w < wins; ++w) {
    std::int64_t a = n * w / wins;
    std::int64_t b = n * (w + 1) / wins;
    auto& dw = rep.windows[static_cast<std::size_t>(w)];
    dw.dl_x = lx.at(b) - lx.at(a);
    dw.dl_y = ly.at(b) - ly.at(a);
    if (cfg.mode == ComparisonMode::localized) {
      for (std::int64_t k = a; k <= b && dw.order_ok; ++k)
        dw.order_ok = x.value(k) >= -1e-12 && x.value(k) <= y.value(k) + 1e-12;
      if (!dw.order_ok) continue;
    }
    dw.active = dw.dl_y > active_floor;
    if (dw.active) {
      dw.theta_raw = dw.dl_x / dw.dl_y;
      dw.theta_reported = std::clamp(dw.theta_raw, 0.0, 1.0 + cfg.violation_rel_tol);
      ++rep.active_count;
    }
    dw.violated = dw.dl_x > (1.0 + cfg.violation_rel_tol) * dw.dl_y + cfg.violation_abs_tol;
    if (dw.violated) ++rep.violation_count;
  }
  return rep;
}

}  // namespace detail

/// Hypotheses of the local-time comparison theorem (zero-set inclusion,
/// X^+ <= Y^+), then windowed increment domination of the occupation
/// estimates. When a hypothesis fails the verdict is suppressed; localized
/// mode instead restricts attention to windows where 0 <= X <= Y throughout.
inline DominationReport domination_diagnostic(const SamplePath& x, const SamplePath& y,
                                              const ComparisonConfig& cfg = {}) {
  if (!(x.grid == y.grid)) throw std::invalid_argument("domination_diagnostic: grids must match");
  DominationReport rep = detail::windowed_domination(x, y, cfg);

  auto zx = detail::zero_points_scaled(x, detail::realized_scale(x));
  auto zy = detail::zero_points_scaled(y, detail::realized_scale(y));
  for (std::size_t k = 0; k < zx.size(); ++k)
    if (zx[k] && !zy[k]) { rep.zero_set_included = false; break; }
  const double tol = 1e-12;
  for (std::int64_t k = 0; k <= x.steps(); ++k) {
    double xp = std::max(x.value(k), 0.0), yp = std::max(y.value(k), 0.0);
    if (xp > yp + tol * std::max(1.0, yp)) { rep.positive_part_ordered = false; break; }
  }
  rep.hypotheses_ok = rep.zero_set_included &&
                      (cfg.mode == ComparisonMode::localized || rep.positive_part_ordered);
  return rep;
}

/// Radon-Nikodym density estimate at the last zero before t_index:
/// the ratio X/Y averaged over the first `lookahead` grid points after
/// gamma_t where |Y| clears its zero tolerance. Empty when no such point.
inline std::optional<double> rn_liminf(const SamplePath& x, const SamplePath& y,
                                       std::int64_t t_index, std::int64_t lookahead = 8) {
  if (!(x.grid == y.grid)) throw std::invalid_argument("rn_liminf: grids must match");
  auto zy = zero_points(y);
  std::int64_t g = last_zero_index_before(zy, t_index);
  if (g < 0) g = 0;
  const double sdt = std::sqrt(y.grid.dt());
  double run = 1.0;
  for (std::int64_t j = 0; j <= g; ++j) run = std::max(run, std::abs(y.value(j)));
  double sum = 0.0;
  std::int64_t taken = 0;
  for (std::int64_t j = g + 1; j <= y.steps() && taken < lookahead; ++j) {
    run = std::max(run, std::abs(y.value(j)));
    if (std::abs(y.value(j)) > sdt * run) {
      sum += x.value(j) / y.value(j);
      ++taken;
    }
  }
  if (taken == 0) return std::nullopt;
  return sum / static_cast<double>(taken);
}

/// Excursion-level comparison: matched zero sets and per-excursion domination
/// of the running max of the positive part, then the same windowed increment
/// comparison as domination_diagnostic.
inline DominationReport excursion_comparison(const SamplePath& x, const SamplePath& y,
                                             const ComparisonConfig& cfg = {}) {
  if (!(x.grid == y.grid)) throw std::invalid_argument("excursion_comparison: grids must match");
  DominationReport rep = detail::windowed_domination(x, y, cfg);

  auto zx = detail::zero_points_scaled(x, detail::realized_scale(x));
  auto zy = detail::zero_points_scaled(y, detail::realized_scale(y));
  rep.zero_set_equal = zx == zy;
  rep.zero_set_included = true;
  for (std::size_t k = 0; k < zx.size(); ++k)
    if (zx[k] && !zy[k]) { rep.zero_set_included = false; break; }

  // Running max of the positive part must stay ordered inside every stretch
  // away from zero; with matched zero sets the stretches coincide.
  double mx = 0.0, my = 0.0;
  rep.excursion_maxima_ordered = true;
  for (std::int64_t k = 0; k <= x.steps(); ++k) {
    if (zy[static_cast<std::size_t>(k)]) { mx = 0.0; my = 0.0; continue; }
    mx = std::max(mx, std::max(x.value(k), 0.0));
    my = std::max(my, std::max(y.value(k), 0.0));
    if (mx > my + 1e-12 * std::max(1.0, my)) { rep.excursion_maxima_ordered = false; break; }
  }
  rep.hypotheses_ok = rep.zero_set_equal && rep.excursion_maxima_ordered;
  return rep;
}

}  // namespace semilt
