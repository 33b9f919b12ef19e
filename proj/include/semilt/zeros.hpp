#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "semilt/core.hpp"

namespace semilt {

/// Excursion intervals of a path away from a level, as (g_n, d_n) grid-index
/// pairs. The path is away from the level strictly inside each interval and
/// at (or crossing) the level at the endpoints, up to grid resolution.
struct ExcursionList {
  double level = 0.0;
  std::vector<std::pair<std::int64_t, std::int64_t>> intervals;
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;  // maximal away-from-level index runs
  std::vector<double> maxima;  // per-excursion max of the positive part (X - level)^+
};

/// Grid points where the path is considered to be at zero. Point k qualifies
/// when |X_k| < z_tol_k with z_tol_k = sqrt(dt) * max(1, running max |X|), or
/// when the step (k, k+1) strictly changes sign (the crossing is attributed
/// to the earlier grid point). Brownian-type paths never land on 0 exactly,
/// so the magnitude tolerance tracks the one-step fluctuation scale.
inline std::vector<std::uint8_t> zero_points(const SamplePath& x, double level = 0.0) {
  const std::int64_t n = x.steps();
  std::vector<std::uint8_t> z(static_cast<std::size_t>(n + 1), 0);
  const double sdt = std::sqrt(x.grid.dt());
  double run = 1.0;
  for (std::int64_t k = 0; k <= n; ++k) {
    double v = x.value(k) - level;
    double a = std::abs(v);
    if (a > run) run = a;
    bool at_level = a < sdt * run;
    bool crossing = k < n && v * (x.value(k + 1) - level) < 0.0;
    z[static_cast<std::size_t>(k)] = (at_level || crossing) ? 1 : 0;
  }
  return z;
}

/// Index of the last zero at or before index t_index; -1 if none.
inline std::int64_t last_zero_index_before(const std::vector<std::uint8_t>& zp, std::int64_t t_index) {
  for (std::int64_t k = t_index; k >= 0; --k)
    if (zp[static_cast<std::size_t>(k)]) return k;
  return -1;
}

/// gamma_t = sup{s <= t : X_s = 0} with sup(empty) = 0, reported at grid
/// resolution (the true zero lies within dt of the returned time).
inline double last_zero_before(const SamplePath& x, std::int64_t t_index) {
  auto zp = zero_points(x);
  std::int64_t k = last_zero_index_before(zp, t_index);
  return k < 0 ? 0.0 : x.grid.time(k);
}

/// gamma index for every grid point in one pass (0 when no zero has occurred).
inline std::vector<std::int64_t> last_zero_indices(const std::vector<std::uint8_t>& zp) {
  std::vector<std::int64_t> g(zp.size());
  std::int64_t last = 0;
  for (std::size_t k = 0; k < zp.size(); ++k) {
    if (zp[k]) last = static_cast<std::int64_t>(k);
    g[k] = last;
  }
  return g;
}

/// Ordered open intervals covering the complement of the discretized zero set,
/// with the running max of (X - level)^+ recorded per excursion.
inline ExcursionList excursion_decompose(const SamplePath& x, double level = 0.0) {
  const std::int64_t n = x.steps();
  auto zp = zero_points(x, level);
  ExcursionList out;
  out.level = level;
  std::int64_t k = 0;
  while (k <= n) {
    if (zp[static_cast<std::size_t>(k)]) {
      ++k;
      continue;
    }
    std::int64_t start = k;
    double peak = 0.0;
    while (k <= n && !zp[static_cast<std::size_t>(k)]) {
      double pos = x.value(k) - level;
      if (pos > peak) peak = pos;
      ++k;
    }
    std::int64_t g = start > 0 ? start - 1 : 0;
    std::int64_t d = k <= n ? k : n;
    out.intervals.emplace_back(g, d);
    out.runs.emplace_back(start, k - 1);
    out.maxima.push_back(peak);
  }
  return out;
}

}  // namespace semilt
