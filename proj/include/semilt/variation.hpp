#pragma once

#include <stdexcept>

#include "semilt/core.hpp"

namespace semilt {

/// Realized quadratic variation: cumulative sum of squared increments.
inline SamplePath quadratic_variation(const SamplePath& x) {
  std::vector<double> v(x.values.size());
  v[0] = 0.0;
  for (std::int64_t k = 0; k < x.steps(); ++k) {
    double d = x.step_of(k);
    v[static_cast<std::size_t>(k + 1)] = v[static_cast<std::size_t>(k)] + d * d;
  }
  return SamplePath(x.grid, std::move(v));
}

/// Realized cross variation: cumulative sum of increment products.
/// Symmetric in its arguments by construction.
inline SamplePath cross_variation(const SamplePath& x, const SamplePath& y) {
  if (!(x.grid == y.grid)) throw std::invalid_argument("cross_variation: grids must match");
  std::vector<double> v(x.values.size());
  v[0] = 0.0;
  for (std::int64_t k = 0; k < x.steps(); ++k)
    v[static_cast<std::size_t>(k + 1)] = v[static_cast<std::size_t>(k)] + x.step_of(k) * y.step_of(k);
  return SamplePath(x.grid, std::move(v));
}

}  // namespace semilt
