#pragma once

#include <stdexcept>
#include <vector>

#include "semilt/core.hpp"
#include "semilt/zeros.hpp"

namespace semilt {

/// Result of spreading a predictable step process k over the excursions of X:
/// `transformed` is t -> k_{gamma_t} X_t, `integral_form` is the stochastic
/// integral k_0 X_0 + sum k_{gamma_j} dX_j. The two agree up to the value of X
/// at zero-crossing steps (one-step resolution).
struct BalayageResult {
  SamplePath transformed;
  SamplePath integral_form;

  double residual_sup() const {
    double m = 0.0;
    for (std::size_t i = 0; i < transformed.values.size(); ++i) {
      double d = std::abs(transformed.values[i] - integral_form.values[i]);
      if (d > m) m = d;
    }
    return m;
  }
};

/// k is sampled on the grid (one value per grid point, evaluated at gamma_s
/// through the last-zero index of the path).
inline BalayageResult balayage_transform(const SamplePath& x, const std::vector<double>& k) {
  if (k.size() != x.values.size())
    throw std::invalid_argument("balayage_transform: k must be sampled on the path grid");
  auto zp = zero_points(x);
  auto gamma = last_zero_indices(zp);

  std::vector<double> direct(x.values.size());
  std::vector<double> integral(x.values.size());
  for (std::size_t j = 0; j < x.values.size(); ++j)
    direct[j] = k[static_cast<std::size_t>(gamma[j])] * x.values[j];
  integral[0] = k[0] * x.values[0];
  for (std::int64_t j = 0; j < x.steps(); ++j)
    integral[static_cast<std::size_t>(j + 1)] =
        integral[static_cast<std::size_t>(j)] +
        k[static_cast<std::size_t>(gamma[static_cast<std::size_t>(j)])] * x.step_of(j);

  return BalayageResult{SamplePath(x.grid, std::move(direct)), SamplePath(x.grid, std::move(integral))};
}

}  // namespace semilt
