#pragma once

#include <cmath>
#include <stdexcept>

#include "semilt/core.hpp"
#include "semilt/rng.hpp"

namespace semilt {

/// Standard Wiener driver started at 0: independent N(0, dt) increments,
/// deterministic in (seed, grid).
inline SamplePath sample_brownian(const TimeGrid& grid, SeedSpec seed, std::uint64_t channel = 0) {
  CounterStream rng(seed, channel);
  double sdt = std::sqrt(grid.dt());
  std::vector<double> incs(static_cast<std::size_t>(grid.steps));
  for (std::int64_t k = 0; k < grid.steps; ++k)
    incs[static_cast<std::size_t>(k)] = sdt * rng.normal(static_cast<std::uint64_t>(k));
  return SamplePath::from_increments(grid, 0.0, std::move(incs));
}

enum class PairMode { independent, bracket_minus_t_over_eta };

/// Two Brownian channels (W, V) with declared covariation. In bracket mode
/// <W,V>_t = -t/eta, which needs |eta| >= 1 for the implied correlation -1/eta
/// to be admissible.
inline DriverSet sample_correlated_pair(const TimeGrid& grid, SeedSpec seed, PairMode mode,
                                        double eta = 0.0) {
  double rho = 0.0;
  if (mode == PairMode::bracket_minus_t_over_eta) {
    if (eta == 0.0) throw std::invalid_argument("sample_correlated_pair: eta must be nonzero");
    if (std::abs(eta) < 1.0)
      throw std::invalid_argument("sample_correlated_pair: |eta| < 1 gives correlation outside [-1,1]");
    rho = -1.0 / eta;
  }
  CounterStream g0(seed, 0), g1(seed, 1);
  double sdt = std::sqrt(grid.dt());
  double comp = std::sqrt(1.0 - rho * rho);
  std::vector<double> dw(static_cast<std::size_t>(grid.steps)), dv(static_cast<std::size_t>(grid.steps));
  for (std::int64_t k = 0; k < grid.steps; ++k) {
    double z0 = g0.normal(static_cast<std::uint64_t>(k));
    double z1 = g1.normal(static_cast<std::uint64_t>(k));
    dw[static_cast<std::size_t>(k)] = sdt * z0;
    dv[static_cast<std::size_t>(k)] = sdt * (rho * z0 + comp * z1);
  }
  DriverSet set;
  set.grid = grid;
  set.channels.push_back(SamplePath::from_increments(grid, 0.0, std::move(dw)));
  set.channels.push_back(SamplePath::from_increments(grid, 0.0, std::move(dv)));
  set.cross = mode == PairMode::independent
                  ? CrossStructure{CrossStructure::Kind::zero, 0.0}
                  : CrossStructure{CrossStructure::Kind::minus_t_over_eta, eta};
  return set;
}

}  // namespace semilt
