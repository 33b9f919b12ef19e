#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace semilt {

/// Uniform time grid on [0, horizon] with `steps` intervals of width dt = horizon/steps.
/// Non-uniform grids are intentionally unsupported; every estimator tolerance in this
/// library is calibrated against a single dt.
struct TimeGrid {
  double horizon = 1.0;
  std::int64_t steps = 1;

  TimeGrid() = default;
  TimeGrid(double horizon_, std::int64_t steps_) : horizon(horizon_), steps(steps_) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  }

  double dt() const { return horizon / static_cast<double>(steps); }
  double time(std::int64_t i) const { return static_cast<double>(i) * dt(); }
  std::int64_t points() const { return steps + 1; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Values of a scalar process on a TimeGrid. When the path was generated from
/// native increments (drivers), those are kept so the path is reconstructible
/// exactly: values[k+1] = values[k] + increments[k] bit for bit.
struct SamplePath {
  TimeGrid grid;
  std::vector<double> values;                     // grid.steps + 1 entries
  std::optional<std::vector<double>> increments;  // grid.steps entries when native

  SamplePath() = default;
  SamplePath(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<std::int64_t>(values.size()) != grid.points())
      throw std::invalid_argument("SamplePath: values length must be steps + 1");
  }

  static SamplePath from_increments(TimeGrid g, double x0, std::vector<double> incs) {
    if (static_cast<std::int64_t>(incs.size()) != g.steps)
      throw std::invalid_argument("SamplePath: increments length must be steps");
    std::vector<double> v(static_cast<std::size_t>(g.points()));
    v[0] = x0;
    for (std::int64_t k = 0; k < g.steps; ++k)
      v[static_cast<std::size_t>(k + 1)] = v[static_cast<std::size_t>(k)] + incs[static_cast<std::size_t>(k)];
    SamplePath p(g, std::move(v));
    p.increments = std::move(incs);
    return p;
  }

  std::int64_t steps() const { return grid.steps; }
  double value(std::int64_t k) const { return values[static_cast<std::size_t>(k)]; }
  double terminal() const { return values.back(); }
  double step_of(std::int64_t k) const { return values[static_cast<std::size_t>(k + 1)] - values[static_cast<std::size_t>(k)]; }

  /// max(1, max_{j<=k} |X_j|); the floor keeps zero-detection tolerances sane
  /// for paths that never leave the origin's neighbourhood.
  double running_scale(std::int64_t k) const {
    double m = 1.0;
    for (std::int64_t j = 0; j <= k; ++j) {
      double a = std::abs(values[static_cast<std::size_t>(j)]);
      if (a > m) m = a;
    }
    return m;
  }
  double path_scale() const { return running_scale(grid.steps); }
};

/// Seed contract: (master_seed, stream_id) -> driver path is a pure function,
/// independent of evaluation order, so parallel Monte Carlo stays bit-stable.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Declared quadratic covariation rule between two driver channels.
/// The declaration is tested against realized cross variation, never assumed.
struct CrossStructure {
  enum class Kind { zero, proportional, minus_t_over_eta };
  Kind kind = Kind::zero;
  double param = 0.0;  // c for proportional (c*t), eta for minus_t_over_eta (-t/eta)

  double bracket_at(double t) const {
    switch (kind) {
      case Kind::zero: return 0.0;
      case Kind::proportional: return param * t;
      case Kind::minus_t_over_eta: return -t / param;
    }
    return 0.0;
  }
};

/// A set of driver channels sharing one grid.
struct DriverSet {
  TimeGrid grid;
  std::vector<SamplePath> channels;
  CrossStructure cross;

  const SamplePath& channel(std::size_t i) const { return channels.at(i); }
};

}  // namespace semilt
