#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "semilt/core.hpp"
#include "semilt/zeros.hpp"

namespace semilt {

enum class LtEstimator { occupation, upcrossing, tanaka_right, tanaka_left, tanaka_symmetric };

inline std::string to_string(LtEstimator e) {
  switch (e) {
    case LtEstimator::occupation: return "occupation";
    case LtEstimator::upcrossing: return "upcrossing";
    case LtEstimator::tanaka_right: return "tanaka_right";
    case LtEstimator::tanaka_left: return "tanaka_left";
    case LtEstimator::tanaka_symmetric: return "tanaka_symmetric";
  }
  return "?";
}

/// Bandwidth defaults to bandwidth_scale * sqrt(dt), the one-step fluctuation
/// scale (bias O(eps) against variance O(dt/eps)).
struct EstimatorConfig {
  double bandwidth = 0.0;        // absolute eps; 0 means use bandwidth_scale * sqrt(dt)
  double bandwidth_scale = 1.0;  // c in eps = c * sqrt(dt)

  double eps(const TimeGrid& grid) const {
    double e = bandwidth > 0.0 ? bandwidth : bandwidth_scale * std::sqrt(grid.dt());
    if (!(e > 0.0)) throw std::invalid_argument("EstimatorConfig: bandwidth must be positive");
    return e;
  }
};

/// sgn with sgn(0) = -1.
inline double sgn_minus(double x) { return x > 0.0 ? 1.0 : -1.0; }

/// Cumulative local-time estimate t -> L_t^a. Occupation and upcrossing curves
/// are nondecreasing by construction; the Tanaka residual curves may wiggle on
/// the scale of one increment.
struct LocalTimeCurve {
  TimeGrid grid;
  double level = 0.0;
  LtEstimator estimator = LtEstimator::occupation;
  std::vector<double> values;

  double terminal() const { return values.back(); }
  double at(std::int64_t k) const { return values[static_cast<std::size_t>(k)]; }
};

/// Occupation-density estimator: L_t^a ~ (1/2eps) sum 1{|X_k - a| < eps} (dX_k)^2.
inline LocalTimeCurve lt_occupation(const SamplePath& x, double level, const EstimatorConfig& cfg = {}) {
  const double eps = cfg.eps(x.grid);
  LocalTimeCurve c{x.grid, level, LtEstimator::occupation, std::vector<double>(x.values.size(), 0.0)};
  const double w = 1.0 / (2.0 * eps);
  for (std::int64_t k = 0; k < x.steps(); ++k) {
    double add = 0.0;
    if (std::abs(x.value(k) - level) < eps) {
      double d = x.step_of(k);
      add = w * d * d;
    }
    c.values[static_cast<std::size_t>(k + 1)] = c.values[static_cast<std::size_t>(k)] + add;
  }
  return c;
}

/// Band-crossing estimator: 2 eps times the number of completed upcrossings of
/// [level, level + eps]. A crossing arms at X <= level and fires at X >= level + eps.
inline LocalTimeCurve lt_upcrossing(const SamplePath& x, double level, const EstimatorConfig& cfg = {}) {
  const double eps = cfg.eps(x.grid);
  LocalTimeCurve c{x.grid, level, LtEstimator::upcrossing, std::vector<double>(x.values.size(), 0.0)};
  bool armed = x.value(0) <= level;
  for (std::int64_t k = 0; k < x.steps(); ++k) {
    double add = 0.0;
    double v = x.value(k + 1);
    if (armed && v >= level + eps) {
      add = 2.0 * eps;
      armed = false;
    } else if (!armed && v <= level) {
      armed = true;
    }
    c.values[static_cast<std::size_t>(k + 1)] = c.values[static_cast<std::size_t>(k)] + add;
  }
  return c;
}

enum class TanakaSide { right, left, symmetric };

/// Tanaka-formula residual estimator. Right side:
///   L_t^{a+} = 2 [ (X_t-a)^+ - (X_0-a)^+ - sum 1{X_k > a} dX_k ],
/// left side uses the negative part and 1{X_k < a} with the opposite integral
/// sign; symmetric is their average. Indicators use left endpoints (the
/// predictable convention of the Ito integral). Differences of the two sides
/// telescope to 2 sum 1{X_k = a} dX_k exactly.
inline LocalTimeCurve lt_tanaka(const SamplePath& x, double level, TanakaSide side,
                                const EstimatorConfig& cfg = {}) {
  (void)cfg;
  const std::int64_t n = x.steps();
  auto pos = [](double v) { return v > 0.0 ? v : 0.0; };
  auto neg = [](double v) { return v < 0.0 ? -v : 0.0; };
  LtEstimator tag = side == TanakaSide::right   ? LtEstimator::tanaka_right
                    : side == TanakaSide::left  ? LtEstimator::tanaka_left
                                                : LtEstimator::tanaka_symmetric;
  LocalTimeCurve c{x.grid, level, tag, std::vector<double>(x.values.size(), 0.0)};
  double integral_r = 0.0, integral_l = 0.0;
  const double p0 = pos(x.value(0) - level), n0 = neg(x.value(0) - level);
  for (std::int64_t k = 0; k < n; ++k) {
    double v = x.value(k) - level;
    double d = x.step_of(k);
    if (v > 0.0) integral_r += d;
    if (v < 0.0) integral_l += d;
    double vr = 2.0 * (pos(x.value(k + 1) - level) - p0 - integral_r);
    double vl = 2.0 * (neg(x.value(k + 1) - level) - n0 + integral_l);
    double out = side == TanakaSide::right ? vr : side == TanakaSide::left ? vl : 0.5 * (vr + vl);
    c.values[static_cast<std::size_t>(k + 1)] = out;
  }
  return c;
}

inline LocalTimeCurve lt_estimate(const SamplePath& x, double level, LtEstimator which,
                                  const EstimatorConfig& cfg = {}) {
  switch (which) {
    case LtEstimator::occupation: return lt_occupation(x, level, cfg);
    case LtEstimator::upcrossing: return lt_upcrossing(x, level, cfg);
    case LtEstimator::tanaka_right: return lt_tanaka(x, level, TanakaSide::right, cfg);
    case LtEstimator::tanaka_left: return lt_tanaka(x, level, TanakaSide::left, cfg);
    case LtEstimator::tanaka_symmetric: return lt_tanaka(x, level, TanakaSide::symmetric, cfg);
  }
  throw std::invalid_argument("lt_estimate: unknown estimator");
}

/// Terminal right-minus-left Tanaka gap; equals 2 sum 1{X_k = level} dX_k and
/// is statistically zero for continuous martingale drivers.
inline double right_left_gap(const SamplePath& x, double level, const EstimatorConfig& cfg = {}) {
  return lt_tanaka(x, level, TanakaSide::right, cfg).terminal() -
         lt_tanaka(x, level, TanakaSide::left, cfg).terminal();
}

struct LevelGrid {
  double lo = -3.0;
  double hi = 3.0;
  std::int64_t count = 257;

  double spacing() const { return (hi - lo) / static_cast<double>(count - 1); }
  double at(std::int64_t i) const { return lo + spacing() * static_cast<double>(i); }
};

struct OccupationCheck {
  double lhs = 0.0;  // sum f(X_k) (dX_k)^2
  double rhs = 0.0;  // sum_a f(a) L_t^a  da
  double relative_residual = 0.0;
  bool range_covered = true;
};

/// Both sides of the occupation identity
///   int_0^t f(X_s) d<X>_s = int_R f(a) L_t^a da
/// evaluated on one path, with the level field binned in a single pass.
template <typename F>
OccupationCheck occupation_formula_check(const SamplePath& x, F&& f, const LevelGrid& levels,
                                         const EstimatorConfig& cfg = {}) {
  const double eps = cfg.eps(x.grid);
  const double da = levels.spacing();
  std::vector<double> field(static_cast<std::size_t>(levels.count), 0.0);
  OccupationCheck out;
  const double w = 1.0 / (2.0 * eps);
  for (std::int64_t k = 0; k < x.steps(); ++k) {
    double v = x.value(k);
    double d2 = x.step_of(k) * x.step_of(k);
    out.lhs += f(v) * d2;
    if (v - eps < levels.lo || v + eps > levels.hi) out.range_covered = false;
    auto ilo = static_cast<std::int64_t>(std::ceil((v - eps - levels.lo) / da));
    auto ihi = static_cast<std::int64_t>(std::floor((v + eps - levels.lo) / da));
    for (std::int64_t i = std::max<std::int64_t>(ilo, 0);
         i <= std::min<std::int64_t>(ihi, levels.count - 1); ++i) {
      if (std::abs(v - levels.at(i)) < eps) field[static_cast<std::size_t>(i)] += w * d2;
    }
  }
  for (std::int64_t i = 0; i < levels.count; ++i)
    out.rhs += f(levels.at(i)) * field[static_cast<std::size_t>(i)] * da;
  out.relative_residual = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1.0);
  return out;
}

/// Local-time mass accrued while the path is farther than 2 eps from the
/// level. Exactly zero for the occupation estimator; small for Tanaka curves
/// (only one-step crossings from outside the band contribute).
inline double support_check(const LocalTimeCurve& curve, const SamplePath& x, double level,
                            const EstimatorConfig& cfg = {}) {
  if (!(curve.grid == x.grid)) throw std::invalid_argument("support_check: grids must match");
  const double eps = cfg.eps(x.grid);
  double mass = 0.0;
  for (std::int64_t k = 0; k < x.steps(); ++k) {
    if (std::abs(x.value(k) - level) > 2.0 * eps)
      mass += curve.at(k + 1) - curve.at(k);
  }
  return mass;
}

}  // namespace semilt
