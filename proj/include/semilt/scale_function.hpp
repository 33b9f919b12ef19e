#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "semilt/signed_measure.hpp"

namespace semilt {

namespace quad {

/// Adaptive Simpson with absolute tolerance. Exhausted recursion with a large
/// remaining correction is treated as a non-integrable integrand.
template <typename F>
double simpson_rec(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14) return left + right + delta / 15.0;
  if (depth <= 0) {
    if (!(std::abs(delta) < 1e6)) throw std::runtime_error("quadrature blow-up: integrand looks non-integrable");
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-10, int depth = 40) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (b < a) { std::swap(a, b); sign = -1.0; }
  double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return sign * simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace quad

/// f_nu(y) = exp(-2 nu_c(0,y]) * prod_{z <= y} (1 - nu{z}) / (1 + nu{z}).
/// For y < 0 the continuous mass follows the signed-interval convention
/// nu_c(0,y] := -nu_c(y,0] (the oriented integral of the density from 0 to y).
inline double f_nu(const SignedMeasure& nu, double y) {
  double prod = 1.0;
  for (const auto& a : nu.atoms())
    if (a.location <= y) prod *= (1.0 - a.weight) / (1.0 + a.weight);
  double mass = 0.0;
  if (nu.has_density())
    mass = quad::integrate([&nu](double t) { return nu.density_at(t); }, 0.0, y);
  return std::exp(-2.0 * mass) * prod;
}

/// Strictly increasing scale map F_nu(x) = int_0^x f_nu(y) dy with inverse.
/// Pure-atom measures reduce to exact piecewise-linear arithmetic; continuous
/// parts are integrated by adaptive quadrature between cached knots.
class ScaleFunction {
 public:
  explicit ScaleFunction(SignedMeasure nu, double box_lo = -64.0, double box_hi = 64.0)
      : nu_(std::move(nu)) {
    build(box_lo, box_hi);
  }

  const SignedMeasure& measure() const { return nu_; }
  bool is_identity() const { return nu_.is_zero(); }
  double slope_lower_bound() const { return m_; }
  double slope_upper_bound() const { return big_m_; }

  /// f_nu through the cached knot table.
  double density(double y) const {
    if (is_identity()) return 1.0;
    if (y < knots_.front()) return slope_left_;  // no atoms and constant mass below the first knot
    std::size_t i = segment_of_x(y);
    double g = gvals_[i];
    if (nu_.has_density() && y > knots_[i])
      g += quad::integrate([this](double t) { return nu_.density_at(t); }, knots_[i], y);
    return std::exp(-2.0 * g) * seg_prod_[i];
  }

  double value(double x) const {
    if (is_identity()) return x;
    if (x <= knots_.front()) return fvals_.front() + slope_left_ * (x - knots_.front());
    if (x >= knots_.back()) return fvals_.back() + slope_right_ * (x - knots_.back());
    std::size_t i = segment_of_x(x);
    return fvals_[i] + partial_integral(i, x);
  }

  double inverse(double v) const {
    if (is_identity()) return v;
    if (v <= fvals_.front()) return knots_.front() + (v - fvals_.front()) / slope_left_;
    if (v >= fvals_.back()) return knots_.back() + (v - fvals_.back()) / slope_right_;
    auto it = std::upper_bound(fvals_.begin(), fvals_.end(), v);
    std::size_t i = static_cast<std::size_t>(it - fvals_.begin()) - 1;
    if (nu_.is_pure_atomic())
      return knots_[i] + (v - fvals_[i]) / seg_prod_[i];
    double a = knots_[i], b = knots_[i + 1];
    for (int step = 0; step < 80 && b - a > 1e-14 * (1.0 + std::abs(a)); ++step) {
      double mid = 0.5 * (a + b);
      if (fvals_[i] + partial_integral(i, mid) < v) a = mid; else b = mid;
    }
    double x = 0.5 * (a + b);
    for (int step = 0; step < 3; ++step) {
      double fx = density(x);
      if (!(fx > 0.0)) break;
      double nx = x - (fvals_[i] + partial_integral(i, x) - v) / fx;
      if (nx > a && nx < b) x = nx;
    }
    return x;
  }

 private:
  void build(double box_lo, double box_hi) {
    if (nu_.is_zero()) { m_ = 1.0; big_m_ = 1.0; return; }

    std::vector<double> base{0.0, box_lo, box_hi};
    for (const auto& a : nu_.atoms()) base.push_back(a.location);
    if (nu_.has_density()) { base.push_back(nu_.support_lo()); base.push_back(nu_.support_hi()); }
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());

    knots_.clear();
    for (std::size_t i = 0; i + 1 < base.size(); ++i) {
      knots_.push_back(base[i]);
      bool in_support = nu_.has_density() && base[i + 1] > nu_.support_lo() && base[i] < nu_.support_hi();
      if (in_support) {
        double len = base[i + 1] - base[i];
        int sub = std::clamp(static_cast<int>(len * 16.0), 1, 256);
        for (int s = 1; s < sub; ++s) knots_.push_back(base[i] + len * s / sub);
      }
    }
    knots_.push_back(base.back());

    // Continuous mass nu_c(0, knot] with the signed convention, then the atom
    // product per segment (constant between consecutive knots).
    gvals_.assign(knots_.size(), 0.0);
    if (nu_.has_density()) {
      std::size_t zi = zero_index();
      for (std::size_t i = zi; i + 1 < knots_.size(); ++i)
        gvals_[i + 1] = gvals_[i] + quad::integrate([this](double t) { return nu_.density_at(t); },
                                                    knots_[i], knots_[i + 1]);
      for (std::size_t i = zi; i > 0; --i)
        gvals_[i - 1] = gvals_[i] - quad::integrate([this](double t) { return nu_.density_at(t); },
                                                    knots_[i - 1], knots_[i]);
    }
    seg_prod_.assign(knots_.size(), 1.0);
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      double prod = 1.0;
      for (const auto& a : nu_.atoms())
        if (a.location <= knots_[i]) prod *= (1.0 - a.weight) / (1.0 + a.weight);
      seg_prod_[i] = prod;
    }

    fvals_.assign(knots_.size(), 0.0);
    std::size_t zi = zero_index();
    for (std::size_t i = zi; i + 1 < knots_.size(); ++i)
      fvals_[i + 1] = fvals_[i] + partial_integral(i, knots_[i + 1]);
    for (std::size_t i = zi; i > 0; --i)
      fvals_[i - 1] = fvals_[i] - partial_integral(i - 1, knots_[i]);

    slope_left_ = std::exp(-2.0 * gvals_.front());
    slope_right_ = std::exp(-2.0 * gvals_.back()) * seg_prod_.back();

    m_ = std::min(slope_left_, slope_right_);
    big_m_ = std::max(slope_left_, slope_right_);
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      // Per segment: value at the left knot, at the midpoint, and the left
      // limit at the right knot (before any atom there kicks in).
      double at = std::exp(-2.0 * gvals_[i]) * seg_prod_[i];
      double mid = density(0.5 * (knots_[i] + knots_[i + 1]));
      double left_limit = std::exp(-2.0 * gvals_[i + 1]) * seg_prod_[i];
      m_ = std::min({m_, at, mid, left_limit});
      big_m_ = std::max({big_m_, at, mid, left_limit});
    }
    if (!(m_ > 0.0)) throw std::runtime_error("ScaleFunction: f_nu lost positivity");
  }

  std::size_t zero_index() const {
    return static_cast<std::size_t>(std::lower_bound(knots_.begin(), knots_.end(), 0.0) -
                                    knots_.begin());
  }

  /// int_{knots_[i]}^{x} f_nu with x inside segment i.
  double partial_integral(std::size_t i, double x) const {
    if (x == knots_[i]) return 0.0;
    if (nu_.is_pure_atomic()) return seg_prod_[i] * (x - knots_[i]);
    double base_g = gvals_[i];
    double prod = seg_prod_[i];
    auto f = [this, base_g, prod, i](double y) {
      double g = base_g + quad::integrate([this](double t) { return nu_.density_at(t); },
                                          knots_[i], y, 1e-12, 24);
      return std::exp(-2.0 * g) * prod;
    };
    return quad::integrate(f, knots_[i], x, 1e-11, 24);
  }

  std::size_t segment_of_x(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0) return 0;
    if (i >= knots_.size()) return knots_.size() - 2;
    return i - 1;
  }

  SignedMeasure nu_;
  std::vector<double> knots_;
  std::vector<double> gvals_;     // nu_c(0, knot]
  std::vector<double> seg_prod_;  // atom product valid on [knot_i, knot_{i+1})
  std::vector<double> fvals_;     // F at knots
  double slope_left_ = 1.0;
  double slope_right_ = 1.0;
  double m_ = 1.0;
  double big_m_ = 1.0;
};

inline double F_nu(const SignedMeasure& nu, double x) { return ScaleFunction(nu).value(x); }
inline double F_nu_inverse(const SignedMeasure& nu, double v) { return ScaleFunction(nu).inverse(v); }

/// Continuous measure mu(dx) = b(x)/sigma^2(x) 1{sigma(x) != 0} dx restricted
/// to a finite box. Integrability is probed by quadrature; blow-up throws.
inline SignedMeasure drift_to_measure(const std::function<double(double)>& sigma,
                                      const std::function<double(double)>& drift,
                                      double box_lo, double box_hi) {
  if (!(box_hi > box_lo)) throw std::invalid_argument("drift_to_measure: empty support box");
  auto dens = [sigma, drift](double x) {
    double s = sigma(x);
    if (s == 0.0) return 0.0;
    return drift(x) / (s * s);
  };
  (void)quad::integrate([&dens](double x) { return std::abs(dens(x)); }, box_lo, box_hi, 1e-8, 30);
  return SignedMeasure({}, dens, box_lo, box_hi, "drift_ratio");
}

}  // namespace semilt
