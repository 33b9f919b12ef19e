#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semilt {

/// Atom of a signed measure. The jump condition |weight| < 1 is required for
/// the scale construction to stay strictly increasing; weights <= -1 admit no
/// solution at all and are rejected at construction.
struct MeasureAtom {
  double location = 0.0;
  double weight = 0.0;
};

/// Finitely many atoms plus a bounded, compactly supported continuous density.
/// sigma-finiteness in the underlying theory is honored by localization, so a
/// compact support box loses nothing at simulation scale.
class SignedMeasure {
 public:
  SignedMeasure() = default;

  SignedMeasure(std::vector<MeasureAtom> atoms, std::function<double(double)> density = {},
                double support_lo = 0.0, double support_hi = 0.0, std::string density_family = "none")
      : atoms_(std::move(atoms)),
        density_(std::move(density)),
        support_lo_(support_lo),
        support_hi_(support_hi),
        density_family_(std::move(density_family)) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!(std::abs(atoms_[i].weight) < 1.0))
        throw std::invalid_argument("SignedMeasure: atom weight must satisfy |w| < 1");
      if (i > 0 && !(atoms_[i].location > atoms_[i - 1].location))
        throw std::invalid_argument("SignedMeasure: atom locations must be strictly increasing");
    }
    if (density_ && !(support_hi_ > support_lo_))
      throw std::invalid_argument("SignedMeasure: density support must be a nonempty interval");
  }

  static SignedMeasure zero() { return SignedMeasure(); }

  static SignedMeasure single_atom(double location, double weight) {
    return SignedMeasure({MeasureAtom{location, weight}});
  }

  static SignedMeasure uniform_density(double lo, double hi, double c) {
    return SignedMeasure({}, [lo, hi, c](double x) { return (x >= lo && x <= hi) ? c : 0.0; },
                         lo, hi, "uniform");
  }

  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  bool has_density() const { return static_cast<bool>(density_); }
  double density_at(double x) const {
    if (!density_ || x < support_lo_ || x > support_hi_) return 0.0;
    return density_(x);
  }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }
  const std::string& density_family() const { return density_family_; }

  bool is_zero() const { return atoms_.empty() && !density_; }
  bool is_pure_atomic() const { return !density_; }

  double atom_weight_at(double location) const {
    for (const auto& a : atoms_)
      if (a.location == location) return a.weight;
    return 0.0;
  }

 private:
  std::vector<MeasureAtom> atoms_;
  std::function<double(double)> density_;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
  std::string density_family_ = "none";
};

}  // namespace semilt
