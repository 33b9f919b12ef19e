#pragma once

#include <cmath>
#include <cstdint>

#include "semilt/core.hpp"

namespace semilt {

/// SplitMix64 finalizer. Full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Inverse of the standard normal CDF (Acklam's rational approximation plus
/// one Newton step through erfc), |error| < 1e-15 over (0,1).
inline double inv_normal_cdf(double p) {
  constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                           -2.759285104469687e+02, 1.383577518672690e+02,
                           -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                           -1.556989798598866e+02, 6.680131188771972e+01,
                           -1.328068155288572e+01};
  constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                           -2.400758277161838e+00, -2.549732539343734e+00,
                           4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;

  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Newton refinement: Phi(x) - p against the density.
  static const double inv_sqrt2 = 0.7071067811865475244;
  static const double sqrt_2pi = 2.5066282746310005024;
  double e = 0.5 * std::erfc(-x * inv_sqrt2) - p;
  double u = e * sqrt_2pi * std::exp(0.5 * x * x);
  return x - u;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

/// CDF of |N(0,1)|.
inline double half_normal_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return std::erf(x * 0.7071067811865475244);
}

/// Counter-based random stream. value(k) is a pure function of
/// (master_seed, stream_id, channel, k): streams can be evaluated in any
/// order, on any thread, and always reproduce.
class CounterStream {
 public:
  CounterStream(SeedSpec seed, std::uint64_t channel = 0) {
    std::uint64_t k0 = mix64(seed.master_seed ^ 0xD2B74407B1CE6E93ULL);
    std::uint64_t k1 = mix64(k0 ^ (seed.stream_id * 0x9E3779B97F4A7C15ULL + 0x165667B19E3779F9ULL));
    key_ = mix64(k1 ^ (channel * 0xCA5A826395121157ULL + 0x27220A95FE4BDEADULL));
  }

  std::uint64_t bits(std::uint64_t k) const { return mix64(key_ + (k + 1) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform on the open interval (0,1).
  double uniform(std::uint64_t k) const {
    return (static_cast<double>(bits(k) >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(std::uint64_t k) const { return inv_normal_cdf(uniform(k)); }

 private:
  std::uint64_t key_ = 0;
};

}  // namespace semilt
