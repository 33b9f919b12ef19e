#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace semilt {

struct Summary {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  double max = 0.0;
  std::int64_t count = 0;
};

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto i = static_cast<std::size_t>(pos);
  double w = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] * (1.0 - w) + sorted[i + 1] * w;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

inline Summary summarize(std::vector<double> v) {
  Summary s;
  s.count = static_cast<std::int64_t>(v.size());
  if (v.empty()) return s;
  s.mean = mean_of(v);
  s.stderr_of_mean = stderr_of(v);
  std::sort(v.begin(), v.end());
  s.median = quantile_sorted(v, 0.5);
  s.p95 = quantile_sorted(v, 0.95);
  s.max = v.back();
  return s;
}

/// Kolmogorov-Smirnov statistic of a sample against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

/// Asymptotic KS critical value at significance alpha: c(alpha) * sqrt(1/n)
/// one-sample, c(alpha) * sqrt((n+m)/(n m)) two-sample, with
/// c(alpha) = sqrt(-ln(alpha/2) / 2).
inline double ks_coefficient(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }

inline double ks_critical_one_sample(std::int64_t n, double alpha = 0.01) {
  return ks_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

inline double ks_critical_two_sample(std::int64_t n, std::int64_t m, double alpha = 0.01) {
  return ks_coefficient(alpha) *
         std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace semilt
