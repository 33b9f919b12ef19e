#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace semilt {

/// A named coefficient (sigma or b) addressable from configs. The declared
/// properties are metadata, not enforced: spot_check_* samples them.
struct Coefficient {
  std::string name;
  std::vector<double> params;
  std::function<double(double)> fn;
  bool declared_odd = false;
  bool declared_bounded = false;

  double operator()(double x) const { return fn(x); }
};

/// Samples f(-x) = -f(x) away from the sign(0) convention point.
inline bool spot_check_odd(const Coefficient& c, double box = 4.0, int samples = 257) {
  for (int i = 1; i <= samples; ++i) {
    double x = box * static_cast<double>(i) / static_cast<double>(samples);
    if (std::abs(c(x) + c(-x)) > 1e-12 * (1.0 + std::abs(c(x)))) return false;
  }
  return true;
}

inline bool spot_check_bounded(const Coefficient& c, double bound, double box = 64.0,
                               int samples = 513) {
  for (int i = 0; i <= samples; ++i) {
    double x = -box + 2.0 * box * static_cast<double>(i) / static_cast<double>(samples);
    if (std::abs(c(x)) > bound) return false;
  }
  return true;
}

/// Families: constant c | linear c | sign (sign(0) = -1) | sqrt_cap
/// (min(sqrt|x|, 1)) | step lo hi (x < 0 -> lo, x >= 0 -> hi) |
/// two_sided a b (a 1{x>0} - b 1{x<=0}) | table x0,y0;x1,y1;... (piecewise linear).
inline Coefficient make_coefficient(const std::string& family, std::vector<double> params = {}) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("coefficient '" + family + "' needs " + std::to_string(n) + " parameter(s)");
  };
  if (family == "constant") {
    need(1);
    double c = params[0];
    return {family, params, [c](double) { return c; }, c == 0.0, true};
  }
  if (family == "linear") {
    need(1);
    double c = params[0];
    return {family, params, [c](double x) { return c * x; }, true, false};
  }
  if (family == "sign") {
    need(0);
    return {family, params, [](double x) { return x > 0.0 ? 1.0 : -1.0; }, true, true};
  }
  if (family == "sqrt_cap") {
    need(0);
    return {family, params, [](double x) { return std::min(std::sqrt(std::abs(x)), 1.0); }, false,
            true};
  }
  if (family == "step") {
    need(2);
    double lo = params[0], hi = params[1];
    return {family, params, [lo, hi](double x) { return x < 0.0 ? lo : hi; }, false, true};
  }
  if (family == "two_sided") {
    need(2);
    double a = params[0], b = params[1];
    return {family, params, [a, b](double x) { return x > 0.0 ? a : -b; }, false, true};
  }
  if (family == "table") {
    if (params.size() < 4 || params.size() % 2 != 0)
      throw std::invalid_argument("coefficient 'table' needs breakpoint pairs x0,y0;x1,y1;...");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < params.size(); i += 2) {
      xs.push_back(params[i]);
      ys.push_back(params[i + 1]);
      if (i > 0 && !(params[i] > params[i - 2]))
        throw std::invalid_argument("coefficient 'table' breakpoints must increase");
    }
    return {family, params,
            [xs, ys](double x) {
              if (x <= xs.front()) return ys.front();
              if (x >= xs.back()) return ys.back();
              std::size_t i = 1;
              while (xs[i] < x) ++i;
              double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
              return ys[i - 1] + w * (ys[i] - ys[i - 1]);
            },
            false, true};
  }
  throw std::invalid_argument("unknown coefficient family '" + family + "'");
}

/// Parses "family" or "family:p1,p2,..."; table breakpoints may separate
/// pairs with ';' as in "table:x0,y0;x1,y1".
inline Coefficient parse_coefficient(const std::string& text) {
  auto colon = text.find(':');
  std::string family = text.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::string body = text.substr(colon + 1);
    for (auto& ch : body)
      if (ch == ';') ch = ',';
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      std::size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size())
        throw std::invalid_argument("coefficient literal: bad number '" + tok + "'");
      params.push_back(v);
    }
  }
  return make_coefficient(family, std::move(params));
}

}  // namespace semilt
