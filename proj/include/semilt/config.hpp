#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "semilt/experiments.hpp"

namespace semilt {

/// Flat key = value configuration with bracketed section headers. Keys inside
/// a [section] are flattened to "section.key". Unknown keys are rejected at
/// validation (fail-closed), and CLI flags override file values.
class RunConfig {
 public:
  std::map<std::string, std::string> entries;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  static RunConfig parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw std::invalid_argument("config line " + std::to_string(lineno) + ": unterminated section");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      auto eq = t.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
      std::string full = section.empty() ? key : section + "." + key;
      cfg.entries[full] = value;
    }
    return cfg;
  }

  std::string serialize() const {
    // Top-level keys first, then one section per dotted prefix.
    std::ostringstream out;
    std::map<std::string, std::map<std::string, std::string>> sections;
    for (const auto& [k, v] : entries) {
      auto dot = k.find('.');
      if (dot == std::string::npos)
        out << k << " = " << v << "\n";
      else
        sections[k.substr(0, dot)][k.substr(dot + 1)] = v;
    }
    for (const auto& [sec, kv] : sections) {
      out << "[" << sec << "]\n";
      for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
    }
    return out.str();
  }

  void set(const std::string& key, const std::string& value) { entries[key] = value; }
  bool has(const std::string& key) const { return entries.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback = "") const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "': not a number: " + it->second);
    }
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
      std::size_t pos = 0;
      long long v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "': not an integer: " + it->second);
    }
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "': not an unsigned integer: " + it->second);
    }
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }
};

/// Builds an ExperimentSpec from a config, rejecting unknown keys.
inline ExperimentSpec spec_from_config(const RunConfig& cfg) {
  std::string name = cfg.get("experiment");
  if (name.empty()) throw std::invalid_argument("config: missing 'experiment'");
  const ExperimentInfo& info = find_experiment(name);

  ExperimentSpec spec = default_spec(name);
  for (const auto& [key, value] : cfg.entries) {
    (void)value;
    if (key == "experiment" || key == "horizon" || key == "steps" || key == "paths" ||
        key == "seed" || key == "tol_scale" || key == "out")
      continue;
    if (key.rfind("param.", 0) == 0) {
      std::string p = key.substr(6);
      if (!info.accepts_param(p))
        throw std::invalid_argument("config: experiment '" + name + "' has no parameter '" + p + "'");
      continue;
    }
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  spec.grid = TimeGrid(cfg.get_double("horizon", spec.grid.horizon),
                       cfg.get_int("steps", spec.grid.steps));
  spec.paths = cfg.get_int("paths", spec.paths);
  if (spec.paths < 1) throw std::invalid_argument("config: paths must be >= 1");
  spec.seed = cfg.get_uint("seed", spec.seed);
  spec.tol_scale = cfg.get_double("tol_scale", spec.tol_scale);
  if (!(spec.tol_scale > 0.0)) throw std::invalid_argument("config: tol_scale must be positive");
  for (const auto& [key, value] : cfg.entries) {
    (void)value;
    if (key.rfind("param.", 0) == 0) {
      std::string p = key.substr(6);
      spec.params[p] = cfg.get_double(key, 0.0);
    }
  }
  return spec;
}

/// The canonical config echo of a spec; re-parsing it reproduces the spec.
inline RunConfig config_from_spec(const ExperimentSpec& spec) {
  RunConfig cfg;
  cfg.set("experiment", spec.name);
  cfg.set("horizon", detail::format_double(spec.grid.horizon));
  cfg.set("steps", std::to_string(spec.grid.steps));
  cfg.set("paths", std::to_string(spec.paths));
  cfg.set("seed", std::to_string(spec.seed));
  cfg.set("tol_scale", detail::format_double(spec.tol_scale));
  for (const auto& [k, v] : spec.params) cfg.set("param." + k, detail::format_double(v));
  return cfg;
}

}  // namespace semilt
