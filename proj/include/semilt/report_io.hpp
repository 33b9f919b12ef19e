#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "semilt/experiments.hpp"

namespace semilt {

/// JSON form of a report. Key order is lexicographic (nlohmann's std::map
/// backing) and all values are pure functions of the spec, so reruns produce
/// byte-identical documents.
inline std::string report_to_json(const ExperimentReport& rep) {
  nlohmann::json j;
  j["experiment"] = rep.name;
  j["pass"] = rep.pass;
  j["config"] = rep.config_echo;
  nlohmann::json sums = nlohmann::json::object();
  for (const auto& [name, s] : rep.summaries) {
    sums[name] = {{"mean", s.mean},     {"stderr", s.stderr_of_mean}, {"median", s.median},
                  {"p95", s.p95},       {"max", s.max},               {"count", s.count}};
  }
  j["summaries"] = sums;
  j["scalars"] = rep.scalars;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"op", c.op},
                      {"pass", c.pass}});
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

/// Per-path residual table, one row per path, 17 significant digits.
inline std::string residuals_to_csv(const ExperimentReport& rep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < rep.residual_header.size(); ++i) {
    if (i) out << ",";
    out << rep.residual_header[i];
  }
  out << "\n";
  char buf[40];
  for (std::size_t r = 0; r < rep.residual_rows.size(); ++r) {
    out << r;
    for (double v : rep.residual_rows[r]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

/// Long-format path CSV: path_index,time_index,t,value.
inline std::string paths_to_csv(const std::vector<SamplePath>& paths) {
  std::ostringstream out;
  out << "path_index,time_index,t,value\n";
  char buf[40];
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& path = paths[p];
    for (std::int64_t k = 0; k <= path.steps(); ++k) {
      out << p << "," << k;
      std::snprintf(buf, sizeof(buf), "%.17g", path.grid.time(k));
      out << "," << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", path.value(k));
      out << "," << buf << "\n";
    }
  }
  return out.str();
}

/// Local-time curve CSV: time_index,t,local_time.
inline std::string curve_to_csv(const LocalTimeCurve& curve) {
  std::ostringstream out;
  out << "time_index,t,local_time\n";
  char buf[40];
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    out << k;
    std::snprintf(buf, sizeof(buf), "%.17g", curve.grid.time(static_cast<std::int64_t>(k)));
    out << "," << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", curve.values[k]);
    out << "," << buf << "\n";
  }
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace semilt
