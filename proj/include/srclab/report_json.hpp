#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <string>

#include "srclab/verifier.hpp"

namespace srclab {

namespace detail {

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

/// 17 significant digits; non-finite values become null.
inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline constexpr int kReportSchemaVersion = 1;

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Report as JSON with a fixed field order. Everything except `timestamp`
/// is a function of the report.
inline std::string to_json(const Report& r, const std::string& timestamp) {
  using detail::json_number;
  using detail::json_string;
  std::string o = "{\n";
  o += "  \"schema_version\": " + std::to_string(kReportSchemaVersion) + ",\n";
  o += "  \"manifold\": " + json_string(r.manifold) + ",\n";
  o += "  \"seed\": " + std::to_string(r.seed) + ",\n";
  o += "  \"points\": " + std::to_string(r.points) + ",\n";
  o += "  \"jet_order\": " + std::to_string(r.jet_order) + ",\n";
  o += "  \"checks\": [";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const CheckRecord& c = r.checks[i];
    o += i ? ",\n" : "\n";
    o += "    {\"id\": " + json_string(c.id);
    o += ", \"description\": " + json_string(c.description);
    o += ", \"paper_ref\": " + json_string(c.paper_ref);
    o += ", \"max_abs_residual\": " + json_number(c.max_abs_residual);
    o += ", \"max_rel_residual\": " + json_number(c.max_rel_residual);
    o += ", \"tolerance\": " + json_number(c.tolerance);
    o += std::string(", \"pass\": ") + (c.pass ? "true" : "false");
    o += ", \"skipped_reason\": " + (c.skipped_reason ? json_string(*c.skipped_reason) : std::string("null"));
    o += "}";
  }
  o += r.checks.empty() ? "],\n" : "\n  ],\n";
  o += "  \"warnings\": [";
  for (std::size_t i = 0; i < r.warnings.size(); ++i) o += (i ? ", " : "") + json_string(r.warnings[i]);
  o += "],\n";
  o += "  \"timestamp\": " + json_string(timestamp) + "\n}\n";
  return o;
}

}  // namespace srclab
