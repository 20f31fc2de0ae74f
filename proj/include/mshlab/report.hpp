#ifndef MSHLAB_REPORT_HPP
#define MSHLAB_REPORT_HPP

// Structured result records for the verification suite and the text
// serializers behind the command-line tool: a fixed-schema JSON report, a
// flat CSV with one row per check, and CSV exports for density profiles and
// sublevel-volume scans. All numeric text is rendered at 17 significant
// digits so that round-tripping a report loses no precision and two runs
// with the same configuration produce byte-identical bytes (apart from the
// caller-supplied run identifier).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mshlab/errors.hpp"
#include "mshlab/exponent.hpp"
#include "mshlab/lelong.hpp"
#include "mshlab/setting.hpp"

namespace mshlab {

// ---------------------------------------------------------------------------
// Check records
// ---------------------------------------------------------------------------

enum class CheckStatus { Pass, Fail, Finding, Skipped };

inline std::string checkStatusName(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Finding:
      return "finding";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "?";
}

// One verification check. `value`/`expected` are numeric when the check
// reduces to a number; non-numeric outcomes (divergence, unboundedness) are
// carried by the *Note sentinels instead. `finding` marks checks whose
// purpose is to measure something (a constant, a gap) or to confirm an
// expected non-convergence, rather than to pass a threshold.
struct CheckResult {
  std::string id;
  std::string claim;  // what property the check exercises, in plain words
  CheckStatus status = CheckStatus::Skipped;
  std::optional<double> value;
  std::optional<double> expected;
  std::optional<double> tolerance;
  std::string valueNote;     // sentinel when value is non-numeric
  std::string expectedNote;  // sentinel when expected is non-numeric
  std::string diagnostics;
};

// Process-level exit policy: failures dominate; findings and skips are
// informational.
inline int suiteExitCode(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return 1;
  return 0;
}

struct ReportMeta {
  std::string runId;
  Setting setting{3, 2};
  std::uint64_t seed = 42;
  double kappa = 1.0;  // calibration constant measured for this setting
};

// ---------------------------------------------------------------------------
// Text formatting helpers
// ---------------------------------------------------------------------------

// 17 significant digits: enough to reconstruct a double exactly.
inline std::string formatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

namespace detail {

inline std::string jsonEscape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

inline std::string jsonString(const std::string& s) { return "\"" + jsonEscape(s) + "\""; }

// JSON has no literals for non-finite numbers; fall back to a string.
inline std::string jsonReal(double v) {
  if (!std::isfinite(v)) return jsonString(v > 0 ? "inf" : (v < 0 ? "-inf" : "nan"));
  return formatReal(v);
}

// Numeric value if present, otherwise the sentinel text, otherwise null.
inline std::string jsonValueOrNote(const std::optional<double>& v, const std::string& note) {
  if (v.has_value()) return jsonReal(*v);
  if (!note.empty()) return jsonString(note);
  return "null";
}

inline std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

inline std::string csvValueOrNote(const std::optional<double>& v, const std::string& note) {
  if (v.has_value()) return formatReal(*v);
  return csvField(note);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Report serializers
// ---------------------------------------------------------------------------

// Fixed-schema JSON document:
//   { "runId": str, "setting": {"n": int, "m": int}, "seed": int,
//     "kappa": real, "checks": [ {id, claim, status, value, expected,
//     tolerance, diagnostics}... ] }
// Emitted by hand so the key order and the numeric formatting are pinned;
// any JSON library can parse it back.
inline std::string reportJson(const ReportMeta& meta, const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"runId\": " << detail::jsonString(meta.runId) << ",\n";
  out << "  \"setting\": {\"n\": " << meta.setting.n << ", \"m\": " << meta.setting.m << "},\n";
  out << "  \"seed\": " << meta.seed << ",\n";
  out << "  \"kappa\": " << detail::jsonReal(meta.kappa) << ",\n";
  out << "  \"checks\": [";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const CheckResult& c = checks[i];
    out << (i ? ",\n    {" : "\n    {");
    out << "\"id\": " << detail::jsonString(c.id) << ", ";
    out << "\"claim\": " << detail::jsonString(c.claim) << ", ";
    out << "\"status\": " << detail::jsonString(checkStatusName(c.status)) << ", ";
    out << "\"value\": " << detail::jsonValueOrNote(c.value, c.valueNote) << ", ";
    out << "\"expected\": " << detail::jsonValueOrNote(c.expected, c.expectedNote) << ", ";
    out << "\"tolerance\": "
        << (c.tolerance ? detail::jsonReal(*c.tolerance) : std::string("null")) << ", ";
    out << "\"diagnostics\": " << detail::jsonString(c.diagnostics) << "}";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

// One row per check; same fields as the JSON objects.
inline std::string reportCsv(const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  out << "id,claim,status,value,expected,tolerance,diagnostics\n";
  for (const CheckResult& c : checks) {
    out << detail::csvField(c.id) << "," << detail::csvField(c.claim) << ","
        << checkStatusName(c.status) << "," << detail::csvValueOrNote(c.value, c.valueNote)
        << "," << detail::csvValueOrNote(c.expected, c.expectedNote) << ","
        << (c.tolerance ? formatReal(*c.tolerance) : std::string()) << ","
        << detail::csvField(c.diagnostics) << "\n";
  }
  return out.str();
}

// Normalized-mass profile export: one row per grid radius.
inline std::string profileCsv(const LelongProfile& prof) {
  std::ostringstream out;
  out << "r,nu,stderr,method\n";
  for (std::size_t i = 0; i < prof.radii.size(); ++i) {
    out << formatReal(prof.radii[i]) << "," << formatReal(prof.values[i]) << ","
        << formatReal(prof.stderrs[i]) << "," << methodName(prof.methods[i]) << "\n";
  }
  return out.str();
}

// Sublevel-volume scan export: one row per threshold.
inline std::string sublevelCsv(const std::vector<SublevelEstimate>& rows) {
  std::ostringstream out;
  out << "t,volume,stderr,method\n";
  for (const SublevelEstimate& s : rows) {
    out << formatReal(s.t) << "," << formatReal(s.volume) << ","
        << formatReal(s.stderrOfMean) << "," << methodName(s.method) << "\n";
  }
  return out.str();
}

// Summary of an integrability analysis: the tail fit together with the
// threshold located by the convergence scan.
inline std::string exponentSummaryJson(const TailFit& fit, const ExponentEstimate& scan) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"tail\": {";
  if (fit.unbounded) {
    out << "\"alpha\": \"unbounded\", ";
  } else {
    out << "\"alpha\": " << detail::jsonReal(fit.alpha) << ", ";
    out << "\"cAlpha\": " << detail::jsonReal(fit.cAlpha) << ", ";
  }
  out << "\"rSquared\": " << detail::jsonReal(fit.rSquared) << ", ";
  out << "\"tMin\": " << detail::jsonReal(fit.tRange.first) << ", ";
  out << "\"tMax\": " << detail::jsonReal(fit.tRange.second) << ", ";
  out << "\"pointsUsed\": " << fit.pointsUsed << "},\n";
  out << "  \"scan\": {";
  if (scan.unbounded()) {
    out << "\"iota\": \"unbounded\", ";
  } else {
    out << "\"iota\": " << detail::jsonReal(*scan.iota) << ", ";
  }
  out << "\"intervalLow\": " << detail::jsonReal(scan.interval.first) << ", ";
  out << "\"intervalHigh\": " << detail::jsonReal(scan.interval.second) << ", ";
  out << "\"method\": " << detail::jsonString(exponentMethodName(scan.method)) << "}\n";
  out << "}\n";
  return out.str();
}

inline void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw InvalidInput("failed writing output file: " + path);
}

}  // namespace mshlab

#endif
