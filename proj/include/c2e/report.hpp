#pragma once

// Run configuration and the versioned JSON report.

#include <string>

#include <json.hpp>
#include "c2e/harness.hpp"

namespace c2e {

inline constexpr int kReportSchema = 1;

struct RunConfig {
  std::string suite = "identities";
  std::string chart;  // empty: the suite default
  std::size_t points = 10;
  std::size_t trials = 5;
  int order = 0;      // 0: the suite default
  double tol = 1e-7;
  std::uint64_t seed = 1;
  bool serial = false;
  std::string out;
};

/// Fields present in `j` override `base`. StructuralError on unknown keys or
/// wrong types.
RunConfig merge_config(RunConfig base, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

/// Report body. Timing is kept under the single key "timing" so that two
/// runs can be compared with report_body.
nlohmann::json report_json(const VerificationReport& rep, const RunConfig& cfg, double seconds);
/// The report without its "timing" key, serialised.
std::string report_body(const nlohmann::json& report);

}  // namespace c2e
