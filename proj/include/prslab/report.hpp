// report.hpp -- experiment configuration and report emission
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace prslab {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "0.1.0";

struct ExperimentConfig {
  std::string experiment;
  json params = json::object();
  std::uint64_t seed = 0;
  int threads = 1;

  static ExperimentConfig from_json(const json& j);
};

struct ExperimentReport {
  std::string experiment;
  json params = json::object();
  std::uint64_t seed = 0;
  json estimates = json::object();   // name -> {value, std_error, trials}
  json pass_fail = json::object();   // criterion -> bool
  double wall_time_ms = 0.0;

  // Everything deterministic, excluding wall time. Reruns with an identical
  // config reproduce these bytes exactly.
  std::string canonical() const;
  // Full report including the volatile wall_time_ms.
  json to_json() const;

  bool all_passed() const;
};

// Validates a full report against the checked-in JSON schema subset
// (type / properties / required / additionalProperties). Throws on mismatch.
void validate_report(const json& report, const json& schema);

// The shipped schema, identical to docs/report-schema.json.
const json& report_schema();

}  // namespace prslab
