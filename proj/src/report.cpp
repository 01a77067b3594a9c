#include "prslab/report.hpp"

#include <stdexcept>

namespace prslab {

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "experiment" && key != "params" && key != "seed" &&
        key != "out" && key != "threads") {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  ExperimentConfig config;
  config.experiment = j.at("experiment").get<std::string>();
  if (j.contains("params")) config.params = j.at("params");
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) config.threads = j.at("threads").get<int>();
  return config;
}

std::string ExperimentReport::canonical() const {
  json results;
  results["artifact_version"] = kArtifactVersion;
  results["experiment"] = experiment;
  results["params"] = params;
  results["seed"] = seed;
  results["estimates"] = estimates;
  results["pass_fail"] = pass_fail;
  return results.dump();
}

json ExperimentReport::to_json() const {
  json out;
  out["results"] = json::parse(canonical());
  out["wall_time_ms"] = wall_time_ms;
  return out;
}

bool ExperimentReport::all_passed() const {
  for (const auto& [name, ok] : pass_fail.items()) {
    (void)name;
    if (!ok.get<bool>()) return false;
  }
  return true;
}

namespace {

bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer();
  throw std::invalid_argument("schema uses unsupported type: " + type);
}

void validate_node(const json& value, const json& schema,
                   const std::string& path) {
  if (schema.contains("type") &&
      !type_matches(value, schema.at("type").get<std::string>())) {
    throw std::invalid_argument("schema violation at " + path +
                                ": wrong type");
  }
  if (!value.is_object()) return;
  const json props =
      schema.contains("properties") ? schema.at("properties") : json::object();
  if (schema.contains("required")) {
    for (const auto& name : schema.at("required")) {
      if (!value.contains(name.get<std::string>())) {
        throw std::invalid_argument("schema violation at " + path +
                                    ": missing " + name.get<std::string>());
      }
    }
  }
  const bool closed = schema.contains("additionalProperties") &&
                      schema.at("additionalProperties").is_boolean() &&
                      !schema.at("additionalProperties").get<bool>();
  const json* additional =
      (schema.contains("additionalProperties") &&
       schema.at("additionalProperties").is_object())
          ? &schema.at("additionalProperties")
          : nullptr;
  for (const auto& [name, member] : value.items()) {
    if (props.contains(name)) {
      validate_node(member, props.at(name), path + "/" + name);
    } else if (additional != nullptr) {
      validate_node(member, *additional, path + "/" + name);
    } else if (closed) {
      throw std::invalid_argument("schema violation at " + path +
                                  ": unexpected member " + name);
    }
  }
}

}  // namespace

void validate_report(const json& report, const json& schema) {
  validate_node(report, schema, "");
}

const json& report_schema() {
  static const json schema = json::parse(R"({
    "type": "object",
    "required": ["results", "wall_time_ms"],
    "additionalProperties": false,
    "properties": {
      "wall_time_ms": {"type": "number"},
      "results": {
        "type": "object",
        "required": ["artifact_version", "experiment", "params", "seed",
                     "estimates", "pass_fail"],
        "additionalProperties": false,
        "properties": {
          "artifact_version": {"type": "string"},
          "experiment": {"type": "string"},
          "seed": {"type": "integer"},
          "params": {"type": "object"},
          "pass_fail": {
            "type": "object",
            "additionalProperties": {"type": "boolean"}
          },
          "estimates": {
            "type": "object",
            "additionalProperties": {
              "type": "object",
              "required": ["value"],
              "additionalProperties": false,
              "properties": {
                "value": {"type": "number"},
                "std_error": {"type": "number"},
                "trials": {"type": "integer"}
              }
            }
          }
        }
      }
    }
  })");
  return schema;
}

}  // namespace prslab
