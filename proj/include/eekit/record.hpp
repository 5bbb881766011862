#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace eekit {

// One model run. Analytic runs carry no attempt metadata; external runs
// record timestamps and the child's exit status.
struct EvaluationRecord {
  int point_id = -1;
  std::vector<double> physical_values;
  std::map<std::string, double> outputs;
  bool ok = false;
  std::string error;  // diagnostic when !ok

  std::optional<std::int64_t> started_unix_ms;
  std::optional<std::int64_t> finished_unix_ms;
  std::optional<int> exit_status;

  nlohmann::json to_json() const;
  static EvaluationRecord from_json(const nlohmann::json& j);
};

}  // namespace eekit
