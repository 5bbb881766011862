#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "eekit/design.hpp"
#include "eekit/model.hpp"
#include "eekit/report.hpp"
#include "eekit/transforms.hpp"

namespace eekit {

struct DesignSpec {
  DesignMode mode = DesignMode::first_order;
  int replicates = 10;
  std::uint64_t seed = 0;
};

// One analysis: a raw model output plus a transform chain, written out as
// effects/summary tables and plots under this name.
struct AnalysisSpec {
  std::string name;
  std::string output;
  std::vector<TransformSpec> transforms;
  std::vector<Presentation> presentations;
};

struct ExperimentConfig {
  std::vector<ParameterSpec> parameters;
  Model model;
  DesignSpec design;
  std::vector<AnalysisSpec> analyses;

  int parameter_index(const std::string& name) const;  // throws ConfigError

  // Canonical JSON form; parse(to_json()) == *this field for field.
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

ExperimentConfig load_config(const std::filesystem::path& path);

// Fingerprint of the canonical config with the seed normalized out, so a
// --seed override does not orphan the plan from its config file.
std::string config_hash(const ExperimentConfig& config);

}  // namespace eekit
