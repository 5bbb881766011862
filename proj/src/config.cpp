#include "eekit/config.hpp"

#include <fstream>
#include <set>

#include "eekit/errors.hpp"
#include "eekit/numeric.hpp"

namespace eekit {

namespace {

// All lookups go through these so schema errors name the exact field.
const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError("config error at " + where + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const nlohmann::json& j, const char* key, const std::string& where) {
  try {
    return require(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config error at " + where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, const std::string& where, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_as<T>(j, key, where);
}

ParameterSpec parse_parameter(const nlohmann::json& j, const std::string& where) {
  ParameterSpec p;
  p.name = get_as<std::string>(j, "name", where);
  p.x_min = get_as<double>(j, "min", where);
  p.x_max = get_as<double>(j, "max", where);
  p.levels = get_as<int>(j, "levels", where);
  if (j.contains("nominal")) p.nominal = get_as<double>(j, "nominal", where);
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError("config error at " + where + ": " + e.what());
  }
  return p;
}

int resolve_parameter_ref(const nlohmann::json& ref, const std::vector<ParameterSpec>& params,
                          const std::string& where) {
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    for (std::size_t i = 0; i < params.size(); ++i)
      if (params[i].name == name) return static_cast<int>(i);
    throw ConfigError("config error at " + where + ": unknown parameter '" + name + "'");
  }
  if (ref.is_number_integer()) {
    const int one_based = ref.get<int>();
    if (one_based < 1 || one_based > static_cast<int>(params.size()))
      throw ConfigError("config error at " + where + ": parameter index " +
                        std::to_string(one_based) + " outside 1.." +
                        std::to_string(params.size()));
    return one_based - 1;
  }
  throw ConfigError("config error at " + where + ": parameter reference must be a name or index");
}

TransformSpec parse_transform(const nlohmann::json& j, const std::vector<ParameterSpec>& params,
                              const std::string& where) {
  TransformSpec t;
  t.kind = transform_kind_from_string(get_as<std::string>(j, "kind", where));
  switch (t.kind) {
    case TransformKind::identity:
    case TransformKind::natural_log:
      break;
    case TransformKind::divide_by_product: {
      if (j.contains("parameters")) {
        const auto& refs = j.at("parameters");
        if (!refs.is_array())
          throw ConfigError("config error at " + where + ".parameters: expected an array");
        for (std::size_t i = 0; i < refs.size(); ++i)
          t.parameters.push_back(resolve_parameter_ref(
              refs[i], params, where + ".parameters[" + std::to_string(i) + "]"));
      }
      t.constant = get_or<double>(j, "constant", where, 1.0);
      break;
    }
    case TransformKind::affine:
      t.scale = get_or<double>(j, "scale", where, 1.0);
      t.offset = get_or<double>(j, "offset", where, 0.0);
      break;
  }
  return t;
}

nlohmann::json transform_to_json(const TransformSpec& t, const std::vector<ParameterSpec>& params) {
  nlohmann::json j{{"kind", to_string(t.kind)}};
  if (t.kind == TransformKind::divide_by_product) {
    j["parameters"] = nlohmann::json::array();
    for (int idx : t.parameters) j["parameters"].push_back(params.at(idx).name);
    j["constant"] = t.constant;
  } else if (t.kind == TransformKind::affine) {
    j["scale"] = t.scale;
    j["offset"] = t.offset;
  }
  return j;
}

Model parse_model(const nlohmann::json& j, const std::vector<ParameterSpec>& params) {
  const std::string where = "model";
  const auto type = get_as<std::string>(j, "type", where);
  if (type == "analytic") {
    AnalyticModel m;
    m.kind = analytic_kind_from_string(get_as<std::string>(j, "kind", where));
    m.output = get_or<std::string>(j, "output", where, "y");
    switch (m.kind) {
      case AnalyticModel::Kind::linear:
        m.coeffs = get_as<std::vector<double>>(j, "a", where);
        m.offset = get_or<double>(j, "b", where, 0.0);
        break;
      case AnalyticModel::Kind::bilinear:
        m.coeff_c = get_or<double>(j, "c", where, 1.0);
        m.idx_i = resolve_parameter_ref(require(j, "i", where), params, where + ".i");
        m.idx_j = resolve_parameter_ref(require(j, "j", where), params, where + ".j");
        break;
      case AnalyticModel::Kind::product_exp:
        m.coeffs = get_as<std::vector<double>>(j, "a", where);
        break;
      case AnalyticModel::Kind::ishigami_like:
        m.ish_a = get_or<double>(j, "a", where, 7.0);
        m.ish_b = get_or<double>(j, "b", where, 0.1);
        break;
    }
    try {
      m.validate(static_cast<int>(params.size()));
    } catch (const Error& e) {
      throw ConfigError("config error at model: " + std::string(e.what()));
    }
    return m;
  }
  if (type == "external") {
    ExternalModelSpec m;
    m.command = get_as<std::vector<std::string>>(j, "command", where);
    m.outputs = get_as<std::vector<std::string>>(j, "outputs", where);
    m.timeout_s = get_or<double>(j, "timeout_s", where, 300.0);
    m.max_parallel = get_or<int>(j, "max_parallel", where, 1);
    try {
      m.validate();
    } catch (const Error& e) {
      throw ConfigError("config error at model: " + std::string(e.what()));
    }
    return m;
  }
  throw ConfigError("config error at model.type: expected 'analytic' or 'external', got '" +
                    type + "'");
}

nlohmann::json model_to_json(const Model& model, const std::vector<ParameterSpec>& params) {
  nlohmann::json j;
  if (const auto* m = std::get_if<AnalyticModel>(&model)) {
    j["type"] = "analytic";
    j["kind"] = to_string(m->kind);
    j["output"] = m->output;
    switch (m->kind) {
      case AnalyticModel::Kind::linear:
        j["a"] = m->coeffs;
        j["b"] = m->offset;
        break;
      case AnalyticModel::Kind::bilinear:
        j["c"] = m->coeff_c;
        j["i"] = params.at(m->idx_i).name;
        j["j"] = params.at(m->idx_j).name;
        break;
      case AnalyticModel::Kind::product_exp:
        j["a"] = m->coeffs;
        break;
      case AnalyticModel::Kind::ishigami_like:
        j["a"] = m->ish_a;
        j["b"] = m->ish_b;
        break;
    }
  } else {
    const auto& ext = std::get<ExternalModelSpec>(model);
    j["type"] = "external";
    j["command"] = ext.command;
    j["outputs"] = ext.outputs;
    j["timeout_s"] = ext.timeout_s;
    j["max_parallel"] = ext.max_parallel;
  }
  return j;
}

}  // namespace

int ExperimentConfig::parameter_index(const std::string& name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i)
    if (parameters[i].name == name) return static_cast<int>(i);
  throw ConfigError("unknown parameter '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "eekit-config/1")
    throw ConfigError("config error at schema: expected \"eekit-config/1\"");

  ExperimentConfig cfg;

  const auto& params_json = require(j, "parameters", "config");
  if (!params_json.is_array() || params_json.empty())
    throw ConfigError("config error at parameters: expected a non-empty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < params_json.size(); ++i) {
    auto p = parse_parameter(params_json[i], "parameters[" + std::to_string(i) + "]");
    if (!names.insert(p.name).second)
      throw ConfigError("config error at parameters[" + std::to_string(i) +
                        "]: duplicate parameter name '" + p.name + "'");
    cfg.parameters.push_back(std::move(p));
  }

  cfg.model = parse_model(require(j, "model", "config"), cfg.parameters);

  const auto& design = require(j, "design", "config");
  cfg.design.mode = design_mode_from_string(get_as<std::string>(design, "mode", "design"));
  cfg.design.replicates = get_as<int>(design, "replicates", "design");
  cfg.design.seed = get_as<std::uint64_t>(design, "seed", "design");
  if (cfg.design.replicates < 1)
    throw ConfigError("config error at design.replicates: must be >= 1");
  if (cfg.design.mode == DesignMode::second_order && cfg.parameters.size() < 2)
    throw ConfigError("config error at design.mode: second_order requires >= 2 parameters");

  const auto outputs = model_outputs(cfg.model);
  const auto& analyses = require(j, "analyses", "config");
  if (!analyses.is_array() || analyses.empty())
    throw ConfigError("config error at analyses: expected a non-empty array");
  std::set<std::string> analysis_names;
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    const std::string where = "analyses[" + std::to_string(i) + "]";
    AnalysisSpec a;
    a.name = get_as<std::string>(analyses[i], "name", where);
    if (a.name.empty() ||
        a.name.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
            std::string::npos)
      throw ConfigError("config error at " + where +
                        ".name: use letters, digits, '_' or '-' (it names output files)");
    if (!analysis_names.insert(a.name).second)
      throw ConfigError("config error at " + where + ".name: duplicate analysis name");
    a.output = get_as<std::string>(analyses[i], "output", where);
    if (std::find(outputs.begin(), outputs.end(), a.output) == outputs.end())
      throw ConfigError("config error at " + where + ".output: '" + a.output +
                        "' is not a model output");
    if (analyses[i].contains("transforms")) {
      const auto& ts = analyses[i].at("transforms");
      if (!ts.is_array())
        throw ConfigError("config error at " + where + ".transforms: expected an array");
      for (std::size_t t = 0; t < ts.size(); ++t)
        a.transforms.push_back(parse_transform(
            ts[t], cfg.parameters, where + ".transforms[" + std::to_string(t) + "]"));
    }
    const auto pres = get_or<std::vector<std::string>>(analyses[i], "presentations", where,
                                                       {"sigma"});
    for (const auto& p : pres) a.presentations.push_back(presentation_from_string(p));
    cfg.analyses.push_back(std::move(a));
  }
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["schema"] = "eekit-config/1";
  j["parameters"] = nlohmann::json::array();
  for (const auto& p : parameters) {
    nlohmann::json pj{{"name", p.name}, {"min", p.x_min}, {"max", p.x_max}, {"levels", p.levels}};
    if (p.nominal) pj["nominal"] = *p.nominal;
    j["parameters"].push_back(std::move(pj));
  }
  j["model"] = model_to_json(model, parameters);
  j["design"] = {{"mode", to_string(design.mode)},
                 {"replicates", design.replicates},
                 {"seed", design.seed}};
  j["analyses"] = nlohmann::json::array();
  for (const auto& a : analyses) {
    nlohmann::json aj{{"name", a.name}, {"output", a.output}};
    aj["transforms"] = nlohmann::json::array();
    for (const auto& t : a.transforms) aj["transforms"].push_back(transform_to_json(t, parameters));
    aj["presentations"] = nlohmann::json::array();
    for (auto p : a.presentations) aj["presentations"].push_back(to_string(p));
    j["analyses"].push_back(std::move(aj));
  }
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
  nlohmann::json j = config.to_json();
  j["design"]["seed"] = 0;
  return fnv1a64_hex(j.dump());
}

}  // namespace eekit
