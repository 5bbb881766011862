#include "eekit/design.hpp"

#include <fstream>
#include <map>
#include <numeric>
#include <utility>

#include "eekit/errors.hpp"
#include "eekit/rng.hpp"

namespace eekit {

namespace {

void validate_parameters(const std::vector<ParameterSpec>& params, int min_k) {
  if (static_cast<int>(params.size()) < min_k)
    throw DesignError("design requires at least " + std::to_string(min_k) + " parameters");
  for (const auto& p : params) p.validate();
}

int stepped_level(const ParameterSpec& p, int level, int sign) {
  const int stepped = level + sign * delta_level_steps(p.levels);
  if (stepped < 0 || stepped >= p.levels)
    throw InternalError("parameter '" + p.name + "': step left the grid (level " +
                        std::to_string(level) + " -> " + std::to_string(stepped) + ")");
  return stepped;
}

int sign_for_level(const ParameterSpec& p, int level) {
  return step_sign(p.grid_value(level));
}

void check_on_grid(const GridPoint& gp, const std::vector<ParameterSpec>& params,
                   const char* what) {
  if (gp.levels_idx.size() != params.size())
    throw DesignError(std::string(what) + ": point dimension mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const int m = gp.levels_idx[i];
    if (m < 0 || m >= params[i].levels)
      throw DesignError(std::string(what) + ": coordinate " + std::to_string(i) +
                        " off the grid (level " + std::to_string(m) + ")");
  }
}

}  // namespace

std::string to_string(DesignMode mode) {
  return mode == DesignMode::first_order ? "first_order" : "second_order";
}

DesignMode design_mode_from_string(const std::string& s) {
  if (s == "first_order") return DesignMode::first_order;
  if (s == "second_order") return DesignMode::second_order;
  throw ConfigError("unknown design mode '" + s + "' (expected first_order or second_order)");
}

void Trajectory::validate(const std::vector<ParameterSpec>& params) const {
  const std::size_t k = params.size();
  if (points.size() != k + 1) throw DesignError("trajectory must have k+1 points");
  if (order.size() != k || signs.size() != k)
    throw DesignError("trajectory order/signs must have k entries");

  std::vector<int> seen(k, 0);
  for (int i : order) {
    if (i < 0 || static_cast<std::size_t>(i) >= k) throw DesignError("trajectory order out of range");
    seen[i]++;
  }
  for (std::size_t i = 0; i < k; ++i)
    if (seen[i] != 1) throw DesignError("trajectory must change each coordinate exactly once");

  for (const auto& gp : points) check_on_grid(gp, params, "trajectory");

  for (std::size_t t = 0; t < k; ++t) {
    const auto& a = points[t].levels_idx;
    const auto& b = points[t + 1].levels_idx;
    const int i = order[t];
    for (std::size_t c = 0; c < k; ++c) {
      if (static_cast<int>(c) == i) continue;
      if (a[c] != b[c])
        throw DesignError("trajectory points " + std::to_string(t) + " and " +
                          std::to_string(t + 1) + " differ outside coordinate " + std::to_string(i));
    }
    const int expected = stepped_level(params[i], a[i], signs[i]);
    if (b[i] != expected)
      throw DesignError("trajectory step " + std::to_string(t) +
                        " does not equal signs[i]*delta_i in coordinate " + std::to_string(i));
  }
}

GridPoint PairBlock::single_step(int i, const std::vector<ParameterSpec>& params) const {
  GridPoint gp = base;
  gp.levels_idx[i] = stepped_level(params[i], gp.levels_idx[i], signs[i]);
  return gp;
}

GridPoint PairBlock::double_step(int i, int j, const std::vector<ParameterSpec>& params) const {
  GridPoint gp = single_step(i, params);
  gp.levels_idx[j] = stepped_level(params[j], gp.levels_idx[j], signs[j]);
  return gp;
}

void PairBlock::validate(const std::vector<ParameterSpec>& params) const {
  const std::size_t k = params.size();
  if (k < 2) throw DesignError("pair block requires k >= 2");
  if (signs.size() != k) throw DesignError("pair block signs must have k entries");
  check_on_grid(base, params, "pair block");
  for (std::size_t i = 0; i < k; ++i) {
    if (signs[i] != 1 && signs[i] != -1) throw DesignError("pair block signs must be +1/-1");
    check_on_grid(single_step(static_cast<int>(i), params), params, "pair block single step");
  }
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      check_on_grid(double_step(static_cast<int>(i), static_cast<int>(j), params), params,
                    "pair block double step");
}

int pair_count(int k) { return k * (k - 1) / 2; }

int pair_index(int i, int j, int k) {
  if (i < 0 || j <= i || j >= k) throw InternalError("pair_index: bad pair");
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> pair_from_index(int idx, int k) {
  for (int i = 0; i < k - 1; ++i) {
    const int row = k - 1 - i;
    if (idx < row) return {i, i + 1 + idx};
    idx -= row;
  }
  throw InternalError("pair_from_index: index out of range");
}

std::vector<double> DesignPlan::reduced_of(const GridPoint& gp) const {
  std::vector<double> out(parameters.size());
  for (std::size_t i = 0; i < parameters.size(); ++i)
    out[i] = parameters[i].grid_value(gp.levels_idx[i]);
  return out;
}

std::vector<double> DesignPlan::physical_of(const GridPoint& gp) const {
  std::vector<double> out(parameters.size());
  for (std::size_t i = 0; i < parameters.size(); ++i)
    out[i] = parameters[i].restore(parameters[i].grid_value(gp.levels_idx[i]));
  return out;
}

namespace {

// Deduplicating point registry; ids are assigned in first-seen order.
class PointIndex {
 public:
  int id_of(const GridPoint& gp) {
    auto [it, inserted] = ids_.try_emplace(gp, static_cast<int>(points_.size()));
    if (inserted) points_.push_back(gp);
    return it->second;
  }
  std::vector<GridPoint> take() { return std::move(points_); }

 private:
  std::map<GridPoint, int> ids_;
  std::vector<GridPoint> points_;
};

}  // namespace

DesignPlan plan_from_trajectories(std::vector<ParameterSpec> parameters,
                                  std::vector<Trajectory> trajectories, std::uint64_t seed,
                                  std::string rng_id) {
  validate_parameters(parameters, 1);
  const int k = static_cast<int>(parameters.size());

  DesignPlan plan;
  plan.mode = DesignMode::first_order;
  plan.replicates = static_cast<int>(trajectories.size());
  plan.seed = seed;
  plan.rng_id = std::move(rng_id);

  PointIndex index;
  for (auto& traj : trajectories) {
    traj.validate(parameters);
    traj.point_ids.clear();
    traj.point_ids.reserve(traj.points.size());
    for (const auto& gp : traj.points) traj.point_ids.push_back(index.id_of(gp));
  }
  plan.trajectories = std::move(trajectories);
  plan.point_index = index.take();
  plan.total_design_points = static_cast<long>(plan.replicates) * (k + 1);
  plan.parameters = std::move(parameters);
  return plan;
}

DesignPlan plan_from_blocks(std::vector<ParameterSpec> parameters, std::vector<PairBlock> blocks,
                            std::uint64_t seed, std::string rng_id) {
  validate_parameters(parameters, 2);
  const int k = static_cast<int>(parameters.size());

  DesignPlan plan;
  plan.mode = DesignMode::second_order;
  plan.replicates = static_cast<int>(blocks.size());
  plan.seed = seed;
  plan.rng_id = std::move(rng_id);

  PointIndex index;
  for (auto& block : blocks) {
    block.validate(parameters);
    block.base_id = index.id_of(block.base);
    block.single_ids.assign(k, -1);
    for (int i = 0; i < k; ++i) block.single_ids[i] = index.id_of(block.single_step(i, parameters));
    block.double_ids.assign(pair_count(k), -1);
    for (int i = 0; i < k - 1; ++i)
      for (int j = i + 1; j < k; ++j)
        block.double_ids[pair_index(i, j, k)] = index.id_of(block.double_step(i, j, parameters));
  }
  plan.blocks = std::move(blocks);
  plan.point_index = index.take();
  plan.total_design_points = static_cast<long>(plan.replicates) * (1 + k + pair_count(k));
  plan.parameters = std::move(parameters);
  return plan;
}

DesignPlan sample_first_order(std::vector<ParameterSpec> parameters, int replicates,
                              std::uint64_t seed) {
  validate_parameters(parameters, 1);
  if (replicates < 1) throw DesignError("replicates must be >= 1");
  const int k = static_cast<int>(parameters.size());

  SampleRng rng(seed);
  std::vector<Trajectory> trajectories;
  trajectories.reserve(replicates);

  for (int t = 0; t < replicates; ++t) {
    Trajectory traj;
    GridPoint start;
    start.levels_idx.resize(k);
    traj.signs.resize(k);
    for (int i = 0; i < k; ++i) {
      start.levels_idx[i] = rng.level(parameters[i].levels);
      traj.signs[i] = sign_for_level(parameters[i], start.levels_idx[i]);
    }
    traj.order.resize(k);
    std::iota(traj.order.begin(), traj.order.end(), 0);
    rng.shuffle(traj.order);

    traj.points.reserve(k + 1);
    traj.points.push_back(start);
    for (int step = 0; step < k; ++step) {
      GridPoint next = traj.points.back();
      const int i = traj.order[step];
      next.levels_idx[i] = stepped_level(parameters[i], next.levels_idx[i], traj.signs[i]);
      traj.points.push_back(std::move(next));
    }
    trajectories.push_back(std::move(traj));
  }

  return plan_from_trajectories(std::move(parameters), std::move(trajectories), seed,
                                SampleRng::kAlgorithmId);
}

DesignPlan sample_second_order(std::vector<ParameterSpec> parameters, int replicates,
                               std::uint64_t seed) {
  validate_parameters(parameters, 2);
  if (replicates < 1) throw DesignError("replicates must be >= 1");
  const int k = static_cast<int>(parameters.size());

  SampleRng rng(seed);
  std::vector<PairBlock> blocks;
  blocks.reserve(replicates);

  for (int t = 0; t < replicates; ++t) {
    PairBlock block;
    block.base.levels_idx.resize(k);
    block.signs.resize(k);
    for (int i = 0; i < k; ++i) {
      block.base.levels_idx[i] = rng.level(parameters[i].levels);
      block.signs[i] = sign_for_level(parameters[i], block.base.levels_idx[i]);
    }
    blocks.push_back(std::move(block));
  }

  return plan_from_blocks(std::move(parameters), std::move(blocks), seed,
                          SampleRng::kAlgorithmId);
}

namespace {

nlohmann::json parameter_to_json(const ParameterSpec& p) {
  nlohmann::json j{{"name", p.name}, {"min", p.x_min}, {"max", p.x_max}, {"levels", p.levels}};
  if (p.nominal) j["nominal"] = *p.nominal;
  return j;
}

ParameterSpec parameter_from_json(const nlohmann::json& j) {
  ParameterSpec p;
  p.name = j.at("name").get<std::string>();
  p.x_min = j.at("min").get<double>();
  p.x_max = j.at("max").get<double>();
  p.levels = j.at("levels").get<int>();
  if (j.contains("nominal")) p.nominal = j.at("nominal").get<double>();
  p.validate();
  return p;
}

}  // namespace

nlohmann::json plan_to_json(const DesignPlan& plan) {
  nlohmann::json j;
  j["schema"] = "eekit-plan/1";
  j["mode"] = to_string(plan.mode);
  j["replicates"] = plan.replicates;
  j["seed"] = plan.seed;
  j["rng"] = plan.rng_id;
  j["total_design_points"] = plan.total_design_points;
  if (!plan.config_hash.empty()) j["config_hash"] = plan.config_hash;
  if (!plan.config_echo.is_null()) j["config"] = plan.config_echo;

  j["parameters"] = nlohmann::json::array();
  for (const auto& p : plan.parameters) j["parameters"].push_back(parameter_to_json(p));

  j["point_index"] = nlohmann::json::array();
  for (const auto& gp : plan.point_index) j["point_index"].push_back(gp.levels_idx);

  if (plan.mode == DesignMode::first_order) {
    j["trajectories"] = nlohmann::json::array();
    for (const auto& t : plan.trajectories)
      j["trajectories"].push_back(
          {{"order", t.order}, {"signs", t.signs}, {"point_ids", t.point_ids}});
  } else {
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : plan.blocks)
      j["blocks"].push_back({{"signs", b.signs},
                             {"base_id", b.base_id},
                             {"single_ids", b.single_ids},
                             {"double_ids", b.double_ids}});
  }
  return j;
}

DesignPlan plan_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "eekit-plan/1")
    throw ConfigError("plan file: unknown or missing schema field");

  std::vector<ParameterSpec> parameters;
  for (const auto& pj : j.at("parameters")) parameters.push_back(parameter_from_json(pj));

  std::vector<GridPoint> points;
  for (const auto& pj : j.at("point_index")) {
    GridPoint gp;
    gp.levels_idx = pj.get<std::vector<int>>();
    check_on_grid(gp, parameters, "plan point_index");
    points.push_back(std::move(gp));
  }
  auto point_at = [&](int id) -> const GridPoint& {
    if (id < 0 || id >= static_cast<int>(points.size()))
      throw ConfigError("plan file: point id " + std::to_string(id) + " out of range");
    return points[id];
  };

  const DesignMode mode = design_mode_from_string(j.at("mode").get<std::string>());
  const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
  const std::string rng_id = j.at("rng").get<std::string>();

  DesignPlan plan;
  if (mode == DesignMode::first_order) {
    std::vector<Trajectory> trajectories;
    for (const auto& tj : j.at("trajectories")) {
      Trajectory t;
      t.order = tj.at("order").get<std::vector<int>>();
      t.signs = tj.at("signs").get<std::vector<int>>();
      for (int id : tj.at("point_ids").get<std::vector<int>>()) t.points.push_back(point_at(id));
      trajectories.push_back(std::move(t));
    }
    plan = plan_from_trajectories(parameters, std::move(trajectories), seed, rng_id);
  } else {
    std::vector<PairBlock> blocks;
    for (const auto& bj : j.at("blocks")) {
      PairBlock b;
      b.signs = bj.at("signs").get<std::vector<int>>();
      b.base = point_at(bj.at("base_id").get<int>());
      blocks.push_back(std::move(b));
    }
    plan = plan_from_blocks(parameters, std::move(blocks), seed, rng_id);
  }

  // Rebuilt ids must agree with the stored design; a mismatch means the
  // file was edited or corrupted.
  if (plan.point_index != points)
    throw ConfigError("plan file: point index does not match the stored designs");
  if (mode == DesignMode::first_order) {
    const auto& stored = j.at("trajectories");
    for (std::size_t t = 0; t < plan.trajectories.size(); ++t)
      if (plan.trajectories[t].point_ids != stored[t].at("point_ids").get<std::vector<int>>())
        throw ConfigError("plan file: trajectory point ids do not match the point index");
  } else {
    const auto& stored = j.at("blocks");
    for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
      if (plan.blocks[b].single_ids != stored[b].at("single_ids").get<std::vector<int>>() ||
          plan.blocks[b].double_ids != stored[b].at("double_ids").get<std::vector<int>>())
        throw ConfigError("plan file: block point ids do not match the point index");
    }
  }

  plan.config_hash = j.value("config_hash", "");
  if (j.contains("config")) plan.config_echo = j.at("config");
  if (j.at("replicates").get<int>() != plan.replicates)
    throw ConfigError("plan file: replicates does not match the stored designs");
  if (j.contains("total_design_points") &&
      j.at("total_design_points").get<long>() != plan.total_design_points)
    throw ConfigError("plan file: total_design_points does not match the stored designs");
  return plan;
}

void write_plan(const DesignPlan& plan, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write plan file: " + path);
  out << plan_to_json(plan).dump(2) << '\n';
  if (!out) throw IoError("failed writing plan file: " + path);
}

DesignPlan read_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read plan file: " + path);
  nlohmann::json j;
  try {
    in >> j;
    return plan_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("plan file " + path + ": " + e.what());
  }
}

}  // namespace eekit
