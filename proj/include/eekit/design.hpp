#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "eekit/grid.hpp"

namespace eekit {

enum class DesignMode { first_order, second_order };

std::string to_string(DesignMode mode);
DesignMode design_mode_from_string(const std::string& s);

// A sequence of k+1 grid points where each coordinate changes exactly once,
// by signs[i] * delta_i, in the order given by `order`.
struct Trajectory {
  std::vector<GridPoint> points;  // k+1
  std::vector<int> order;         // permutation of 0..k-1; coordinate changed at step t
  std::vector<int> signs;         // per coordinate, +1 or -1
  std::vector<int> point_ids;     // filled when the plan is assembled

  void validate(const std::vector<ParameterSpec>& params) const;
};

// Shared-base block for pair effects: the base point, every single step and
// every double step. Single/double points are derived from base + signs.
struct PairBlock {
  GridPoint base;
  std::vector<int> signs;  // per coordinate, +1 or -1

  int base_id = -1;
  std::vector<int> single_ids;  // k
  std::vector<int> double_ids;  // k(k-1)/2 in pair_index order

  GridPoint single_step(int i, const std::vector<ParameterSpec>& params) const;
  GridPoint double_step(int i, int j, const std::vector<ParameterSpec>& params) const;

  void validate(const std::vector<ParameterSpec>& params) const;
};

// Flat index of pair (i, j), i < j, among the k(k-1)/2 pairs, i-major.
int pair_count(int k);
int pair_index(int i, int j, int k);
std::pair<int, int> pair_from_index(int idx, int k);

struct DesignPlan {
  std::vector<ParameterSpec> parameters;
  DesignMode mode = DesignMode::first_order;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::string rng_id;

  std::vector<Trajectory> trajectories;  // first_order
  std::vector<PairBlock> blocks;         // second_order

  // Deduplicated points; a point's id is its position here.
  std::vector<GridPoint> point_index;

  // Design size before deduplication: r(k+1) or r(1 + k + k(k-1)/2).
  long total_design_points = 0;

  // Set when the plan was generated from a config file.
  std::string config_hash;
  nlohmann::json config_echo;

  int k() const { return static_cast<int>(parameters.size()); }
  std::vector<double> reduced_of(const GridPoint& gp) const;
  std::vector<double> physical_of(const GridPoint& gp) const;
};

// Random start point per trajectory (uniform over the full grid), random
// coordinate order, step signs from the reflection rule.
DesignPlan sample_first_order(std::vector<ParameterSpec> parameters, int replicates,
                              std::uint64_t seed);

// One shared-base block per replicate: base + k singles + k(k-1)/2 doubles.
DesignPlan sample_second_order(std::vector<ParameterSpec> parameters, int replicates,
                               std::uint64_t seed);

// Assemble a plan from explicit trajectories: validates them, deduplicates
// points and assigns stable ids in traversal order.
DesignPlan plan_from_trajectories(std::vector<ParameterSpec> parameters,
                                  std::vector<Trajectory> trajectories, std::uint64_t seed,
                                  std::string rng_id);

DesignPlan plan_from_blocks(std::vector<ParameterSpec> parameters, std::vector<PairBlock> blocks,
                            std::uint64_t seed, std::string rng_id);

nlohmann::json plan_to_json(const DesignPlan& plan);
DesignPlan plan_from_json(const nlohmann::json& j);

void write_plan(const DesignPlan& plan, const std::string& path);
DesignPlan read_plan(const std::string& path);

}  // namespace eekit
