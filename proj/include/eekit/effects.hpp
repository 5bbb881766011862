#pragma once

#include <optional>
#include <span>
#include <vector>

#include "eekit/design.hpp"

namespace eekit {

// Output values indexed by point id; nullopt marks a missing evaluation.
using PointOutputs = std::vector<std::optional<double>>;

// One elementary effect per coordinate, computed over the trajectory step
// where that coordinate changes. Uses the signed-step convention: the
// difference is divided by signs[i]*delta_i, so a linear model yields the
// same effect from upward and downward steps.
std::vector<double> first_order_effects(const Trajectory& traj,
                                        const std::vector<ParameterSpec>& params,
                                        const PointOutputs& outputs);

struct PairEffects {
  std::vector<double> single;   // EE_i from base -> single step, size k
  std::vector<double> see;      // SEE_ij, pair_index order
  std::vector<double> pair;     // EE_ij = |SEE_ij - EE_i/s_j - EE_j/s_i|
};

PairEffects second_order_effects(const PairBlock& block,
                                 const std::vector<ParameterSpec>& params,
                                 const PointOutputs& outputs);

struct SummaryStats {
  double mu = 0.0;
  double mu_star = 0.0;
  std::optional<double> sigma;       // sample stddev, n >= 2 only; never 0 for n = 1
  std::optional<double> ratio_star;  // sigma/mu_star, needs sigma and mu_star > 0
  std::optional<double> ratio_abs;   // sigma/|mu|, needs sigma and mu != 0
  int n = 0;
};

// mu = mean, mu_star = mean of |values|, sigma with n-1 divisor.
SummaryStats aggregate(std::span<const double> samples);

// (sigma/mu_star, sigma/|mu|); both absent when mu_star is 0.
std::pair<std::optional<double>, std::optional<double>> monotonicity_ratios(
    const SummaryStats& stats);

// A summary row: one parameter (is_pair = false, j unused) or one pair.
struct EffectsSummary {
  bool is_pair = false;
  int i = 0;
  int j = -1;
  SummaryStats stats;
};

}  // namespace eekit
