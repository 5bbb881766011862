#include "eekit/effects.hpp"

#include <cmath>

#include "eekit/errors.hpp"

namespace eekit {

namespace {

double output_at(const PointOutputs& outputs, int point_id) {
  if (point_id < 0 || static_cast<std::size_t>(point_id) >= outputs.size() ||
      !outputs[point_id].has_value())
    throw IncompleteEvaluationError("point " + std::to_string(point_id) +
                                    " has no evaluated output");
  return *outputs[point_id];
}

}  // namespace

std::vector<double> first_order_effects(const Trajectory& traj,
                                        const std::vector<ParameterSpec>& params,
                                        const PointOutputs& outputs) {
  const int k = static_cast<int>(params.size());
  if (traj.point_ids.size() != static_cast<std::size_t>(k + 1))
    throw DesignError("trajectory has no point ids; assemble it into a plan first");

  std::vector<double> ee(k, 0.0);
  for (int step = 0; step < k; ++step) {
    const int i = traj.order[step];
    const double before = output_at(outputs, traj.point_ids[step]);
    const double after = output_at(outputs, traj.point_ids[step + 1]);
    const double signed_step = traj.signs[i] * delta_for(params[i].levels);
    ee[i] = (after - before) / signed_step;
  }
  return ee;
}

PairEffects second_order_effects(const PairBlock& block,
                                 const std::vector<ParameterSpec>& params,
                                 const PointOutputs& outputs) {
  const int k = static_cast<int>(params.size());
  if (block.base_id < 0 || block.single_ids.size() != static_cast<std::size_t>(k) ||
      block.double_ids.size() != static_cast<std::size_t>(pair_count(k)))
    throw DesignError("pair block has no point ids; assemble it into a plan first");

  std::vector<double> signed_steps(k);
  for (int i = 0; i < k; ++i) signed_steps[i] = block.signs[i] * delta_for(params[i].levels);

  PairEffects out;
  const double y_base = output_at(outputs, block.base_id);

  out.single.resize(k);
  for (int i = 0; i < k; ++i)
    out.single[i] = (output_at(outputs, block.single_ids[i]) - y_base) / signed_steps[i];

  out.see.resize(pair_count(k));
  out.pair.resize(pair_count(k));
  for (int i = 0; i < k - 1; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const int idx = pair_index(i, j, k);
      const double y_both = output_at(outputs, block.double_ids[idx]);
      const double see = (y_both - y_base) / (signed_steps[i] * signed_steps[j]);
      out.see[idx] = see;
      out.pair[idx] =
          std::abs(see - out.single[i] / signed_steps[j] - out.single[j] / signed_steps[i]);
    }
  }
  return out;
}

SummaryStats aggregate(std::span<const double> samples) {
  if (samples.empty()) throw StatsError("aggregate: empty sample group");

  SummaryStats s;
  s.n = static_cast<int>(samples.size());

  double sum = 0.0, sum_abs = 0.0;
  for (double v : samples) {
    if (!std::isfinite(v)) throw StatsError("aggregate: non-finite effect sample");
    sum += v;
    sum_abs += std::abs(v);
  }
  s.mu = sum / s.n;
  s.mu_star = sum_abs / s.n;

  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : samples) {
      const double d = v - s.mu;
      ss += d * d;
    }
    s.sigma = std::sqrt(ss / (s.n - 1));
    if (s.mu_star > 0.0) s.ratio_star = *s.sigma / s.mu_star;
    if (s.mu != 0.0) s.ratio_abs = *s.sigma / std::abs(s.mu);
  }
  return s;
}

std::pair<std::optional<double>, std::optional<double>> monotonicity_ratios(
    const SummaryStats& stats) {
  if (stats.mu_star == 0.0 || !stats.sigma.has_value()) return {std::nullopt, std::nullopt};
  return {stats.ratio_star, stats.ratio_abs};
}

}  // namespace eekit
