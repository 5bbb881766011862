#include "eekit/analysis.hpp"

#include "eekit/errors.hpp"
#include "eekit/transforms.hpp"

namespace eekit {

std::vector<int> missing_points(const DesignPlan& plan, const Ledger& ledger) {
  std::vector<int> missing;
  for (int id = 0; id < static_cast<int>(plan.point_index.size()); ++id)
    if (!ledger.has_ok(id)) missing.push_back(id);
  return missing;
}

std::vector<double> derived_point_values(const DesignPlan& plan, const Ledger& ledger,
                                         const AnalysisSpec& analysis) {
  const auto missing = missing_points(plan, ledger);
  if (!missing.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i)
      ids += (i ? ", " : "") + std::to_string(missing[i]);
    if (missing.size() > 20) ids += ", ...";
    throw IncompleteEvaluationError("ledger incomplete for this plan; " +
                                    std::to_string(missing.size()) +
                                    " point(s) missing or failed: " + ids);
  }

  std::vector<double> values(plan.point_index.size());
  for (int id = 0; id < static_cast<int>(plan.point_index.size()); ++id)
    values[id] = apply_chain(analysis.transforms, *ledger.find(id), analysis.output);
  return values;
}

AnalysisResult analyze_one(const DesignPlan& plan, const Ledger& ledger,
                           const AnalysisSpec& analysis) {
  const int k = plan.k();

  AnalysisResult result;
  result.name = analysis.name;
  result.point_values = derived_point_values(plan, ledger, analysis);
  PointOutputs outputs(result.point_values.begin(), result.point_values.end());
  result.first_samples.assign(k, {});

  if (plan.mode == DesignMode::first_order) {
    for (const auto& traj : plan.trajectories) {
      const auto ee = first_order_effects(traj, plan.parameters, outputs);
      for (int i = 0; i < k; ++i) result.first_samples[i].push_back(ee[i]);
    }
  } else {
    result.pair_samples.assign(pair_count(k), {});
    for (const auto& block : plan.blocks) {
      const auto effects = second_order_effects(block, plan.parameters, outputs);
      for (int i = 0; i < k; ++i) result.first_samples[i].push_back(effects.single[i]);
      for (int idx = 0; idx < pair_count(k); ++idx)
        result.pair_samples[idx].push_back(effects.pair[idx]);
    }
  }

  for (int i = 0; i < k; ++i) {
    EffectsSummary s;
    s.is_pair = false;
    s.i = i;
    s.stats = aggregate(result.first_samples[i]);
    result.summaries.push_back(std::move(s));
  }
  for (int idx = 0; idx < static_cast<int>(result.pair_samples.size()); ++idx) {
    const auto [i, j] = pair_from_index(idx, k);
    EffectsSummary s;
    s.is_pair = true;
    s.i = i;
    s.j = j;
    s.stats = aggregate(result.pair_samples[idx]);
    result.summaries.push_back(std::move(s));
  }
  return result;
}

}  // namespace eekit
