#pragma once

#include <string>
#include <vector>

#include "eekit/config.hpp"
#include "eekit/effects.hpp"
#include "eekit/model.hpp"

namespace eekit {

// Effect samples and summaries for one analysis over a completed ledger.
struct AnalysisResult {
  std::string name;
  std::vector<double> point_values;                // derived output, by point id
  std::vector<std::vector<double>> first_samples;  // k groups x r replicates
  std::vector<std::vector<double>> pair_samples;   // k(k-1)/2 groups x r (second order only)
  std::vector<EffectsSummary> summaries;           // parameter rows, then pair rows
};

// Throws IncompleteEvaluationError (listing point ids) if any plan point has
// no ok record, and TransformDomainError if the chain fails at some point.
// Never invokes a model: it only reads the ledger.
AnalysisResult analyze_one(const DesignPlan& plan, const Ledger& ledger,
                           const AnalysisSpec& analysis);

// Derived output value of every plan point under the analysis' chain.
std::vector<double> derived_point_values(const DesignPlan& plan, const Ledger& ledger,
                                         const AnalysisSpec& analysis);

// Point ids in the plan with no ok record in the ledger.
std::vector<int> missing_points(const DesignPlan& plan, const Ledger& ledger);

}  // namespace eekit
