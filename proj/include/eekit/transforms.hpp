#pragma once

#include <span>
#include <string>
#include <vector>

#include "eekit/record.hpp"

namespace eekit {

// Derived outputs are pure post-processing over already evaluated records.
// This layer has no access to any model runner, so declaring more analyses
// can never trigger model runs.

enum class TransformKind { identity, natural_log, divide_by_product, affine };

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& s);

struct TransformSpec {
  TransformKind kind = TransformKind::identity;

  // divide_by_product: divisor = constant * product of the restored physical
  // values of these parameters (0-based indices), read from the record.
  std::vector<int> parameters;
  double constant = 1.0;

  // affine: value*scale + offset
  double scale = 1.0;
  double offset = 0.0;
};

// One step of a chain applied to `value` at this record's point.
double apply_step(const TransformSpec& t, const EvaluationRecord& record, double value);

// Convenience: apply a single transform to the named raw output.
double apply(const TransformSpec& t, const EvaluationRecord& record,
             const std::string& output_name);

// Apply a whole chain to the named raw output; an empty chain returns it as is.
double apply_chain(std::span<const TransformSpec> chain, const EvaluationRecord& record,
                   const std::string& output_name);

}  // namespace eekit
