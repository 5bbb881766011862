#include "eekit/transforms.hpp"

#include <cmath>

#include "eekit/errors.hpp"
#include "eekit/numeric.hpp"

namespace eekit {

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity: return "identity";
    case TransformKind::natural_log: return "natural_log";
    case TransformKind::divide_by_product: return "divide_by_product";
    case TransformKind::affine: return "affine";
  }
  throw InternalError("unknown transform kind");
}

TransformKind transform_kind_from_string(const std::string& s) {
  if (s == "identity") return TransformKind::identity;
  if (s == "natural_log") return TransformKind::natural_log;
  if (s == "divide_by_product") return TransformKind::divide_by_product;
  if (s == "affine") return TransformKind::affine;
  throw ConfigError("unknown transform kind '" + s + "'");
}

double apply_step(const TransformSpec& t, const EvaluationRecord& record, double value) {
  const std::string at = " at point " + std::to_string(record.point_id);
  double result = value;
  switch (t.kind) {
    case TransformKind::identity:
      break;
    case TransformKind::natural_log:
      if (!(value > 0.0))
        throw TransformDomainError("natural_log of non-positive value " + format_double(value) +
                                   at);
      result = std::log(value);
      break;
    case TransformKind::divide_by_product: {
      double divisor = t.constant;
      for (int idx : t.parameters) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= record.physical_values.size())
          throw TransformDomainError("divide_by_product parameter index " + std::to_string(idx) +
                                     " out of range" + at);
        divisor *= record.physical_values[idx];
      }
      if (divisor == 0.0) throw TransformDomainError("divide_by_product divisor is zero" + at);
      result = value / divisor;
      break;
    }
    case TransformKind::affine:
      result = value * t.scale + t.offset;
      break;
  }
  if (!std::isfinite(result))
    throw TransformDomainError(to_string(t.kind) + " produced a non-finite value" + at);
  return result;
}

double apply(const TransformSpec& t, const EvaluationRecord& record,
             const std::string& output_name) {
  return apply_chain({&t, 1}, record, output_name);
}

double apply_chain(std::span<const TransformSpec> chain, const EvaluationRecord& record,
                   const std::string& output_name) {
  auto it = record.outputs.find(output_name);
  if (it == record.outputs.end())
    throw IncompleteEvaluationError("point " + std::to_string(record.point_id) +
                                    " has no output named '" + output_name + "'");
  double value = it->second;
  for (const auto& t : chain) value = apply_step(t, record, value);
  return value;
}

}  // namespace eekit
