#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "eekit/design.hpp"
#include "eekit/record.hpp"

namespace eekit {

// Built-in analytic models over reduced coordinates; deterministic test
// oracles and stand-ins for an external simulator.
struct AnalyticModel {
  enum class Kind { linear, bilinear, product_exp, ishigami_like };

  Kind kind = Kind::linear;
  std::vector<double> coeffs;  // linear / product_exp coefficients
  double offset = 0.0;         // linear constant term
  double coeff_c = 1.0;        // bilinear coefficient
  int idx_i = 0, idx_j = 1;    // bilinear coordinate pair (0-based)
  double ish_a = 7.0;          // ishigami amplitudes
  double ish_b = 0.1;
  std::string output = "y";

  void validate(int k) const;
  double evaluate(std::span<const double> reduced) const;

  static AnalyticModel linear(std::vector<double> a, double b = 0.0);
  static AnalyticModel bilinear(double c, int i, int j);
  static AnalyticModel product_exp(std::vector<double> a);
  static AnalyticModel ishigami_like(double a, double b);
};

std::string to_string(AnalyticModel::Kind kind);
AnalyticModel::Kind analytic_kind_from_string(const std::string& s);

// External simulator driven through a request/response CSV protocol:
// request has header "point_id,<parameter names...>" with physical values;
// the command is invoked with {request} and {response} substituted in its
// argument template; the response must have header "point_id,<outputs...>"
// and one row per requested id, in any order.
struct ExternalModelSpec {
  std::vector<std::string> command;   // argv template with {request}/{response}
  std::vector<std::string> outputs;   // declared output names
  double timeout_s = 300.0;
  int max_parallel = 1;

  void validate() const;
};

using Model = std::variant<AnalyticModel, ExternalModelSpec>;

std::vector<std::string> model_outputs(const Model& model);

struct LedgerMeta {
  std::string config_hash;
  std::string rng;
  std::string mode;
  int replicates = 0;
  std::uint64_t seed = 0;
  long plan_points = 0;  // distinct points in the plan

  static LedgerMeta for_plan(const DesignPlan& plan);
};

// Append-only JSON-lines run ledger: a header line followed by one record
// per model invocation. Later lines for the same point id supersede earlier
// ones, so a failed attempt can be retried on resume without rewriting.
class Ledger {
 public:
  // Create the file (with header) or resume an existing one whose header
  // matches `meta`; a mismatch throws LedgerError.
  static Ledger open(const std::filesystem::path& path, const LedgerMeta& meta);

  // Read-only load for analysis.
  static Ledger load(const std::filesystem::path& path);

  void append(const EvaluationRecord& record);

  const EvaluationRecord* find(int point_id) const;
  bool has_ok(int point_id) const;

  // Total model invocations recorded in the file (all sessions).
  long run_count() const { return run_count_; }
  const LedgerMeta& meta() const { return meta_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  Ledger() = default;
  void read_existing(const std::filesystem::path& path, const LedgerMeta* expected);

  std::filesystem::path path_;
  LedgerMeta meta_;
  std::unordered_map<int, EvaluationRecord> records_;
  long run_count_ = 0;
  std::ofstream out_;
};

struct EvalOptions {
  int jobs = 1;
  double timeout_s = 0.0;  // > 0 overrides the external spec's timeout
};

struct EvalStats {
  long invoked = 0;   // new model runs this call
  long cached = 0;    // points already satisfied by the ledger
  long failed = 0;    // records appended with ok = false
};

// Evaluate every distinct plan point that the ledger does not already have
// an ok record for. Records are appended in point-id order for analytic
// models; external batches append as they complete.
EvalStats evaluate_plan(const DesignPlan& plan, const Model& model, Ledger& ledger,
                        const EvalOptions& options = {});

// One external invocation over a batch of points. Exposed for testing; most
// callers go through evaluate_plan.
std::vector<EvaluationRecord> run_external_batch(
    const std::vector<int>& point_ids, const std::vector<std::vector<double>>& physical_values,
    const std::vector<std::string>& parameter_names, const ExternalModelSpec& spec,
    const std::filesystem::path& scratch_dir, double timeout_s, const std::string& batch_tag);

}  // namespace eekit
