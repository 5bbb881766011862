#include "eekit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "eekit/analysis.hpp"
#include "eekit/config.hpp"
#include "eekit/csv.hpp"
#include "eekit/errors.hpp"
#include "eekit/numeric.hpp"

namespace eekit {

namespace {

namespace fs = std::filesystem;

DesignPlan load_plan_checked(const std::string& plan_path, const ExperimentConfig& config) {
  DesignPlan plan = read_plan(plan_path);
  const std::string expected = config_hash(config);
  if (plan.config_hash != expected)
    throw ConfigError("plan " + plan_path + " is stale: it was generated from a different config (" +
                      plan.config_hash + " != " + expected + ")");
  return plan;
}

void require_ledger_matches(const Ledger& ledger, const DesignPlan& plan) {
  const LedgerMeta expected = LedgerMeta::for_plan(plan);
  const LedgerMeta& got = ledger.meta();
  if (got.config_hash != expected.config_hash || got.rng != expected.rng ||
      got.mode != expected.mode || got.replicates != expected.replicates ||
      got.seed != expected.seed || got.plan_points != expected.plan_points)
    throw LedgerError("ledger " + ledger.path().string() + " belongs to a different plan");
}

int cmd_plan(const std::string& config_path, const std::string& out_path,
             std::optional<std::uint64_t> seed_override) {
  ExperimentConfig config = load_config(config_path);
  const std::uint64_t seed = seed_override.value_or(config.design.seed);
  config.design.seed = seed;

  DesignPlan plan = config.design.mode == DesignMode::first_order
                        ? sample_first_order(config.parameters, config.design.replicates, seed)
                        : sample_second_order(config.parameters, config.design.replicates, seed);
  plan.config_hash = config_hash(config);
  plan.config_echo = config.to_json();
  write_plan(plan, out_path);

  std::cout << "plan written to " << out_path << "\n"
            << "parameters: " << plan.k() << ", mode: " << to_string(plan.mode)
            << ", replicates: " << plan.replicates << ", seed: " << plan.seed << "\n"
            << "evaluations required: " << plan.total_design_points << " ("
            << plan.point_index.size() << " distinct grid points)\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& plan_path,
            const std::string& ledger_path, int jobs, double timeout_s) {
  const ExperimentConfig config = load_config(config_path);
  const DesignPlan plan = load_plan_checked(plan_path, config);

  Ledger ledger = Ledger::open(ledger_path, LedgerMeta::for_plan(plan));
  EvalOptions options;
  options.jobs = jobs;
  options.timeout_s = timeout_s;
  const EvalStats stats = evaluate_plan(plan, config.model, ledger, options);

  std::cout << stats.invoked << " new evaluations, " << stats.cached << " cached, "
            << stats.failed << " failed; run counter " << ledger.run_count() << "\n";
  if (stats.failed > 0) {
    std::cerr << "error: " << stats.failed << " evaluation(s) failed; see " << ledger_path
              << " for diagnostics\n";
    return kExitEvaluationFailed;
  }
  return kExitOk;
}

void write_evaluations_csv(const fs::path& path, const DesignPlan& plan, const Ledger& ledger,
                           const std::vector<std::string>& raw_outputs,
                           const std::vector<AnalysisSpec>& analyses,
                           const std::vector<std::vector<double>>& derived) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());

  std::vector<std::string> header{"point_id"};
  for (const auto& p : plan.parameters) header.push_back(p.name);
  for (const auto& name : raw_outputs) header.push_back(name);
  for (const auto& a : analyses) header.push_back(a.name);
  out << join_csv(header) << '\n';

  for (int id = 0; id < static_cast<int>(plan.point_index.size()); ++id) {
    const EvaluationRecord& rec = *ledger.find(id);
    std::vector<std::string> row{std::to_string(id)};
    for (double v : rec.physical_values) row.push_back(format_double(v));
    for (const auto& name : raw_outputs) row.push_back(format_double(rec.outputs.at(name)));
    for (const auto& column : derived) row.push_back(format_double(column[id]));
    out << join_csv(row) << '\n';
  }
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

int cmd_analyze(const std::string& config_path, const std::string& plan_path,
                const std::string& ledger_path, const std::string& out_dir) {
  const ExperimentConfig config = load_config(config_path);
  const DesignPlan plan = load_plan_checked(plan_path, config);
  const Ledger ledger = Ledger::load(ledger_path);
  require_ledger_matches(ledger, plan);

  const auto missing = missing_points(plan, ledger);
  if (!missing.empty()) {
    std::cerr << "error: ledger incomplete for this plan; missing or failed point ids:";
    for (int id : missing) std::cerr << ' ' << id;
    std::cerr << "\n";
    return kExitIncompleteLedger;
  }

  fs::create_directories(out_dir);
  const long run_counter = ledger.run_count();

  bool any_aborted = false;
  std::vector<AnalysisSpec> succeeded;
  std::vector<std::vector<double>> derived_columns;
  for (const auto& analysis : config.analyses) {
    try {
      AnalysisResult result = analyze_one(plan, ledger, analysis);
      write_effects_csv(fs::path(out_dir) / ("effects_" + analysis.name + ".csv"),
                        result.first_samples, result.pair_samples, plan.k());
      write_summary_csv(fs::path(out_dir) / ("summary_" + analysis.name + ".csv"),
                        result.summaries);
      derived_columns.push_back(std::move(result.point_values));
      succeeded.push_back(analysis);
      std::cout << "analysis " << analysis.name << ": wrote effects and summary tables\n";
    } catch (const TransformDomainError& e) {
      std::cerr << "analysis " << analysis.name << " aborted: " << e.what() << "\n";
      any_aborted = true;
    }
  }

  write_evaluations_csv(fs::path(out_dir) / "evaluations.csv", plan, ledger,
                        model_outputs(config.model), succeeded, derived_columns);

  if (ledger.run_count() != run_counter)
    throw InternalError("analysis changed the run counter");  // transforms must not run models
  std::cout << "run counter unchanged: " << run_counter << "\n";
  return any_aborted ? kExitEvaluationFailed : kExitOk;
}

int cmd_report(const std::string& config_path, const std::string& out_dir,
               const std::vector<std::string>& presentation_flags) {
  const ExperimentConfig config = load_config(config_path);

  std::vector<Presentation> forced;
  for (const auto& p : presentation_flags) forced.push_back(presentation_from_string(p));

  std::vector<std::string> names;
  for (const auto& p : config.parameters) names.push_back(p.name);

  for (const auto& analysis : config.analyses) {
    const fs::path summary_path = fs::path(out_dir) / ("summary_" + analysis.name + ".csv");
    if (!fs::exists(summary_path))
      throw IoError("summary file " + summary_path.string() + " not found; run analyze first");
    const auto summaries = read_summary_csv(summary_path);

    const auto zones = classify(summaries);
    write_zones_csv(fs::path(out_dir) / ("zones_" + analysis.name + ".csv"), summaries, zones,
                    names);

    const auto& presentations = forced.empty() ? analysis.presentations : forced;
    for (const auto presentation : presentations) {
      const fs::path svg_path =
          fs::path(out_dir) /
          ("scatter_" + analysis.name + "_" + to_string(presentation) + ".svg");
      emit_scatter_svg(summaries, presentation, svg_path, analysis.name);
      std::cout << "wrote " << svg_path.string() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Elementary-effects screening toolkit: one-at-a-time sensitivity designs, "
               "first- and second-order effect statistics, zone reports"};
  app.require_subcommand(1);

  std::string config_path, plan_path = "plan.json", ledger_path = "ledger.jsonl";
  std::string out_path = "plan.json", out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  int jobs = 1;
  double timeout_s = 0.0;
  std::vector<std::string> presentations;

  auto* plan = app.add_subcommand("plan", "Generate a randomized design plan from a config");
  plan->add_option("--config", config_path, "Experiment config JSON")->required();
  plan->add_option("--out", out_path, "Plan file to write")->capture_default_str();
  plan->add_option("--seed", seed_override, "Override the config seed");

  auto* run = app.add_subcommand("run", "Evaluate the plan's points against the model");
  run->add_option("--config", config_path, "Experiment config JSON")->required();
  run->add_option("--plan", plan_path, "Plan file")->capture_default_str();
  run->add_option("--ledger", ledger_path, "Evaluation ledger (JSON lines)")
      ->capture_default_str();
  run->add_option("--jobs", jobs, "Parallel evaluations")->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--timeout-s", timeout_s, "Override the external model timeout");

  auto* analyze = app.add_subcommand("analyze", "Compute effect tables from a completed ledger");
  analyze->add_option("--config", config_path, "Experiment config JSON")->required();
  analyze->add_option("--plan", plan_path, "Plan file")->capture_default_str();
  analyze->add_option("--ledger", ledger_path, "Evaluation ledger")->capture_default_str();
  analyze->add_option("--out-dir", out_dir, "Directory for CSV tables")->capture_default_str();

  auto* report = app.add_subcommand("report", "Classify zones and draw scatter plots");
  report->add_option("--config", config_path, "Experiment config JSON")->required();
  report->add_option("--out-dir", out_dir, "Directory with summary tables")
      ->capture_default_str();
  report->add_option("--presentation", presentations,
                     "sigma and/or ratio (default: per-analysis config)")
      ->check(CLI::IsMember({"sigma", "ratio"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (plan->parsed()) return cmd_plan(config_path, out_path, seed_override);
    if (run->parsed()) return cmd_run(config_path, plan_path, ledger_path, jobs, timeout_s);
    if (analyze->parsed()) return cmd_analyze(config_path, plan_path, ledger_path, out_dir);
    if (report->parsed()) return cmd_report(config_path, out_dir, presentations);
  } catch (const IncompleteEvaluationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIncompleteLedger;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"eekit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace eekit
