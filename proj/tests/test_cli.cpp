#include "doctest.h"

#include <cstdlib>
#include <iostream>

#include "eekit/cli.hpp"
#include "eekit/config.hpp"
#include "test_util.hpp"

using namespace eekit;

namespace {

std::filesystem::path configs_dir() {
  if (const char* env = std::getenv("EEKIT_CONFIG_DIR")) return env;
  return std::filesystem::path(EEKIT_SOURCE_DIR) / "configs";
}

int run(const std::vector<std::string>& args, std::string* out = nullptr) {
  CaptureStdout capture;
  const int code = cli_main(args);
  if (out) *out = capture.text();
  return code;
}

}  // namespace

TEST_CASE("plan announces the pre-deduplication run count") {
  TempDir tmp;
  const auto config = (configs_dir() / "experiment_a.json").string();
  const auto plan_path = tmp.file("plan.json").string();

  std::string out;
  CHECK(run({"plan", "--config", config, "--out", plan_path}, &out) == kExitOk);
  CHECK(out.find("evaluations required: 250") != std::string::npos);
  CHECK(std::filesystem::exists(plan_path));

  std::string out_b;
  const auto config_b = (configs_dir() / "experiment_b_small.json").string();
  CHECK(run({"plan", "--config", config_b, "--out", tmp.file("plan_b.json").string()}, &out_b) ==
        kExitOk);
  CHECK(out_b.find("evaluations required: 790") != std::string::npos);
}

TEST_CASE("invalid configs exit with the config code") {
  TempDir tmp;
  write_file(tmp.file("bad.json"), R"({
    "schema": "eekit-config/1",
    "parameters": [{"name": "a", "min": 0, "max": 1, "levels": 5}],
    "model": {"type": "analytic", "kind": "linear", "a": [1.0], "output": "y"},
    "design": {"mode": "first_order", "replicates": 2, "seed": 1},
    "analyses": [{"name": "y", "output": "y"}]
  })");
  CHECK(run({"plan", "--config", tmp.file("bad.json").string(),
             "--out", tmp.file("p.json").string()}) == kExitConfig);
  CHECK(run({"plan", "--config", tmp.file("does-not-exist.json").string()}) == kExitConfig);
  CHECK(run({"frobnicate"}) == kExitConfig);
}

TEST_CASE("full pipeline: plan, run, analyze, report") {
  TempDir tmp;
  const auto config = (configs_dir() / "experiment_a.json").string();
  const auto plan_path = tmp.file("plan.json").string();
  const auto ledger_path = tmp.file("ledger.jsonl").string();
  const auto out_dir = tmp.file("out").string();

  REQUIRE(run({"plan", "--config", config, "--out", plan_path}) == kExitOk);

  std::string run_out;
  REQUIRE(run({"run", "--config", config, "--plan", plan_path, "--ledger", ledger_path},
              &run_out) == kExitOk);
  CHECK(run_out.find("0 failed") != std::string::npos);

  // The cache satisfies a second run entirely.
  std::string rerun_out;
  REQUIRE(run({"run", "--config", config, "--plan", plan_path, "--ledger", ledger_path},
              &rerun_out) == kExitOk);
  CHECK(rerun_out.find("0 new evaluations") != std::string::npos);

  std::string analyze_out;
  REQUIRE(run({"analyze", "--config", config, "--plan", plan_path, "--ledger", ledger_path,
               "--out-dir", out_dir}, &analyze_out) == kExitOk);
  CHECK(analyze_out.find("run counter unchanged") != std::string::npos);
  for (const char* name : {"heating_kwh", "heating_kwh_per_m3", "ln_heating_kwh",
                           "ln_heating_kwh_per_m3"}) {
    CHECK(std::filesystem::exists(tmp.file("out") / ("effects_" + std::string(name) + ".csv")));
    CHECK(std::filesystem::exists(tmp.file("out") / ("summary_" + std::string(name) + ".csv")));
  }
  CHECK(std::filesystem::exists(tmp.file("out") / "evaluations.csv"));

  REQUIRE(run({"report", "--config", config, "--out-dir", out_dir}) == kExitOk);
  CHECK(std::filesystem::exists(tmp.file("out") / "zones_heating_kwh.csv"));
  CHECK(std::filesystem::exists(tmp.file("out") / "scatter_heating_kwh_sigma.svg"));
  CHECK(std::filesystem::exists(tmp.file("out") / "scatter_heating_kwh_ratio.svg"));

  // Forcing one presentation only emits that file.
  const auto out2 = tmp.file("out2").string();
  REQUIRE(run({"analyze", "--config", config, "--plan", plan_path, "--ledger", ledger_path,
               "--out-dir", out2}) == kExitOk);
  REQUIRE(run({"report", "--config", config, "--out-dir", out2, "--presentation", "sigma"}) ==
          kExitOk);
  CHECK(std::filesystem::exists(tmp.file("out2") / "scatter_heating_kwh_sigma.svg"));
  CHECK(!std::filesystem::exists(tmp.file("out2") / "scatter_heating_kwh_ratio.svg"));
}

TEST_CASE("stale plans are refused") {
  TempDir tmp;
  const auto config = (configs_dir() / "experiment_b_small.json").string();
  const auto other = (configs_dir() / "experiment_a.json").string();
  const auto plan_path = tmp.file("plan.json").string();
  REQUIRE(run({"plan", "--config", config, "--out", plan_path}) == kExitOk);
  CHECK(run({"run", "--config", other, "--plan", plan_path,
             "--ledger", tmp.file("l.jsonl").string()}) == kExitConfig);
}

TEST_CASE("incomplete ledgers stop analysis with the missing ids") {
  TempDir tmp;
  const auto config = (configs_dir() / "experiment_b_small.json").string();
  const auto plan_path = tmp.file("plan.json").string();
  const auto ledger_path = tmp.file("ledger.jsonl").string();

  REQUIRE(run({"plan", "--config", config, "--out", plan_path}) == kExitOk);
  REQUIRE(run({"run", "--config", config, "--plan", plan_path, "--ledger", ledger_path}) ==
          kExitOk);

  // Drop the last two records.
  std::string content = read_file(ledger_path);
  for (int i = 0; i < 2; ++i) {
    content.pop_back();
    content.erase(content.find_last_of('\n') + 1);
  }
  write_file(ledger_path, content);

  CHECK(run({"analyze", "--config", config, "--plan", plan_path, "--ledger", ledger_path,
             "--out-dir", tmp.file("out").string()}) == kExitIncompleteLedger);
}

TEST_CASE("failed external evaluations exit with the evaluation code") {
  TempDir tmp;
  write_file(tmp.file("external.json"), R"({
    "schema": "eekit-config/1",
    "parameters": [
      {"name": "a", "min": 0, "max": 1, "levels": 10},
      {"name": "b", "min": 0, "max": 1, "levels": 10}
    ],
    "model": {"type": "external", "command": ["/nonexistent/simulator"],
              "outputs": ["y"], "timeout_s": 10, "max_parallel": 1},
    "design": {"mode": "first_order", "replicates": 2, "seed": 5},
    "analyses": [{"name": "y", "output": "y"}]
  })");
  const auto config = tmp.file("external.json").string();
  const auto plan_path = tmp.file("plan.json").string();
  REQUIRE(run({"plan", "--config", config, "--out", plan_path}) == kExitOk);
  CHECK(run({"run", "--config", config, "--plan", plan_path,
             "--ledger", tmp.file("ledger.jsonl").string()}) == kExitEvaluationFailed);
}

TEST_CASE("seed overrides are reflected in the plan file") {
  TempDir tmp;
  const auto config = (configs_dir() / "experiment_b_small.json").string();
  const auto a = tmp.file("a.json").string();
  const auto b = tmp.file("b.json").string();
  REQUIRE(run({"plan", "--config", config, "--out", a}) == kExitOk);
  REQUIRE(run({"plan", "--config", config, "--out", b, "--seed", "123456"}) == kExitOk);
  CHECK(read_file(a) != read_file(b));

  // The overridden plan still matches the config file's hash.
  CHECK(run({"run", "--config", config, "--plan", b,
             "--ledger", tmp.file("l.jsonl").string()}) == kExitOk);
}
