#include "eekit/model.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include "eekit/csv.hpp"
#include "eekit/errors.hpp"
#include "eekit/numeric.hpp"

namespace eekit {

// ---------------------------------------------------------------------------
// EvaluationRecord JSON

nlohmann::json EvaluationRecord::to_json() const {
  nlohmann::json j;
  j["point_id"] = point_id;
  j["x"] = physical_values;
  j["status"] = ok ? "ok" : "failed";
  if (!outputs.empty()) j["outputs"] = outputs;
  if (!error.empty()) j["error"] = error;
  if (started_unix_ms) j["t_start_ms"] = *started_unix_ms;
  if (finished_unix_ms) j["t_end_ms"] = *finished_unix_ms;
  if (exit_status) j["exit_status"] = *exit_status;
  return j;
}

EvaluationRecord EvaluationRecord::from_json(const nlohmann::json& j) {
  EvaluationRecord r;
  r.point_id = j.at("point_id").get<int>();
  r.physical_values = j.at("x").get<std::vector<double>>();
  r.ok = j.at("status").get<std::string>() == "ok";
  if (j.contains("outputs")) r.outputs = j.at("outputs").get<std::map<std::string, double>>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  if (j.contains("t_start_ms")) r.started_unix_ms = j.at("t_start_ms").get<std::int64_t>();
  if (j.contains("t_end_ms")) r.finished_unix_ms = j.at("t_end_ms").get<std::int64_t>();
  if (j.contains("exit_status")) r.exit_status = j.at("exit_status").get<int>();
  return r;
}

// ---------------------------------------------------------------------------
// Analytic models

std::string to_string(AnalyticModel::Kind kind) {
  switch (kind) {
    case AnalyticModel::Kind::linear: return "linear";
    case AnalyticModel::Kind::bilinear: return "bilinear";
    case AnalyticModel::Kind::product_exp: return "product_exp";
    case AnalyticModel::Kind::ishigami_like: return "ishigami_like";
  }
  throw InternalError("unknown analytic model kind");
}

AnalyticModel::Kind analytic_kind_from_string(const std::string& s) {
  if (s == "linear") return AnalyticModel::Kind::linear;
  if (s == "bilinear") return AnalyticModel::Kind::bilinear;
  if (s == "product_exp") return AnalyticModel::Kind::product_exp;
  if (s == "ishigami_like") return AnalyticModel::Kind::ishigami_like;
  throw ConfigError("unknown analytic model kind '" + s + "'");
}

void AnalyticModel::validate(int k) const {
  if (output.empty()) throw ConfigError("analytic model: output name must not be empty");
  switch (kind) {
    case Kind::linear:
    case Kind::product_exp:
      if (static_cast<int>(coeffs.size()) != k)
        throw ConfigError(to_string(kind) + " model: expected " + std::to_string(k) +
                          " coefficients, got " + std::to_string(coeffs.size()));
      break;
    case Kind::bilinear:
      if (idx_i < 0 || idx_j < 0 || idx_i >= k || idx_j >= k || idx_i == idx_j)
        throw ConfigError("bilinear model: coordinate pair out of range or equal");
      break;
    case Kind::ishigami_like:
      if (k < 3) throw ConfigError("ishigami_like model requires at least 3 parameters");
      break;
  }
}

double AnalyticModel::evaluate(std::span<const double> reduced) const {
  switch (kind) {
    case Kind::linear: {
      double y = offset;
      for (std::size_t i = 0; i < coeffs.size(); ++i) y += coeffs[i] * reduced[i];
      return y;
    }
    case Kind::bilinear:
      return coeff_c * reduced[idx_i] * reduced[idx_j];
    case Kind::product_exp: {
      double s = 0.0;
      for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * reduced[i];
      return std::exp(s);
    }
    case Kind::ishigami_like: {
      // Reduced coordinates mapped onto [-pi, pi].
      const double t0 = std::numbers::pi * (2.0 * reduced[0] - 1.0);
      const double t1 = std::numbers::pi * (2.0 * reduced[1] - 1.0);
      const double t2 = std::numbers::pi * (2.0 * reduced[2] - 1.0);
      return std::sin(t0) + ish_a * std::sin(t1) * std::sin(t1) +
             ish_b * t2 * t2 * t2 * t2 * std::sin(t0);
    }
  }
  throw InternalError("unknown analytic model kind");
}

AnalyticModel AnalyticModel::linear(std::vector<double> a, double b) {
  AnalyticModel m;
  m.kind = Kind::linear;
  m.coeffs = std::move(a);
  m.offset = b;
  return m;
}

AnalyticModel AnalyticModel::bilinear(double c, int i, int j) {
  AnalyticModel m;
  m.kind = Kind::bilinear;
  m.coeff_c = c;
  m.idx_i = i;
  m.idx_j = j;
  return m;
}

AnalyticModel AnalyticModel::product_exp(std::vector<double> a) {
  AnalyticModel m;
  m.kind = Kind::product_exp;
  m.coeffs = std::move(a);
  return m;
}

AnalyticModel AnalyticModel::ishigami_like(double a, double b) {
  AnalyticModel m;
  m.kind = Kind::ishigami_like;
  m.ish_a = a;
  m.ish_b = b;
  return m;
}

void ExternalModelSpec::validate() const {
  if (command.empty()) throw ConfigError("external model: command must not be empty");
  if (outputs.empty()) throw ConfigError("external model: at least one output name required");
  for (const auto& name : outputs)
    if (name.empty() || name.find_first_of(",\"\n\r") != std::string::npos)
      throw ConfigError("external model: invalid output name '" + name + "'");
  if (timeout_s <= 0) throw ConfigError("external model: timeout_s must be > 0");
  if (max_parallel < 1) throw ConfigError("external model: max_parallel must be >= 1");
}

std::vector<std::string> model_outputs(const Model& model) {
  if (const auto* analytic = std::get_if<AnalyticModel>(&model)) return {analytic->output};
  return std::get<ExternalModelSpec>(model).outputs;
}

// ---------------------------------------------------------------------------
// Ledger

LedgerMeta LedgerMeta::for_plan(const DesignPlan& plan) {
  LedgerMeta m;
  m.config_hash = plan.config_hash;
  m.rng = plan.rng_id;
  m.mode = to_string(plan.mode);
  m.replicates = plan.replicates;
  m.seed = plan.seed;
  m.plan_points = static_cast<long>(plan.point_index.size());
  return m;
}

namespace {

nlohmann::json meta_to_json(const LedgerMeta& m) {
  return {{"schema", "eekit-ledger/1"}, {"config_hash", m.config_hash}, {"rng", m.rng},
          {"mode", m.mode},             {"replicates", m.replicates},   {"seed", m.seed},
          {"plan_points", m.plan_points}};
}

LedgerMeta meta_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "eekit-ledger/1")
    throw LedgerError("ledger header: unknown or missing schema field");
  LedgerMeta m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.rng = j.at("rng").get<std::string>();
  m.mode = j.at("mode").get<std::string>();
  m.replicates = j.at("replicates").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.plan_points = j.at("plan_points").get<long>();
  return m;
}

bool meta_equal(const LedgerMeta& a, const LedgerMeta& b) {
  return a.config_hash == b.config_hash && a.rng == b.rng && a.mode == b.mode &&
         a.replicates == b.replicates && a.seed == b.seed && a.plan_points == b.plan_points;
}

}  // namespace

void Ledger::read_existing(const std::filesystem::path& path, const LedgerMeta* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read ledger: " + path.string());
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw LedgerError("ledger " + path.string() + " line " + std::to_string(line_no) + ": " +
                        e.what());
    }
    if (line_no == 1) {
      meta_ = meta_from_json(j);
      if (expected && !meta_equal(meta_, *expected))
        throw LedgerError("ledger " + path.string() +
                          " belongs to a different plan or config (header mismatch)");
      continue;
    }
    EvaluationRecord r = EvaluationRecord::from_json(j);
    records_[r.point_id] = std::move(r);
    ++run_count_;
  }
  if (line_no == 0) throw LedgerError("ledger " + path.string() + " is empty (missing header)");
}

Ledger Ledger::open(const std::filesystem::path& path, const LedgerMeta& meta) {
  Ledger ledger;
  ledger.path_ = path;
  if (std::filesystem::exists(path)) {
    ledger.read_existing(path, &meta);
    ledger.out_.open(path, std::ios::binary | std::ios::app);
    if (!ledger.out_) throw IoError("cannot append to ledger: " + path.string());
  } else {
    ledger.meta_ = meta;
    ledger.out_.open(path, std::ios::binary);
    if (!ledger.out_) throw IoError("cannot create ledger: " + path.string());
    ledger.out_ << meta_to_json(meta).dump() << '\n';
    ledger.out_.flush();
  }
  return ledger;
}

Ledger Ledger::load(const std::filesystem::path& path) {
  Ledger ledger;
  ledger.path_ = path;
  ledger.read_existing(path, nullptr);
  return ledger;
}

void Ledger::append(const EvaluationRecord& record) {
  if (!out_.is_open()) throw InternalError("ledger opened read-only");
  out_ << record.to_json().dump() << '\n';
  out_.flush();
  if (!out_) throw IoError("failed writing ledger: " + path_.string());
  records_[record.point_id] = record;
  ++run_count_;
}

const EvaluationRecord* Ledger::find(int point_id) const {
  auto it = records_.find(point_id);
  return it == records_.end() ? nullptr : &it->second;
}

bool Ledger::has_ok(int point_id) const {
  const auto* r = find(point_id);
  return r && r->ok;
}

// ---------------------------------------------------------------------------
// External process protocol

namespace {

std::int64_t unix_ms_now() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct ProcessResult {
  int exit_status = -1;
  bool timed_out = false;
};

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s) {
  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) throw IoError("fork failed");
  if (pid == 0) {
    execvp(cargv[0], cargv.data());
    _exit(127);
  }

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  ProcessResult result;
  int status = 0;
  for (;;) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) throw IoError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (WIFEXITED(status))
    result.exit_status = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_status = 128 + WTERMSIG(status);
  return result;
}

std::vector<std::string> substitute_command(const std::vector<std::string>& tmpl,
                                            const std::string& request,
                                            const std::string& response) {
  auto replace_all = [](std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
      s.replace(pos, from.size(), to);
    return s;
  };
  bool saw_placeholder = false;
  std::vector<std::string> argv;
  argv.reserve(tmpl.size() + 2);
  for (const auto& arg : tmpl) {
    if (arg.find("{request}") != std::string::npos || arg.find("{response}") != std::string::npos)
      saw_placeholder = true;
    argv.push_back(replace_all(replace_all(arg, "{request}", request), "{response}", response));
  }
  if (!saw_placeholder) {
    argv.push_back(request);
    argv.push_back(response);
  }
  return argv;
}

}  // namespace

std::vector<EvaluationRecord> run_external_batch(
    const std::vector<int>& point_ids, const std::vector<std::vector<double>>& physical_values,
    const std::vector<std::string>& parameter_names, const ExternalModelSpec& spec,
    const std::filesystem::path& scratch_dir, double timeout_s, const std::string& batch_tag) {
  spec.validate();
  if (point_ids.size() != physical_values.size())
    throw InternalError("run_external_batch: ids/values size mismatch");

  const auto request_path = scratch_dir / ("eekit-request-" + batch_tag + ".csv");
  const auto response_path = scratch_dir / ("eekit-response-" + batch_tag + ".csv");
  std::error_code ec;
  std::filesystem::remove(response_path, ec);  // stale responses must not satisfy this batch

  {
    std::ofstream req(request_path, std::ios::binary);
    if (!req) throw IoError("cannot write request file: " + request_path.string());
    std::vector<std::string> header{"point_id"};
    header.insert(header.end(), parameter_names.begin(), parameter_names.end());
    req << join_csv(header) << '\n';
    for (std::size_t row = 0; row < point_ids.size(); ++row) {
      std::vector<std::string> fields{std::to_string(point_ids[row])};
      for (double v : physical_values[row]) fields.push_back(format_double(v));
      req << join_csv(fields) << '\n';
    }
    if (!req.flush()) throw IoError("failed writing request file: " + request_path.string());
  }

  const auto argv = substitute_command(spec.command, request_path.string(), response_path.string());
  const std::int64_t t0 = unix_ms_now();
  const ProcessResult proc = run_process(argv, timeout_s);
  const std::int64_t t1 = unix_ms_now();

  auto base_record = [&](std::size_t row) {
    EvaluationRecord r;
    r.point_id = point_ids[row];
    r.physical_values = physical_values[row];
    r.started_unix_ms = t0;
    r.finished_unix_ms = t1;
    r.exit_status = proc.exit_status;
    return r;
  };

  std::vector<EvaluationRecord> records;
  records.reserve(point_ids.size());

  auto fail_all = [&](const std::string& why) {
    for (std::size_t row = 0; row < point_ids.size(); ++row) {
      EvaluationRecord r = base_record(row);
      r.ok = false;
      r.error = why;
      records.push_back(std::move(r));
    }
    return records;
  };

  // Exit status wins: a crashed simulator may leave a stale-looking file.
  if (proc.timed_out)
    return fail_all("command timed out after " + format_double(timeout_s) + " s");
  if (proc.exit_status != 0)
    return fail_all("command exited with status " + std::to_string(proc.exit_status));

  std::ifstream resp(response_path, std::ios::binary);
  if (!resp) return fail_all("command wrote no response file");

  std::vector<std::vector<std::string>> rows;
  {
    std::string line;
    while (std::getline(resp, line)) {
      if (line.empty() || line == "\r") continue;
      rows.push_back(split_csv_line(line));
    }
  }
  if (rows.empty()) return fail_all("response file is empty");

  std::vector<std::string> expected_header{"point_id"};
  expected_header.insert(expected_header.end(), spec.outputs.begin(), spec.outputs.end());
  if (rows.front() != expected_header)
    return fail_all("response header mismatch (expected '" + join_csv(expected_header) +
                    "', got '" + join_csv(rows.front()) + "')");

  std::set<int> requested(point_ids.begin(), point_ids.end());
  std::map<int, std::map<std::string, double>> parsed;
  std::map<int, std::string> row_errors;
  std::set<int> duplicated;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    int id = -1;
    try {
      id = static_cast<int>(parse_int(row.at(0)));
    } catch (const Error&) {
      continue;  // unparseable id: no record to attach it to
    }
    if (!requested.count(id)) continue;
    if (parsed.count(id) || duplicated.count(id)) {
      duplicated.insert(id);
      parsed.erase(id);
      continue;
    }
    if (row.size() != expected_header.size()) {
      row_errors[id] = "wrong number of fields in response row";
      continue;
    }
    std::map<std::string, double> outputs;
    try {
      for (std::size_t c = 1; c < row.size(); ++c) {
        const double v = parse_double(row[c]);
        if (!std::isfinite(v)) throw IoError("non-finite value");
        outputs[spec.outputs[c - 1]] = v;
      }
    } catch (const Error& e) {
      row_errors[id] = std::string("bad response row: ") + e.what();
      continue;
    }
    parsed[id] = std::move(outputs);
  }

  bool any_failed = false;
  for (std::size_t row = 0; row < point_ids.size(); ++row) {
    const int id = point_ids[row];
    EvaluationRecord r = base_record(row);
    if (auto it = parsed.find(id); it != parsed.end()) {
      r.ok = true;
      r.outputs = it->second;
    } else {
      r.ok = false;
      any_failed = true;
      if (duplicated.count(id))
        r.error = "duplicate rows for this point in response";
      else if (auto eit = row_errors.find(id); eit != row_errors.end())
        r.error = eit->second;
      else
        r.error = "missing from response";
    }
    records.push_back(std::move(r));
  }

  if (!any_failed) {
    std::filesystem::remove(request_path, ec);
    std::filesystem::remove(response_path, ec);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Plan evaluation

namespace {

std::vector<EvaluationRecord> evaluate_analytic(const DesignPlan& plan, const AnalyticModel& model,
                                                const std::vector<int>& pending, int jobs) {
  std::vector<EvaluationRecord> results(pending.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= pending.size()) return;
      const int id = pending[idx];
      const GridPoint& gp = plan.point_index[id];
      EvaluationRecord r;
      r.point_id = id;
      r.physical_values = plan.physical_of(gp);
      const double y = model.evaluate(plan.reduced_of(gp));
      if (std::isfinite(y)) {
        r.ok = true;
        r.outputs[model.output] = y;
      } else {
        r.ok = false;
        r.error = "model produced a non-finite value";
      }
      results[idx] = std::move(r);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return results;
}

}  // namespace

EvalStats evaluate_plan(const DesignPlan& plan, const Model& model, Ledger& ledger,
                        const EvalOptions& options) {
  EvalStats stats;
  std::vector<int> pending;
  for (int id = 0; id < static_cast<int>(plan.point_index.size()); ++id) {
    if (ledger.has_ok(id))
      ++stats.cached;
    else
      pending.push_back(id);
  }
  if (pending.empty()) return stats;

  if (const auto* analytic = std::get_if<AnalyticModel>(&model)) {
    analytic->validate(plan.k());
    // Chunked so long runs persist incrementally; records land in id order.
    constexpr std::size_t kChunk = 1024;
    for (std::size_t begin = 0; begin < pending.size(); begin += kChunk) {
      const std::size_t end = std::min(begin + kChunk, pending.size());
      std::vector<int> chunk(pending.begin() + begin, pending.begin() + end);
      auto records = evaluate_analytic(plan, *analytic, chunk, options.jobs);
      for (auto& r : records) {
        if (!r.ok) ++stats.failed;
        ledger.append(r);
        ++stats.invoked;
      }
    }
    return stats;
  }

  const auto& spec = std::get<ExternalModelSpec>(model);
  spec.validate();
  const double timeout = options.timeout_s > 0 ? options.timeout_s : spec.timeout_s;
  const int jobs = std::max(1, std::min({options.jobs, spec.max_parallel,
                                         static_cast<int>(pending.size())}));

  std::vector<std::string> parameter_names;
  for (const auto& p : plan.parameters) parameter_names.push_back(p.name);
  const auto scratch =
      ledger.path().has_parent_path() ? ledger.path().parent_path() : std::filesystem::path(".");

  // Contiguous chunks, one external invocation each, up to `jobs` in flight.
  std::vector<std::vector<int>> batches(jobs);
  for (std::size_t i = 0; i < pending.size(); ++i)
    batches[i * jobs / pending.size()].push_back(pending[i]);

  std::mutex ledger_mutex;
  std::vector<std::thread> threads;
  for (int b = 0; b < jobs; ++b) {
    threads.emplace_back([&, b]() {
      const auto& ids = batches[b];
      if (ids.empty()) return;
      std::vector<std::vector<double>> physical;
      physical.reserve(ids.size());
      for (int id : ids) physical.push_back(plan.physical_of(plan.point_index[id]));
      std::vector<EvaluationRecord> records;
      try {
        // Tagged per process and batch so concurrent runs sharing a
        // directory cannot clobber each other's request files.
        records = run_external_batch(ids, physical, parameter_names, spec, scratch, timeout,
                                     std::to_string(getpid()) + "-" + std::to_string(b));
      } catch (const Error& e) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
          EvaluationRecord r;
          r.point_id = ids[i];
          r.physical_values = physical[i];
          r.ok = false;
          r.error = e.what();
          records.push_back(std::move(r));
        }
      }
      std::lock_guard<std::mutex> lock(ledger_mutex);
      for (auto& r : records) {
        if (!r.ok) ++stats.failed;
        ledger.append(r);
        ++stats.invoked;
      }
    });
  }
  for (auto& t : threads) t.join();
  return stats;
}

}  // namespace eekit
