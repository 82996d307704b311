#include "qsat/harness.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qsat/backtracker.hpp"
#include "qsat/dimacs.hpp"
#include "qsat/fitting.hpp"
#include "qsat/instance_gen.hpp"
#include "qsat/quantum_bounds.hpp"
#include "qsat/rng.hpp"

namespace qsat {

using nlohmann::json;

namespace {

double beta_from_plan_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw PlanError("bad beta: " + s);
  }
  if (!j.is_number()) throw PlanError("beta must be a number or \"inf\"");
  return j.get<double>();
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ExperimentPlan parse_plan(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw PlanError(std::string("plan is not valid JSON: ") + e.what());
  }
  ExperimentPlan plan;
  if (!j.contains("cells") || !j["cells"].is_array() || j["cells"].empty())
    throw PlanError("plan needs a non-empty \"cells\" array");
  for (const json& c : j["cells"]) {
    PlanCell cell;
    cell.k = c.at("k").get<int>();
    cell.beta = beta_from_plan_json(c.at("beta"));
    if (c.contains("n_min")) cell.n_min = c["n_min"].get<int>();
    if (c.contains("n_max")) cell.n_max = c["n_max"].get<int>();
    if (cell.n_min == 0 && cell.n_max == 0) {
      const auto range = default_backtrack_range(cell.k, cell.beta);
      if (!range)
        throw PlanError("no default n range for k=" + std::to_string(cell.k) +
                        "; give n_min/n_max explicitly");
      cell.n_min = range->n_min;
      cell.n_max = range->n_max;
    }
    cell.samples_per_class = c.value("samples_per_class", 1);
    if (cell.samples_per_class < 1) throw PlanError("samples_per_class must be >= 1");
    if (cell.n_min < 1 || cell.n_max < cell.n_min) throw PlanError("bad n range");
    plan.cells.push_back(cell);
  }
  plan.delta = j.value("delta", 1e-3);
  plan.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("solver") && !j["solver"].is_null())
    plan.solver_path = j["solver"].get<std::string>();
  plan.solver_timeout_s = j.value("timeout_s", 600.0);
  plan.node_budget = j.value("node_budget", std::uint64_t{100'000'000});
  plan.retry_cap = j.value("retry_cap", 10'000);
  plan.jobs = j.value("jobs", 1);
  if (j.contains("cost_profile") && !j["cost_profile"].is_null())
    plan.cost = read_cost_profile_file(j["cost_profile"].get<std::string>());
  else
    plan.cost = default_cost_profile();
  return plan;
}

ExperimentPlan read_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlanError("cannot open plan file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str());
}

namespace {

struct RangeRow {
  int k;
  // n ranges per beta column {1/2, 1, 3/2, 2, 3, 5, 10, inf}; {0,0} = absent.
  NRange cols[8];
};

constexpr double kBetaColumns[8] = {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0,
                                    std::numeric_limits<double>::infinity()};

// Measured n ranges per (k, beta): backtracking pipeline.
constexpr RangeRow kBacktrackRanges[] = {
    {3, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {10, 56}, {10, 55}, {10, 49}}},
    {4, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {10, 45}, {10, 42}, {10, 41}, {10, 40}}},
    {5, {{0, 0}, {0, 0}, {0, 0}, {10, 45}, {10, 40}, {10, 41}, {10, 39}, {10, 34}}},
    {6, {{0, 0}, {0, 0}, {10, 42}, {10, 42}, {10, 36}, {10, 35}, {10, 34}, {10, 28}}},
    {7, {{10, 47}, {10, 40}, {10, 35}, {10, 35}, {10, 31}, {10, 29}, {10, 29}, {10, 28}}},
    {8, {{11, 40}, {11, 38}, {11, 33}, {11, 30}, {11, 29}, {11, 25}, {11, 26}, {10, 25}}},
    {9, {{12, 27}, {12, 24}, {12, 21}, {12, 21}, {12, 21}, {12, 21}, {12, 21}, {11, 24}}},
    {10, {{13, 31}, {13, 27}, {13, 24}, {13, 23}, {13, 22}, {13, 21}, {13, 21}, {12, 22}}},
    {11, {{14, 21}, {14, 20}, {14, 20}, {14, 20}, {14, 19}, {14, 19}, {14, 19}, {13, 20}}},
    {12, {{15, 19}, {15, 18}, {15, 18}, {15, 18}, {15, 18}, {15, 17}, {15, 17}, {14, 19}}},
};

// Measured n ranges per (k, beta): external solver baseline.
constexpr RangeRow kSolverRanges[] = {
    {3, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {160, 279}, {160, 262}, {160, 250}}},
    {4, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {64, 130}, {64, 113}, {64, 103}, {64, 94}}},
    {5, {{0, 0}, {0, 0}, {0, 0}, {47, 119}, {47, 99}, {47, 86}, {47, 78}, {47, 71}}},
    {6, {{0, 0}, {0, 0}, {30, 91}, {30, 85}, {30, 71}, {30, 46}, {30, 60}, {30, 54}}},
    {7, {{25, 77}, {25, 105}, {25, 83}, {25, 71}, {25, 60}, {25, 53}, {25, 49}, {25, 44}}},
    {8, {{20, 84}, {20, 80}, {20, 63}, {20, 61}, {20, 52}, {20, 47}, {20, 40}, {20, 40}}},
    {9, {{15, 75}, {15, 66}, {15, 54}, {15, 45}, {15, 39}, {15, 36}, {15, 33}, {15, 37}}},
    {10, {{15, 102}, {15, 73}, {15, 54}, {15, 47}, {15, 42}, {15, 38}, {15, 36}, {15, 33}}},
    {11, {{14, 67}, {14, 50}, {14, 40}, {14, 37}, {14, 34}, {14, 33}, {14, 32}, {14, 32}}},
    {12, {{15, 56}, {15, 41}, {15, 35}, {15, 33}, {15, 28}, {15, 29}, {15, 28}, {15, 30}}},
};

std::optional<NRange> lookup_range(const RangeRow* rows, int count, int k, double beta) {
  int col = -1;
  for (int i = 0; i < 8; ++i) {
    if (std::isinf(beta) ? std::isinf(kBetaColumns[i]) : beta == kBetaColumns[i]) {
      col = i;
      break;
    }
  }
  if (col < 0) return std::nullopt;
  for (int i = 0; i < count; ++i) {
    if (rows[i].k == k) {
      const NRange r = rows[i].cols[col];
      if (r.n_min == 0) return std::nullopt;
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<NRange> default_backtrack_range(int k, double beta) {
  return lookup_range(kBacktrackRanges, std::size(kBacktrackRanges), k, beta);
}

std::optional<NRange> default_solver_range(int k, double beta) {
  return lookup_range(kSolverRanges, std::size(kSolverRanges), k, beta);
}

ClassicalResult run_external_solver(const CnfFormula& f, const std::string& solver_path,
                                    double timeout_s) {
  if (access(solver_path.c_str(), X_OK) != 0)
    throw SolverMissing("solver not executable: " + solver_path);

  char tmpl[] = "/tmp/qsat-XXXXXX.cnf";
  const int fd = mkstemps(tmpl, 4);
  if (fd < 0) throw SolverFailed("cannot create temp file");
  const std::string dimacs = write_dimacs(f);
  const bool wrote =
      write(fd, dimacs.data(), dimacs.size()) == static_cast<ssize_t>(dimacs.size());
  close(fd);
  const std::string tmp_path = tmpl;
  if (!wrote) {
    unlink(tmp_path.c_str());
    throw SolverFailed("short write to temp file");
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    unlink(tmp_path.c_str());
    throw SolverFailed("fork failed");
  }
  if (pid == 0) {
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      dup2(devnull, STDOUT_FILENO);
      dup2(devnull, STDERR_FILENO);
    }
    execl(solver_path.c_str(), solver_path.c_str(), tmp_path.c_str(),
          static_cast<char*>(nullptr));
    _exit(127);
  }

  int status = 0;
  const auto deadline = start + std::chrono::duration<double>(timeout_s);
  for (;;) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) {
      unlink(tmp_path.c_str());
      throw SolverFailed("waitpid failed");
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      unlink(tmp_path.c_str());
      throw SolverTimeout("solver exceeded " + std::to_string(timeout_s) + " s");
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  unlink(tmp_path.c_str());

  if (!WIFEXITED(status)) throw SolverFailed("solver killed by signal");
  const int code = WEXITSTATUS(status);
  if (code == 10) return {true, elapsed};
  if (code == 20) return {false, elapsed};
  if (code == 127) throw SolverMissing("solver could not be executed: " + solver_path);
  throw SolverFailed("unexpected solver exit code " + std::to_string(code));
}

ExperimentRecord evaluate_instance(const CnfFormula& f, int index, double delta,
                                   const CostModelSpec& cost,
                                   std::uint64_t node_budget) {
  ExperimentRecord rec;
  rec.k = f.meta.k;
  rec.beta = f.meta.beta;
  rec.n = f.num_vars;
  rec.num_clauses = f.num_clauses();
  rec.seed = f.meta.seed;
  rec.index = index;
  rec.delta = delta;

  ExploreOptions opts;
  opts.node_budget = node_budget;
  const auto start = std::chrono::steady_clock::now();
  const BacktrackStats stats = explore_tree(f, opts);
  rec.backtrack.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.backtrack.tree_size = stats.tree_size;
  rec.backtrack.num_solutions = stats.num_solutions;
  rec.backtrack.first_solution_depth = stats.first_solution_depth;
  rec.satisfiable = stats.satisfiable;

  const int n = f.num_vars;
  const double R = n;  // R <= n bound; exact resistance is opt-in elsewhere
  const DetectionConfig config = optimize_detection_config(delta);
  const DetectionQueries det =
      detection_queries(config, R, static_cast<double>(stats.tree_size));
  rec.queries["detection"] = static_cast<double>(det.rounded);
  rec.queries["detection_smooth"] = det.smooth;
  rec.queries["search"] =
      search_queries(delta, n, stats.tree_size, R, stats.first_solution_depth);
  GroverParams grover;
  grover.delta = delta;
  rec.queries["grover"] = grover_expected_queries(grover, std::uint64_t{1} << n,
                                                  stats.num_solutions);

  for (const Metric metric : {Metric::tdepth, Metric::tcount}) {
    const std::optional<OracleCosts>& costs =
        metric == Metric::tdepth ? cost.tdepth : cost.tcount;
    if (!costs) continue;
    for (const char* algo : {"detection", "search", "grover"}) {
      rec.gates[std::string(algo) + "." + to_string(metric)] = queries_to_gates(
          rec.queries.at(algo), n, rec.num_clauses, cost, metric);
    }
  }
  rec.timestamp = iso_timestamp();
  return rec;
}

namespace {

struct DrawResult {
  int index = 0;
  bool skipped = false;  // node budget exhausted
  ExperimentRecord record;
};

std::uint64_t instance_seed(const ExperimentPlan& plan, const PlanCell& cell, int n,
                            int draw) {
  std::uint64_t beta_bits;
  const double beta = std::isinf(cell.beta)
                          ? std::numeric_limits<double>::infinity()
                          : cell.beta;
  static_assert(sizeof(beta_bits) == sizeof(beta));
  std::memcpy(&beta_bits, &beta, sizeof(beta_bits));
  return rng::derive(plan.seed,
                     {rng::kInstanceStream, static_cast<std::uint64_t>(cell.k),
                      beta_bits, static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(draw)});
}

}  // namespace

RunOutcome run_experiment(const ExperimentPlan& plan) {
  RunOutcome outcome;
  const int jobs = std::max(plan.jobs, 1);

  for (const PlanCell& cell : plan.cells) {
    for (int n = cell.n_min; n <= cell.n_max; ++n) {
      const int m = clauses_for_threshold(n, cell.k);
      int sat_kept = 0, unsat_kept = 0;
      int next_draw = 0;

      while (sat_kept < cell.samples_per_class ||
             unsat_kept < cell.samples_per_class) {
        if (next_draw >= plan.retry_cap)
          throw PlanError("cell k=" + std::to_string(cell.k) + " n=" +
                          std::to_string(n) + ": class quota unfilled after " +
                          std::to_string(next_draw) + " draws (sat=" +
                          std::to_string(sat_kept) + ", unsat=" +
                          std::to_string(unsat_kept) + ")");
        const int missing =
            (cell.samples_per_class - sat_kept) + (cell.samples_per_class - unsat_kept);
        const int chunk =
            std::min(std::max(missing, jobs), plan.retry_cap - next_draw);

        // Evaluate a chunk of draw indices in parallel, then commit the
        // results in draw order so the kept set is schedule-independent.
        std::vector<DrawResult> results(chunk);
        std::atomic<int> cursor{0};
        const auto worker = [&] {
          for (;;) {
            const int i = cursor.fetch_add(1);
            if (i >= chunk) return;
            const int draw = next_draw + i;
            DrawResult& out = results[i];
            out.index = draw;
            const std::uint64_t seed = instance_seed(plan, cell, n, draw);
            const CnfFormula f =
                sample_powerlaw_ksat(n, cell.k, m, cell.beta, seed);
            try {
              out.record =
                  evaluate_instance(f, draw, plan.delta, plan.cost, plan.node_budget);
            } catch (const NodeBudgetExceeded&) {
              out.skipped = true;
            }
          }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < std::min(jobs, chunk); ++t) pool.emplace_back(worker);
        worker();
        for (std::thread& t : pool) t.join();

        for (DrawResult& r : results) {
          if (sat_kept >= cell.samples_per_class &&
              unsat_kept >= cell.samples_per_class)
            break;
          if (r.skipped) {
            ++outcome.skipped;
            outcome.warnings.push_back(
                "node budget exhausted: k=" + std::to_string(cell.k) +
                " n=" + std::to_string(n) + " draw=" + std::to_string(r.index));
            continue;
          }
          int& kept = r.record.satisfiable ? sat_kept : unsat_kept;
          if (kept >= cell.samples_per_class) continue;
          ++kept;
          if (plan.solver_path) {
            const std::uint64_t seed = instance_seed(plan, cell, n, r.index);
            const CnfFormula f =
                sample_powerlaw_ksat(n, cell.k, m, cell.beta, seed);
            try {
              r.record.classical =
                  run_external_solver(f, *plan.solver_path, plan.solver_timeout_s);
              if (r.record.classical->satisfiable != r.record.satisfiable)
                outcome.warnings.push_back(
                    "solver disagrees with backtracker on k=" +
                    std::to_string(cell.k) + " n=" + std::to_string(n) +
                    " draw=" + std::to_string(r.index));
            } catch (const SolverTimeout&) {
              outcome.warnings.push_back("solver timeout on draw " +
                                         std::to_string(r.index));
            }
          }
          outcome.records.push_back(std::move(r.record));
        }
        next_draw += chunk;
      }
    }
  }
  return outcome;
}

namespace {

std::string records_to_markdown(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "# Experiment summary\n\n";
  out << records.size() << " records.\n\n";
  std::set<std::pair<int, double>> cells;
  for (const ExperimentRecord& r : records) cells.insert({r.k, r.beta});
  for (const Filter filter : {Filter::mixed, Filter::sat, Filter::unsat}) {
    out << "## Fits (" << to_string(filter) << ")\n\n";
    out << "| k | beta | algorithm | metric | fit |\n";
    out << "|---|------|-----------|--------|-----|\n";
    for (const auto& [k, beta] : cells) {
      std::vector<ExperimentRecord> cell_records;
      for (const ExperimentRecord& r : records)
        if (r.k == k && (r.beta == beta || (std::isinf(r.beta) && std::isinf(beta))))
          cell_records.push_back(r);
      const std::pair<Algorithm, Metric> combos[] = {
          {Algorithm::classical, Metric::runtime_s},
          {Algorithm::detection, Metric::queries},
          {Algorithm::search, Metric::queries},
          {Algorithm::grover, Metric::queries},
          {Algorithm::detection, Metric::tdepth},
          {Algorithm::search, Metric::tdepth},
          {Algorithm::grover, Metric::tdepth},
          {Algorithm::detection, Metric::tcount},
          {Algorithm::search, Metric::tcount},
          {Algorithm::grover, Metric::tcount},
      };
      for (const auto& [algo, metric] : combos) {
        try {
          const ScalingFit fit =
              fit_log2_linear(median_by_size(cell_records, algo, metric, filter));
          std::ostringstream cellbeta;
          if (std::isinf(beta)) cellbeta << "inf";
          else cellbeta << beta;
          out << "| " << k << " | " << cellbeta.str() << " | " << to_string(algo)
              << " | " << to_string(metric) << " | ";
          out.precision(3);
          out << fit.slope << "n " << (fit.intercept < 0 ? "- " : "+ ")
              << std::abs(fit.intercept) << " |\n";
        } catch (const std::exception&) {
          // combo not measurable for this record set; skip the row
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::vector<std::string> emit_report(const std::vector<ExperimentRecord>& records,
                                     const std::string& out_dir,
                                     const std::vector<ReportFormat>& formats) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  for (const ReportFormat format : formats) {
    if (format == ReportFormat::jsonl) {
      const std::string path = (fs::path(out_dir) / "records.jsonl").string();
      std::ofstream out(path);
      for (const ExperimentRecord& r : records) out << to_json_line(r) << "\n";
      written.push_back(path);
    } else if (format == ReportFormat::csv) {
      const std::string path = (fs::path(out_dir) / "records.csv").string();
      std::ofstream out(path);
      out << records_to_csv(records);
      written.push_back(path);
    } else if (format == ReportFormat::markdown) {
      const std::string path = (fs::path(out_dir) / "summary.md").string();
      std::ofstream out(path);
      out << records_to_markdown(records);
      written.push_back(path);
    }
    // svg applies to grid reports; see emit_report(GridReport) overload
  }
  return written;
}

}  // namespace qsat
