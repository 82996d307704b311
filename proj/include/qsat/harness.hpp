#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsat/cnf.hpp"
#include "qsat/cost_model.hpp"
#include "qsat/records.hpp"

namespace qsat {

struct PlanCell {
  int k = 0;
  double beta = 0.0;  // +inf for the uniform model
  int n_min = 0;
  int n_max = 0;
  int samples_per_class = 1;
};

struct ExperimentPlan {
  std::vector<PlanCell> cells;
  double delta = 1e-3;
  std::uint64_t seed = 0;
  std::optional<std::string> solver_path;
  double solver_timeout_s = 600.0;
  std::uint64_t node_budget = 100'000'000;
  int retry_cap = 10'000;  // draws per class before declaring a cell stuck
  int jobs = 1;
  CostModelSpec cost;
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentPlan parse_plan(const std::string& json_text);
ExperimentPlan read_plan_file(const std::string& path);

// Default n ranges per (k, beta) for the backtracking pipeline and for an
// external solver baseline; nullopt when the pair was never measured.
struct NRange { int n_min = 0; int n_max = 0; };
std::optional<NRange> default_backtrack_range(int k, double beta);
std::optional<NRange> default_solver_range(int k, double beta);

class SolverMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SolverTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SolverFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes the formula to a temp DIMACS file, runs the solver on it and maps
// SAT-competition exit codes (10 = SAT, 20 = UNSAT) to a result.
ClassicalResult run_external_solver(const CnfFormula& f, const std::string& solver_path,
                                    double timeout_s);

struct RunOutcome {
  std::vector<ExperimentRecord> records;
  int skipped = 0;  // instances dropped on node-budget exhaustion
  std::vector<std::string> warnings;
};

// Runs the plan: per cell and n, draws fresh instances (seeds derived from
// (plan.seed, k, beta, n, draw index)) until samples_per_class satisfiable
// and unsatisfiable records exist, evaluating every bound for each kept
// instance. Deterministic up to timing fields regardless of --jobs.
RunOutcome run_experiment(const ExperimentPlan& plan);

// Builds the full measurement row for one already-classified instance.
ExperimentRecord evaluate_instance(const CnfFormula& f, int index, double delta,
                                   const CostModelSpec& cost,
                                   std::uint64_t node_budget);

enum class ReportFormat { csv, jsonl, svg, markdown };

// Lossless record dumps plus derived views; returns the paths written.
std::vector<std::string> emit_report(const std::vector<ExperimentRecord>& records,
                                     const std::string& out_dir,
                                     const std::vector<ReportFormat>& formats);

}  // namespace qsat
