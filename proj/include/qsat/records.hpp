#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsat/cost_model.hpp"

namespace qsat {

struct BacktrackSummary {
  std::uint64_t tree_size = 0;
  std::uint64_t num_solutions = 0;
  std::optional<int> first_solution_depth;
  double wall_time_s = 0.0;
};

struct ClassicalResult {
  bool satisfiable = false;
  double wall_time_s = 0.0;
};

// One instance's full measurement row. queries keys: "detection",
// "detection_smooth", "search", "grover". gates keys: "<algorithm>.<metric>".
struct ExperimentRecord {
  int k = 0;
  double beta = 0.0;  // +inf for the uniform model
  int n = 0;
  int num_clauses = 0;
  std::uint64_t seed = 0;
  int index = 0;  // draw index within the (k, beta, n) group
  bool satisfiable = false;
  BacktrackSummary backtrack;
  std::optional<ClassicalResult> classical;
  double delta = 0.0;
  std::map<std::string, double> queries;
  std::map<std::string, double> gates;
  std::string timestamp;
};

std::string to_json_line(const ExperimentRecord& r);
ExperimentRecord record_from_json(const std::string& line);

std::vector<ExperimentRecord> read_jsonl(const std::string& path);
void append_jsonl(const std::string& path, const ExperimentRecord& r);

// Derived flat CSV view of a record set (header always present).
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

// Metric value of one record for a given algorithm, when defined:
// classical -> runtime_s only; quantum -> queries / tdepth / tcount, or
// runtime_s derived from tdepth via the measurement time.
std::optional<double> metric_value(const ExperimentRecord& r, Algorithm algorithm,
                                   Metric metric);

}  // namespace qsat
