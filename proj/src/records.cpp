#include "qsat/records.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qsat {

using nlohmann::json;

namespace {

json beta_to_json(double beta) {
  if (std::isinf(beta)) return "inf";
  return beta;
}

double beta_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad beta value: " + j.get<std::string>());
  }
  return j.get<double>();
}

}  // namespace

std::string to_json_line(const ExperimentRecord& r) {
  json j;
  j["k"] = r.k;
  j["beta"] = beta_to_json(r.beta);
  j["n"] = r.n;
  j["num_clauses"] = r.num_clauses;
  j["seed"] = r.seed;
  j["index"] = r.index;
  j["satisfiable"] = r.satisfiable;
  j["backtrack"] = {{"tree_size", r.backtrack.tree_size},
                    {"num_solutions", r.backtrack.num_solutions},
                    {"wall_time_s", r.backtrack.wall_time_s}};
  if (r.backtrack.first_solution_depth)
    j["backtrack"]["first_solution_depth"] = *r.backtrack.first_solution_depth;
  if (r.classical)
    j["classical"] = {{"satisfiable", r.classical->satisfiable},
                      {"wall_time_s", r.classical->wall_time_s}};
  j["delta"] = r.delta;
  j["queries"] = r.queries;
  j["gates"] = r.gates;
  j["timestamp"] = r.timestamp;
  return j.dump();
}

ExperimentRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  ExperimentRecord r;
  r.k = j.at("k").get<int>();
  r.beta = beta_from_json(j.at("beta"));
  r.n = j.at("n").get<int>();
  r.num_clauses = j.at("num_clauses").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.index = j.at("index").get<int>();
  r.satisfiable = j.at("satisfiable").get<bool>();
  const json& b = j.at("backtrack");
  r.backtrack.tree_size = b.at("tree_size").get<std::uint64_t>();
  r.backtrack.num_solutions = b.at("num_solutions").get<std::uint64_t>();
  r.backtrack.wall_time_s = b.value("wall_time_s", 0.0);
  if (b.contains("first_solution_depth"))
    r.backtrack.first_solution_depth = b["first_solution_depth"].get<int>();
  if (j.contains("classical")) {
    r.classical = ClassicalResult{j["classical"].at("satisfiable").get<bool>(),
                                  j["classical"].at("wall_time_s").get<double>()};
  }
  r.delta = j.at("delta").get<double>();
  if (j.contains("queries")) r.queries = j["queries"].get<std::map<std::string, double>>();
  if (j.contains("gates")) r.gates = j["gates"].get<std::map<std::string, double>>();
  r.timestamp = j.value("timestamp", "");
  return r;
}

std::vector<ExperimentRecord> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<ExperimentRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(record_from_json(line));
  }
  return records;
}

void append_jsonl(const std::string& path, const ExperimentRecord& r) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path + " for append");
  out << to_json_line(r) << "\n";
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "k,beta,n,num_clauses,seed,index,satisfiable,tree_size,num_solutions,"
         "first_solution_depth,backtrack_wall_time_s,classical_satisfiable,"
         "classical_wall_time_s,delta,queries_detection,queries_detection_smooth,"
         "queries_search,queries_grover,gates_detection_tdepth,"
         "gates_detection_tcount,gates_search_tdepth,gates_search_tcount,"
         "gates_grover_tdepth,gates_grover_tcount,timestamp\n";
  const auto field = [](const std::map<std::string, double>& m, const std::string& k)
      -> std::string {
    const auto it = m.find(k);
    if (it == m.end()) return "";
    std::ostringstream s;
    s.precision(17);
    s << it->second;
    return s.str();
  };
  for (const ExperimentRecord& r : records) {
    out << r.k << ',';
    if (std::isinf(r.beta)) out << "inf";
    else out << r.beta;
    out << ',' << r.n << ',' << r.num_clauses << ',' << r.seed << ',' << r.index
        << ',' << (r.satisfiable ? 1 : 0) << ',' << r.backtrack.tree_size << ','
        << r.backtrack.num_solutions << ',';
    if (r.backtrack.first_solution_depth) out << *r.backtrack.first_solution_depth;
    out << ',' << r.backtrack.wall_time_s << ',';
    if (r.classical) out << (r.classical->satisfiable ? 1 : 0);
    out << ',';
    if (r.classical) out << r.classical->wall_time_s;
    out << ',' << r.delta << ',' << field(r.queries, "detection") << ','
        << field(r.queries, "detection_smooth") << ',' << field(r.queries, "search")
        << ',' << field(r.queries, "grover") << ','
        << field(r.gates, "detection.tdepth") << ','
        << field(r.gates, "detection.tcount") << ','
        << field(r.gates, "search.tdepth") << ',' << field(r.gates, "search.tcount")
        << ',' << field(r.gates, "grover.tdepth") << ','
        << field(r.gates, "grover.tcount") << ',' << r.timestamp << '\n';
  }
  return out.str();
}

std::optional<double> metric_value(const ExperimentRecord& r, Algorithm algorithm,
                                   Metric metric) {
  if (algorithm == Algorithm::classical) {
    if (metric != Metric::runtime_s || !r.classical) return std::nullopt;
    return r.classical->wall_time_s;
  }
  const std::string name = to_string(algorithm);
  if (metric == Metric::queries) {
    const auto it = r.queries.find(name);
    if (it == r.queries.end()) return std::nullopt;
    return it->second;
  }
  if (metric == Metric::tdepth || metric == Metric::tcount) {
    const auto it = r.gates.find(name + "." + to_string(metric));
    if (it == r.gates.end()) return std::nullopt;
    return it->second;
  }
  return std::nullopt;  // quantum wall-clock is derived downstream, not stored
}

}  // namespace qsat
