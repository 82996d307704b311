#include "qsat/cost_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace qsat {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::runtime_s: return "runtime_s";
    case Metric::tdepth: return "tdepth";
    case Metric::tcount: return "tcount";
    case Metric::queries: return "queries";
  }
  return "?";
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::classical: return "classical";
    case Algorithm::detection: return "detection";
    case Algorithm::search: return "search";
    case Algorithm::grover: return "grover";
  }
  return "?";
}

Metric metric_from_string(const std::string& s) {
  if (s == "runtime_s" || s == "runtime") return Metric::runtime_s;
  if (s == "tdepth") return Metric::tdepth;
  if (s == "tcount") return Metric::tcount;
  if (s == "queries") return Metric::queries;
  throw std::invalid_argument("unknown metric: " + s);
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "classical") return Algorithm::classical;
  if (s == "detection") return Algorithm::detection;
  if (s == "search") return Algorithm::search;
  if (s == "grover") return Algorithm::grover;
  throw std::invalid_argument("unknown algorithm: " + s);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

CostPoly parse_poly(const std::string& value, const std::string& key) {
  const std::string v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw CostProfileError("expected [a0, a1, a2] for " + key);
  std::string inner = v.substr(1, v.size() - 2);
  for (char& c : inner)
    if (c == ',') c = ' ';
  std::istringstream in(inner);
  CostPoly p;
  if (!(in >> p.a0 >> p.a1 >> p.a2))
    throw CostProfileError("expected three coefficients for " + key);
  double extra;
  if (in >> extra) throw CostProfileError("too many coefficients for " + key);
  return p;
}

CostPoly* select_poly(CostModelSpec& spec, const std::string& metric,
                      const std::string& kind) {
  std::optional<OracleCosts>* costs = nullptr;
  if (metric == "tdepth") costs = &spec.tdepth;
  else if (metric == "tcount") costs = &spec.tcount;
  else return nullptr;
  if (!costs->has_value()) costs->emplace();
  if (kind == "P") return &(*costs)->P;
  if (kind == "h") return &(*costs)->h;
  if (kind == "diffusion") return &(*costs)->diffusion;
  return nullptr;
}

}  // namespace

CostModelSpec parse_cost_profile(const std::string& text) {
  CostModelSpec spec;
  spec.tdepth.reset();
  spec.tcount.reset();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CostProfileError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "measurement_time_s") {
      try {
        spec.measurement_time_s = std::stod(value);
      } catch (const std::exception&) {
        throw CostProfileError("bad measurement_time_s: " + value);
      }
      if (!(spec.measurement_time_s > 0))
        throw CostProfileError("measurement_time_s must be positive");
      continue;
    }
    if (key.rfind("costs.", 0) == 0) {
      const std::string rest = key.substr(6);
      const auto dot = rest.find('.');
      if (dot != std::string::npos) {
        CostPoly* poly = select_poly(spec, rest.substr(0, dot), rest.substr(dot + 1));
        if (poly) {
          *poly = parse_poly(value, key);
          continue;
        }
      }
    }
    throw CostProfileError("line " + std::to_string(lineno) + ": unknown key \"" +
                           key + "\"");
  }
  return spec;
}

CostModelSpec read_cost_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CostProfileError("cannot open cost profile: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cost_profile(ss.str());
}

namespace {

void append_costs(std::string& out, const char* metric, const OracleCosts& c) {
  char buf[160];
  const auto line = [&](const char* kind, const CostPoly& p) {
    std::snprintf(buf, sizeof(buf), "costs.%s.%s = [%.17g, %.17g, %.17g]\n",
                  metric, kind, p.a0, p.a1, p.a2);
    out += buf;
  };
  line("P", c.P);
  line("h", c.h);
  line("diffusion", c.diffusion);
}

}  // namespace

std::string write_cost_profile(const CostModelSpec& spec) {
  std::string out;
  if (spec.tdepth) append_costs(out, "tdepth", *spec.tdepth);
  if (spec.tcount) append_costs(out, "tcount", *spec.tcount);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "measurement_time_s = %.17g\n",
                spec.measurement_time_s);
  out += buf;
  return out;
}

CostModelSpec default_cost_profile() {
  // Placeholder per-query costs: linear in n, magnitudes chosen so the gate
  // fits sit a few hundred-fold (tdepth) and a few thousand-fold (tcount)
  // above the query fits, as circuit-level constructions typically do.
  // Edit freely; nothing downstream assumes these values.
  CostModelSpec spec;
  spec.tdepth = OracleCosts{{0.0, 14.0, 0.0}, {0.0, 14.0, 0.0}, {0.0, 4.0, 0.0}};
  spec.tcount = OracleCosts{{0.0, 400.0, 0.0}, {0.0, 400.0, 0.0}, {0.0, 100.0, 0.0}};
  spec.measurement_time_s = 1e-9;
  return spec;
}

double queries_to_gates(double queries, int n, int num_clauses,
                        const CostModelSpec& spec, Metric metric) {
  const std::optional<OracleCosts>* costs = nullptr;
  if (metric == Metric::tdepth) costs = &spec.tdepth;
  else if (metric == Metric::tcount) costs = &spec.tcount;
  else throw std::invalid_argument("queries_to_gates expects tdepth or tcount");
  if (!costs->has_value())
    throw MissingCosts("cost profile has no " + to_string(metric) + " coefficients");
  const OracleCosts& c = **costs;
  const double per_query = c.P.eval(n, num_clauses) + c.h.eval(n, num_clauses) +
                           c.diffusion.eval(n, num_clauses);
  return queries * per_query;
}

double runtime_seconds(double gates, double measurement_time_s) {
  return gates * measurement_time_s;
}

std::optional<Crossover> crossover_time(const ScalingFit& classical,
                                        const ScalingFit& quantum,
                                        double measurement_time_s) {
  const double sc = classical.slope, ic = classical.intercept;
  const double sq = quantum.slope, iq = quantum.intercept;
  if (sc <= sq) return std::nullopt;
  Crossover x;
  x.n_star = (std::log2(measurement_time_s) + iq - ic) / (sc - sq);
  x.time_s = std::pow(measurement_time_s, sq / (sc - sq) + 1.0) *
             std::exp2(sq * (iq - ic) / (sc - sq) + iq);
  return x;
}

double largest_in_one_day(const ScalingFit& fit,
                          std::optional<double> measurement_time_s) {
  if (!(fit.slope > 0))
    throw UnboundedCapacity("non-positive slope: one-day capacity is unbounded");
  const double c = measurement_time_s.value_or(1.0);
  return (std::log2(kSecondsPerDay / c) - fit.intercept) / fit.slope;
}

}  // namespace qsat
