#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qsat {

enum class Metric { runtime_s, tdepth, tcount, queries };
enum class Algorithm { classical, detection, search, grover };

std::string to_string(Metric m);
std::string to_string(Algorithm a);
Metric metric_from_string(const std::string& s);
Algorithm algorithm_from_string(const std::string& s);

// Slope/intercept of a log2-linear fit 2^(slope*n + intercept), tagged by
// what was fitted.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  Metric metric = Metric::queries;
  Algorithm algorithm = Algorithm::classical;
};

// Per-query gate cost as a polynomial a0 + a1*n + a2*num_clauses.
struct CostPoly {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double eval(double n, double num_clauses) const {
    return a0 + a1 * n + a2 * num_clauses;
  }
};

struct OracleCosts {
  CostPoly P, h, diffusion;
};

class MissingCosts : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CostProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-query gate costs are configuration data, not code: the mapping from
// queries to gates comes from externally-sourced circuit constructions, so
// it is supplied as a profile. Text format, one entry per line:
//   costs.tdepth.P = [a0, a1, a2]
//   costs.tdepth.h = [a0, a1, a2]
//   costs.tdepth.diffusion = [a0, a1, a2]
//   costs.tcount.P = [...]            (and .h / .diffusion)
//   measurement_time_s = 1e-9
// '#' starts a comment.
struct CostModelSpec {
  std::optional<OracleCosts> tdepth;
  std::optional<OracleCosts> tcount;
  double measurement_time_s = 1e-9;
};

CostModelSpec parse_cost_profile(const std::string& text);
CostModelSpec read_cost_profile_file(const std::string& path);
std::string write_cost_profile(const CostModelSpec& spec);

// Shipped placeholder profile; every coefficient is user-editable.
CostModelSpec default_cost_profile();

// queries * (per-query polynomial for the metric, summed over the P, h and
// diffusion oracles). metric must be tdepth or tcount.
double queries_to_gates(double queries, int n, int num_clauses,
                        const CostModelSpec& spec, Metric metric);

double runtime_seconds(double gates, double measurement_time_s);

struct Crossover {
  double n_star = 0.0;   // instance size where the cost curves intersect
  double time_s = 0.0;   // runtime at the intersection
};

// Closed-form crossover of classical runtime 2^(sc*n+ic) against quantum
// runtime cq * 2^(sq*n+iq). Empty when sc <= sq (no crossover).
std::optional<Crossover> crossover_time(const ScalingFit& classical,
                                        const ScalingFit& quantum,
                                        double measurement_time_s);

class UnboundedCapacity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest real-valued n with c * 2^(slope*n + intercept) = 86400 s, where
// c is the measurement time for gate metrics and 1 for classical runtime.
// Throws UnboundedCapacity when slope <= 0.
double largest_in_one_day(const ScalingFit& fit,
                          std::optional<double> measurement_time_s);

inline constexpr double kSecondsPerDay = 86400.0;

}  // namespace qsat
