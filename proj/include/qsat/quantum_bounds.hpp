#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace qsat {

class NoAmplificationPossible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Optimized configuration of the walk detection algorithm for a target
// error probability delta: walk-unitary constant C (> 1) and an odd number
// of majority-vote repetitions l. coefficient = l * sqrt(C * (1 + C^2)) is
// the leading factor of the query bound l*(M-1) = coefficient*sqrt(RW + 1/C) - l.
struct DetectionConfig {
  double delta = 0.0;
  double C = 0.0;
  int l = 0;
  double coefficient = 0.0;
};

// Error probability of a majority vote over l runs whose per-run success
// probability is C/(1+C):
//   (1+C)^{-l} * sum_{i=0}^{floor(l/2)} binom(l, i) C^i.
// Binomials are computed exactly in integer arithmetic before dividing.
long double majority_error(long double C, int l);

// Scans odd l = 1, 3, 5, ..., solving majority_error(C, l) = delta for C by
// bisection on [1, 1e6] (tolerance 1e-6), and minimizes l*sqrt(C(1+C^2)).
// Stops at the first increase of the objective. Requires 0 < delta < 1/2.
DetectionConfig optimize_detection_config(double delta);

struct DetectionQueries {
  double smooth = 0.0;        // l * (M - 1)
  std::uint64_t rounded = 0;  // l * (2^precision_bits - 1)
  int precision_bits = 0;     // ceil(log2 M), M = sqrt((1+C^2)(1+C*R*W))
};

DetectionQueries detection_queries(const DetectionConfig& config, double R_bound,
                                   double W);

// Smallest odd l' such that a majority vote over l' runs, each failing with
// probability delta, fails with probability at most 1 - (1-delta)^(1/n).
int search_amplification(double delta, int n);

// Query bound of the binary-search-with-doubling search algorithm:
//   l' * sum_{i=1}^{max(1, ceil(log2 T))} factor_i * l * (2^{m_i} - 1),
// with W = 2^i inside m_i, factor_i = n except in the final iteration,
// where it is d for satisfiable instances (first_solution_depth) and 1 for
// unsatisfiable ones.
double search_queries(double delta, int n, std::uint64_t tree_size, double R_bound,
                      std::optional<int> first_solution_depth);

struct GroverParams {
  double delta = 1e-3;
  std::uint64_t n_samples = 0;        // classical samples before Grover
  double oracle_query_factor = 1.0;   // queries to g per oracle call
  double alpha = 9.2;
};

// Expected-query bound for QSearch over N items with t marked. For t = 0
// the worst case n_samples + alpha*factor*ceil(log3(1/delta))*sqrt(N)
// applies; otherwise the classical-sampling term plus the bounded
// E_Grover(N, t) term.
double grover_expected_queries(const GroverParams& params, std::uint64_t N,
                               std::uint64_t t);

}  // namespace qsat
