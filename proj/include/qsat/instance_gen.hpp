#pragma once

#include <cstdint>
#include <stdexcept>

#include "qsat/cnf.hpp"

namespace qsat {

class UnsupportedK : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleClause : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Satisfiability-threshold ratio alpha_k = m/n for k in 3..12.
double threshold_ratio(int k);

// round-half-up of alpha_k * n.
int clauses_for_threshold(int n, int k);

// Uniform random k-SAT: each clause draws k distinct variables uniformly
// without replacement, each negated with probability 1/2. Clause j is drawn
// from its own substream derive(seed, {kClauseStream, j}), so generation is
// reproducible clause by clause.
CnfFormula sample_uniform_ksat(int n, int k, int num_clauses, std::uint64_t seed);

// Similarity-popularity model: every variable and clause gets an independent
// uniform angle in [0, 2pi); clause j includes variable i with weight
//   p_i = 1 / (1 + (i * d(theta_i, theta_j) / R)^(1/beta)),
// where d is circular distance. The normalization R is solved per clause so
// that sum_i p_i = k, then exactly k distinct variables are drawn by
// sequential weighted sampling without replacement. beta = infinity
// delegates to sample_uniform_ksat.
CnfFormula sample_powerlaw_ksat(int n, int k, int num_clauses, double beta,
                                std::uint64_t seed);

// The inclusion weight above, exposed so its monotonicity in the variable
// index can be asserted directly.
double powerlaw_weight(int index, double dist, double beta, double normalization);

// Solves sum_i 1/(1 + (i * dist[i] / R)^(1/beta)) = k for R to |sum - k| <= 1e-9.
// dist is 0-based over variables 1..n.
double solve_normalization(const std::vector<double>& dist, double beta, int k);

}  // namespace qsat
