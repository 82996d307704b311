#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsat/backtracker.hpp"
#include "qsat/cnf.hpp"

namespace qsat::oracles {

class OracleLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive model count over all 2^n complete assignments; n <= 24.
std::uint64_t brute_force_count(const CnfFormula& f);

struct BruteTree {
  std::uint64_t tree_size = 0;
  std::optional<int> first_solution_depth;
};

// Minimal independent re-derivation of the backtracking tree statistics
// from the predicate and heuristic definitions; shares no code with the
// backtracker module. n <= 20, node cap 1e7.
BruteTree brute_force_tree(const CnfFormula& f);

// Effective resistance via the dense Laplacian pseudo-inverse with all
// marked leaves merged into one super-node; no pruning or contraction.
// At most 500 nodes.
double resistance_dense(const ExplicitTree& tree);

// Expected index of the first marked item when t of N items are marked
// uniformly at random: (N+1)/(t+1).
double expected_first_marked(int N, int t);

// Exact integer check of the closed form against the full binomial sum
// sum_i i*binom(N-i, t-1) == (N+1)/(t+1) * binom(N, t); N <= 30.
bool expected_first_marked_matches_sum(int N, int t);

// Monte-Carlo mean of the first marked index over `trials` draws.
double expected_first_marked_monte_carlo(int N, int t, int trials,
                                         std::uint64_t seed);

struct Mismatch {
  std::string input_digest;
  std::string expected;
  std::string got;
};

struct OracleReport {
  std::string subject;
  int cases = 0;
  std::vector<Mismatch> mismatches;

  bool passed() const { return mismatches.empty(); }
};

// Randomized cross-checks of the main modules against the oracles above,
// used by tests and the `verify` subcommand.
OracleReport verify_backtracker(std::uint64_t seed, int instances);
OracleReport verify_resistance(std::uint64_t seed, int trees);
OracleReport verify_bounds(std::uint64_t seed, int cases);
OracleReport verify_grover(std::uint64_t seed, int cases);

}  // namespace qsat::oracles
