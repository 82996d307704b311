#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qsat/cnf.hpp"

namespace qsat {

enum class Ternary : std::uint8_t { False = 0, True = 1, Unassigned = 2 };
enum class Truth : std::uint8_t { False = 0, True = 1, Indeterminate = 2 };

struct TernaryAssignment {
  std::vector<Ternary> values;  // index 0 = variable 1

  static TernaryAssignment all_unassigned(int n) {
    return {std::vector<Ternary>(n, Ternary::Unassigned)};
  }
};

// Order-sensitive partial-assignment predicate. Scans clauses in stored
// order; within a clause scans literals in stored order. The first
// unassigned literal of a not-yet-satisfied clause makes the whole
// predicate Indeterminate, even if a later literal in the same clause is
// satisfied. A clause whose literals are all assigned and unsatisfied
// yields False; if every clause reaches a satisfied literal first, True.
Truth evaluate_predicate(const CnfFormula& f, const TernaryAssignment& a);

// Static branching heuristic: variables sorted by occurrence count
// (negated or not, with multiplicity) descending, ties by ascending index.
// Returns 1-based variable indices.
std::vector<int> variable_order(const CnfFormula& f);

struct SolutionLeaf {
  int assigned = 0;    // variables set on the path to this True-leaf
  int unassigned = 0;  // free variables below it; it stands for 2^unassigned models
};

struct BacktrackStats {
  std::uint64_t tree_size = 0;
  std::uint64_t num_solutions = 0;
  std::optional<int> first_solution_depth;
  bool satisfiable = false;
  std::vector<SolutionLeaf> solution_leaves;
};

class NodeBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TreeCaptureOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExploreOptions {
  std::uint64_t node_budget = 100'000'000;
  bool capture_tree = false;             // materialize the tree (resistance)
  std::uint64_t capture_limit = 100'000;  // max nodes in capture mode
};

// Explicit backtracking tree in exploration (preorder) order; node 0 is the
// root with parent -1. Unit edge weights.
struct ExplicitTree {
  std::vector<std::int32_t> parent;
  std::vector<std::uint32_t> marked;  // True-leaves, exploration order
};

struct ExploreResult {
  BacktrackStats stats;
  ExplicitTree tree;  // populated only in capture mode
};

// Full depth-first exploration of the backtracking tree (does not stop at
// the first solution). At Indeterminate nodes, branches on the next
// variable of variable_order, false child first. tree_size counts every
// node including root and leaves; num_solutions sums 2^unassigned over
// True-leaves; first_solution_depth is the assigned-prefix length of the
// first True-leaf in exploration order.
BacktrackStats explore_tree(const CnfFormula& f, const ExploreOptions& opts = {});
ExploreResult explore_tree_capture(const CnfFormula& f, const ExploreOptions& opts = {});

class UndefinedResistance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Effective resistance from the root to the (merged) marked leaves of a
// unit-weight tree: prunes branches without marked descendants, contracts
// degree-2 chains into edges of resistance equal to their length, then
// solves the reduced Laplacian system exactly.
double effective_resistance_exact(const ExplicitTree& tree);

}  // namespace qsat
