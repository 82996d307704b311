#include "qsat/backtracker.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

namespace qsat {

Truth evaluate_predicate(const CnfFormula& f, const TernaryAssignment& a) {
  bool indeterminate = false;
  for (const Clause& c : f.clauses) {
    // First literal that is not assigned-unsatisfied decides the clause.
    bool decided = false;
    for (Lit lit : c) {
      const Ternary val = a.values[std::abs(lit) - 1];
      if (val == Ternary::Unassigned) {
        indeterminate = true;  // later literals of this clause are not consulted
        decided = true;
        break;
      }
      if ((lit > 0) == (val == Ternary::True)) {
        decided = true;  // clause satisfied
        break;
      }
    }
    if (!decided) return Truth::False;  // every literal assigned and unsatisfied
  }
  return indeterminate ? Truth::Indeterminate : Truth::True;
}

std::vector<int> variable_order(const CnfFormula& f) {
  std::vector<std::uint64_t> count(f.num_vars, 0);
  for (const Clause& c : f.clauses)
    for (Lit lit : c) ++count[std::abs(lit) - 1];
  std::vector<int> order(f.num_vars);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (count[a - 1] != count[b - 1]) return count[a - 1] > count[b - 1];
    return a < b;
  });
  return order;
}

namespace {

// DFS engine with incremental clause state. Each clause keeps a head: the
// position of its first literal that is not assigned-unsatisfied. The head
// literal being satisfied means the clause is satisfied; unassigned means
// indeterminate; head past the end means falsified. Heads only move on the
// assignment of exactly their variable, so per-variable lists of clauses
// currently headed there make one DFS edge cost proportional to the actual
// scan movement, with an event trail to restore state on backtrack.
class Explorer {
 public:
  Explorer(const CnfFormula& f, const ExploreOptions& opts, bool capture)
      : opts_(opts), capture_(capture), num_vars_(f.num_vars),
        num_clauses_(static_cast<std::uint32_t>(f.clauses.size())) {
    if (f.num_vars > 62)
      throw std::invalid_argument("explore_tree supports at most 62 variables");
    offsets_.reserve(f.clauses.size() + 1);
    offsets_.push_back(0);
    for (const Clause& c : f.clauses) {
      for (Lit lit : c) {
        const int v = std::abs(lit);
        if (v < 1 || v > f.num_vars)
          throw FormulaError("literal out of range");
        lits_.push_back(lit);
      }
      offsets_.push_back(static_cast<std::uint32_t>(lits_.size()));
    }
    values_.assign(f.num_vars + 1, Ternary::Unassigned);
    heads_.assign(num_clauses_, 0);
    watch_.assign(f.num_vars + 1, {});
    for (std::uint32_t c = 0; c < num_clauses_; ++c) {
      if (offsets_[c] == offsets_[c + 1])
        ++falsified_;  // empty clause can never be satisfied
      else
        watch_[std::abs(lits_[offsets_[c]])].push_back(c);
    }
    order_ = variable_order(f);
  }

  ExploreResult run() {
    ExploreResult out;
    dfs(0, -1);
    out.stats = std::move(stats_);
    out.stats.satisfiable = out.stats.num_solutions > 0;
    if (capture_) {
      out.tree.parent = std::move(parents_);
      out.tree.marked = std::move(marked_);
    }
    return out;
  }

 private:
  struct Event {
    std::uint32_t clause;
    std::uint32_t old_head;
    std::uint8_t pushed_watch;
    std::uint8_t became_sat;
    std::uint8_t became_falsified;
  };

  bool satisfies(Lit lit, Ternary val) const {
    return (lit > 0) == (val == Ternary::True);
  }

  std::size_t assign(int var, Ternary value) {
    values_[var] = value;
    const std::size_t marker = trail_.size();
    auto& watchers = watch_[var];
    const std::size_t fixed = watchers.size();  // entries appended below stay parked
    for (std::size_t i = 0; i < fixed; ++i) {
      const std::uint32_t c = watchers[i];
      const std::uint32_t old_head = heads_[c];
      const Lit head_lit = lits_[offsets_[c] + old_head];
      Event ev{c, old_head, 0, 0, 0};
      if (satisfies(head_lit, value)) {
        ev.became_sat = 1;
        ++sat_;
      } else {
        // Advance past assigned-unsatisfied literals.
        const std::uint32_t size = offsets_[c + 1] - offsets_[c];
        std::uint32_t pos = old_head + 1;
        while (pos < size) {
          const Lit lit = lits_[offsets_[c] + pos];
          const Ternary v = values_[std::abs(lit)];
          if (v != Ternary::Unassigned && !satisfies(lit, v)) { ++pos; continue; }
          break;
        }
        heads_[c] = pos;
        if (pos == size) {
          ev.became_falsified = 1;
          ++falsified_;
        } else {
          const Lit lit = lits_[offsets_[c] + pos];
          watch_[std::abs(lit)].push_back(c);
          ev.pushed_watch = 1;
          const Ternary v = values_[std::abs(lit)];
          if (v != Ternary::Unassigned && satisfies(lit, v)) {
            ev.became_sat = 1;
            ++sat_;
          }
        }
      }
      trail_.push_back(ev);
    }
    return marker;
  }

  void undo(int var, std::size_t marker) {
    while (trail_.size() > marker) {
      const Event ev = trail_.back();
      trail_.pop_back();
      if (ev.pushed_watch) {
        const Lit lit = lits_[offsets_[ev.clause] + heads_[ev.clause]];
        watch_[std::abs(lit)].pop_back();
      }
      heads_[ev.clause] = ev.old_head;
      sat_ -= ev.became_sat;
      falsified_ -= ev.became_falsified;
    }
    values_[var] = Ternary::Unassigned;
  }

  void dfs(int depth, std::int32_t parent) {
    if (++stats_.tree_size > opts_.node_budget)
      throw NodeBudgetExceeded("backtracking tree exceeded node budget of " +
                               std::to_string(opts_.node_budget));
    std::int32_t self = -1;
    if (capture_) {
      if (parents_.size() >= opts_.capture_limit)
        throw TreeCaptureOverflow("explicit tree exceeds capture limit of " +
                                  std::to_string(opts_.capture_limit) + " nodes");
      self = static_cast<std::int32_t>(parents_.size());
      parents_.push_back(parent);
    }

    if (falsified_ > 0) return;  // False leaf
    if (sat_ == num_clauses_) {  // True leaf
      const int unassigned = num_vars_ - depth;
      stats_.num_solutions += std::uint64_t{1} << unassigned;
      if (!stats_.first_solution_depth) stats_.first_solution_depth = depth;
      stats_.solution_leaves.push_back({depth, unassigned});
      if (capture_) marked_.push_back(static_cast<std::uint32_t>(self));
      return;
    }

    const int var = order_[depth];
    std::size_t marker = assign(var, Ternary::False);
    dfs(depth + 1, self);
    undo(var, marker);
    marker = assign(var, Ternary::True);
    dfs(depth + 1, self);
    undo(var, marker);
  }

  const ExploreOptions opts_;
  const bool capture_;
  const int num_vars_;
  const std::uint32_t num_clauses_;
  std::vector<Lit> lits_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Ternary> values_;  // 1-based
  std::vector<std::uint32_t> heads_;
  std::vector<std::vector<std::uint32_t>> watch_;  // 1-based by variable
  std::vector<Event> trail_;
  std::uint32_t sat_ = 0;
  std::uint32_t falsified_ = 0;
  std::vector<int> order_;
  BacktrackStats stats_;
  std::vector<std::int32_t> parents_;
  std::vector<std::uint32_t> marked_;
};

}  // namespace

BacktrackStats explore_tree(const CnfFormula& f, const ExploreOptions& opts) {
  Explorer e(f, opts, /*capture=*/false);
  return e.run().stats;
}

ExploreResult explore_tree_capture(const CnfFormula& f, const ExploreOptions& opts) {
  Explorer e(f, opts, /*capture=*/true);
  return e.run();
}

double effective_resistance_exact(const ExplicitTree& tree) {
  const std::size_t n = tree.parent.size();
  if (tree.marked.empty())
    throw UndefinedResistance("no marked leaves: resistance undefined");
  if (n == 0) throw std::invalid_argument("empty tree");

  std::vector<char> is_marked(n, 0);
  for (std::uint32_t v : tree.marked) is_marked[v] = 1;
  if (is_marked[0]) return 0.0;  // root itself marked (single-node tree)

  // Prune branches without marked descendants; preorder ids make one
  // reverse sweep enough.
  std::vector<char> keep(n, 0);
  for (std::size_t i = n; i-- > 1;) {
    if (is_marked[i]) keep[i] = 1;
    if (keep[i]) keep[tree.parent[i]] = 1;
  }
  keep[0] = 1;

  std::vector<std::vector<std::uint32_t>> children(n);
  for (std::size_t i = 1; i < n; ++i)
    if (keep[i]) children[tree.parent[i]].push_back(static_cast<std::uint32_t>(i));

  // Junctions: root, marked leaves, and branching points of the pruned
  // tree. Chains between junctions contract to single edges whose
  // resistance is the path length.
  constexpr std::int32_t kSink = -2;
  std::vector<std::int32_t> junction_id(n, -1);
  junction_id[0] = 0;
  int next_id = 1;
  struct Edge { std::int32_t a, b; double resistance; };
  std::vector<Edge> edges;

  std::vector<std::uint32_t> stack = {0};
  while (!stack.empty()) {
    const std::uint32_t junction = stack.back();
    stack.pop_back();
    for (std::uint32_t child : children[junction]) {
      std::uint32_t node = child;
      double length = 1.0;
      while (!is_marked[node] && children[node].size() == 1) {
        node = children[node][0];
        length += 1.0;
      }
      if (is_marked[node]) {
        edges.push_back({junction_id[junction], kSink, length});
      } else {
        junction_id[node] = next_id++;
        edges.push_back({junction_id[junction], junction_id[node], length});
        stack.push_back(node);
      }
    }
  }

  // Grounded Laplacian: merge marked leaves into one sink at potential 0,
  // inject unit current at the root, read the root potential.
  const int dim = next_id;
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(dim, dim);
  for (const Edge& e : edges) {
    const double w = 1.0 / e.resistance;
    laplacian(e.a, e.a) += w;
    if (e.b != kSink) {
      laplacian(e.b, e.b) += w;
      laplacian(e.a, e.b) -= w;
      laplacian(e.b, e.a) -= w;
    }
  }
  Eigen::VectorXd current = Eigen::VectorXd::Zero(dim);
  current(0) = 1.0;
  const Eigen::VectorXd potential = laplacian.fullPivLu().solve(current);
  return potential(0);
}

}  // namespace qsat
