#include "qsat/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "qsat/instance_gen.hpp"
#include "qsat/quantum_bounds.hpp"
#include "qsat/rng.hpp"

namespace qsat::oracles {

namespace {

bool clause_satisfied_by(const Clause& c, std::uint64_t assignment) {
  for (Lit lit : c) {
    const int v = std::abs(lit) - 1;
    const bool value = (assignment >> v) & 1u;
    if ((lit > 0) == value) return true;
  }
  return false;
}

}  // namespace

std::uint64_t brute_force_count(const CnfFormula& f) {
  if (f.num_vars > 24)
    throw OracleLimit("brute_force_count supports n <= 24");
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < total; ++a) {
    bool ok = true;
    for (const Clause& c : f.clauses)
      if (!clause_satisfied_by(c, a)) { ok = false; break; }
    if (ok) ++count;
  }
  return count;
}

namespace {

// Deliberately plain re-derivation of the tree semantics: its own variable
// ordering, its own literal scan, no shortcuts shared with the backtracker.
struct BruteExplorer {
  const CnfFormula& f;
  std::vector<int> order;    // 1-based variables, most frequent first
  std::vector<int> value;    // -1 unassigned, 0 false, 1 true; 1-based
  std::uint64_t nodes = 0;
  std::optional<int> first_depth;

  explicit BruteExplorer(const CnfFormula& formula) : f(formula) {
    std::vector<int> occurrences(f.num_vars + 1, 0);
    for (const Clause& c : f.clauses)
      for (Lit lit : c) occurrences[std::abs(lit)]++;
    order.resize(f.num_vars);
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (occurrences[a] != occurrences[b]) return occurrences[a] > occurrences[b];
      return a < b;
    });
    value.assign(f.num_vars + 1, -1);
  }

  // 0 = false, 1 = true, 2 = indeterminate. Within a clause, the first
  // literal that is not assigned-unsatisfied decides it; a clause whose
  // literals are all assigned and unsatisfied falsifies the predicate.
  int predicate() const {
    bool indeterminate = false;
    for (const Clause& c : f.clauses) {
      bool decided = false;
      for (Lit lit : c) {
        const int v = value[std::abs(lit)];
        if (v == -1) { indeterminate = true; decided = true; break; }
        if ((lit > 0) == (v == 1)) { decided = true; break; }
      }
      if (!decided) return 0;
    }
    return indeterminate ? 2 : 1;
  }

  void walk(int depth) {
    if (++nodes > 10'000'000)
      throw OracleLimit("brute_force_tree exceeded its node cap");
    const int p = predicate();
    if (p == 2) {
      const int var = order[depth];
      value[var] = 0;
      walk(depth + 1);
      value[var] = 1;
      walk(depth + 1);
      value[var] = -1;
    } else if (p == 1 && !first_depth) {
      first_depth = depth;
    }
  }
};

}  // namespace

BruteTree brute_force_tree(const CnfFormula& f) {
  if (f.num_vars > 20)
    throw OracleLimit("brute_force_tree supports n <= 20");
  BruteExplorer b(f);
  b.walk(0);
  return {b.nodes, b.first_depth};
}

double resistance_dense(const ExplicitTree& tree) {
  const std::size_t n = tree.parent.size();
  if (tree.marked.empty())
    throw UndefinedResistance("no marked leaves: resistance undefined");
  if (n > 500) throw OracleLimit("resistance_dense supports at most 500 nodes");

  std::vector<char> is_marked(n, 0);
  for (std::uint32_t v : tree.marked) is_marked[v] = 1;
  if (is_marked[0]) return 0.0;

  // Map every marked node to one shared super-node; everything else keeps
  // its own row.
  std::vector<int> id(n, -1);
  int next = 0;
  const int super = [&] {
    for (std::size_t i = 0; i < n; ++i)
      if (!is_marked[i]) id[i] = next++;
    return next++;
  }();
  for (std::size_t i = 0; i < n; ++i)
    if (is_marked[i]) id[i] = super;

  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(next, next);
  for (std::size_t i = 1; i < n; ++i) {
    const int a = id[i], b = id[tree.parent[i]];
    if (a == b) continue;
    laplacian(a, a) += 1.0;
    laplacian(b, b) += 1.0;
    laplacian(a, b) -= 1.0;
    laplacian(b, a) -= 1.0;
  }
  const Eigen::MatrixXd pinv =
      laplacian.completeOrthogonalDecomposition().pseudoInverse();
  const int r = id[0];
  return pinv(r, r) - 2.0 * pinv(r, super) + pinv(super, super);
}

double expected_first_marked(int N, int t) {
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  if (t > N) throw std::invalid_argument("t exceeds N");
  return static_cast<double>(N + 1) / static_cast<double>(t + 1);
}

bool expected_first_marked_matches_sum(int N, int t) {
  if (N > 30) throw OracleLimit("exact sum check supports N <= 30");
  if (t < 1 || t > N) throw std::invalid_argument("need 1 <= t <= N");
  const auto binom = [](int n, int k) -> std::uint64_t {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
  };
  // sum_i i*binom(N-i, t-1) * (t+1) == (N+1) * binom(N, t), exactly.
  unsigned __int128 lhs = 0;
  for (int i = 1; i <= N; ++i)
    lhs += static_cast<unsigned __int128>(i) * binom(N - i, t - 1);
  lhs *= static_cast<unsigned>(t + 1);
  const unsigned __int128 rhs =
      static_cast<unsigned __int128>(N + 1) * binom(N, t);
  return lhs == rhs;
}

double expected_first_marked_monte_carlo(int N, int t, int trials,
                                         std::uint64_t seed) {
  if (t < 1 || t > N) throw std::invalid_argument("need 1 <= t <= N");
  rng::Stream s(seed);
  double sum = 0.0;
  std::vector<std::uint32_t> picks;
  picks.reserve(t);
  for (int trial = 0; trial < trials; ++trial) {
    picks.clear();
    std::uint32_t smallest = N;
    // Floyd's algorithm: uniform t-subset of {0..N-1}.
    for (int j = N - t; j < N; ++j) {
      std::uint32_t x = static_cast<std::uint32_t>(s.below(j + 1));
      if (std::find(picks.begin(), picks.end(), x) != picks.end())
        x = static_cast<std::uint32_t>(j);
      picks.push_back(x);
      smallest = std::min(smallest, x);
    }
    sum += smallest + 1;  // 1-based index of the first marked item
  }
  return sum / trials;
}

namespace {

template <typename T>
std::string str(T v) { return std::to_string(v); }

}  // namespace

OracleReport verify_backtracker(std::uint64_t seed, int instances) {
  OracleReport report{"backtracker", 0, {}};
  rng::Stream s(seed);
  const int ks[] = {3, 4, 5};
  for (int i = 0; i < instances; ++i) {
    const int k = ks[s.below(3)];
    const int n = k + static_cast<int>(s.below(12 - k + 1));  // k..12
    const int m = clauses_for_threshold(n, k);
    const std::uint64_t inst_seed = s.next();
    const CnfFormula f = sample_uniform_ksat(n, k, m, inst_seed);
    const std::string id = "k=" + str(k) + " n=" + str(n) + " seed=" + str(inst_seed);

    const BacktrackStats stats = explore_tree(f);
    const std::uint64_t models = brute_force_count(f);
    const BruteTree tree = brute_force_tree(f);
    ++report.cases;
    if (stats.num_solutions != models)
      report.mismatches.push_back({id + " [t]", str(models), str(stats.num_solutions)});
    if (stats.tree_size != tree.tree_size)
      report.mismatches.push_back({id + " [T]", str(tree.tree_size), str(stats.tree_size)});
    const int expected_d = tree.first_solution_depth.value_or(-1);
    const int got_d = stats.first_solution_depth.value_or(-1);
    if (expected_d != got_d)
      report.mismatches.push_back({id + " [d]", str(expected_d), str(got_d)});
  }
  return report;
}

OracleReport verify_resistance(std::uint64_t seed, int trees) {
  OracleReport report{"resistance", 0, {}};
  rng::Stream s(seed);
  for (int i = 0; i < trees; ++i) {
    const int n = 2 + static_cast<int>(s.below(39));  // 2..40 nodes
    ExplicitTree tree;
    tree.parent.resize(n);
    tree.parent[0] = -1;
    for (int v = 1; v < n; ++v)
      tree.parent[v] = static_cast<std::int32_t>(s.below(v));
    std::vector<char> has_child(n, 0);
    for (int v = 1; v < n; ++v) has_child[tree.parent[v]] = 1;
    std::vector<std::uint32_t> leaves;
    for (int v = 1; v < n; ++v)
      if (!has_child[v]) leaves.push_back(v);
    if (leaves.empty()) continue;
    const int marks = 1 + static_cast<int>(s.below(leaves.size()));
    for (int j = 0; j < marks; ++j) tree.marked.push_back(leaves[j]);

    ++report.cases;
    const double fast = effective_resistance_exact(tree);
    const double dense = resistance_dense(tree);
    const std::string id = "tree#" + str(i) + " n=" + str(n) + " marks=" + str(marks);
    if (std::abs(fast - dense) > 1e-9)
      report.mismatches.push_back({id, str(dense), str(fast)});
    int deepest = 0;
    for (std::uint32_t leaf : tree.marked) {
      int depth = 0;
      for (std::int32_t v = leaf; v != 0; v = tree.parent[v]) ++depth;
      deepest = std::max(deepest, depth);
    }
    if (fast > deepest + 1e-9)
      report.mismatches.push_back({id + " [depth bound]",
                                   "<= " + str(deepest), str(fast)});
  }
  return report;
}

OracleReport verify_bounds(std::uint64_t seed, int cases) {
  OracleReport report{"bounds", 0, {}};
  rng::Stream s(seed);
  const double deltas[] = {0.1, 0.01, 1e-3};
  for (int i = 0; i < cases; ++i) {
    const double delta = deltas[s.below(3)];
    const int n = 1 + static_cast<int>(s.below(40));
    const std::uint64_t T = 1 + s.below(1u << 20);
    const double R = 1.0 + static_cast<double>(s.below(64));
    const bool sat = s.coin();
    const std::optional<int> d =
        sat ? std::optional<int>(static_cast<int>(s.below(n + 1))) : std::nullopt;

    const DetectionConfig cfg = optimize_detection_config(delta);
    ++report.cases;
    const std::string id = "delta=" + str(delta) + " n=" + str(n) + " T=" + str(T) +
                           " R=" + str(R) + (sat ? " sat" : " unsat");

    // Independent term-by-term evaluation of the doubling sum.
    const int lprime = search_amplification(delta, n);
    long double expected = 0.0L;
    int iters = 1;
    while (powl(2.0L, iters) < (long double)T) ++iters;
    for (int it = 1; it <= iters; ++it) {
      const long double W = powl(2.0L, it);
      long double M = sqrtl((1.0L + (long double)cfg.C * cfg.C) *
                            (1.0L + cfg.C * R * W));
      int m = 0;
      while (powl(2.0L, m) < M) ++m;
      long double factor = n;
      if (it == iters) factor = sat ? (long double)*d : 1.0L;
      expected += factor * cfg.l * (powl(2.0L, m) - 1.0L);
    }
    expected *= lprime;

    const double got = search_queries(delta, n, T, R, d);
    if (std::abs((double)expected - got) >
        1e-9 * std::max(1.0, std::abs((double)expected)))
      report.mismatches.push_back({id, str((double)expected), str(got)});

    // Search must dominate detection at W = T.
    const DetectionQueries det = detection_queries(cfg, R, (double)T);
    if (got + 1e-9 < (double)det.rounded && d.value_or(1) != 0)
      report.mismatches.push_back({id + " [search>=detect]",
                                   ">= " + str(det.rounded), str(got)});
  }
  return report;
}

OracleReport verify_grover(std::uint64_t seed, int cases) {
  OracleReport report{"grover", 0, {}};
  rng::Stream s(seed);
  for (int i = 0; i < cases; ++i) {
    const int n = 4 + static_cast<int>(s.below(27));  // N = 2^4 .. 2^30
    const std::uint64_t N = std::uint64_t{1} << n;
    const std::uint64_t t = s.below(N + 1);
    GroverParams params;
    params.delta = 1e-3;
    ++report.cases;
    const std::string id = "N=2^" + str(n) + " t=" + str(t);

    // Independent evaluation straight from the stated formulas.
    long double expected;
    if (t == 0) {
      long double reps = ceill(logl(1000.0L) / logl(3.0L) - 1e-9L);
      expected = 9.2L * reps * sqrtl((long double)N);
    } else {
      const long double Nl = N, tl = t;
      long double F;
      if (tl < Nl / 4.0L) {
        const long double root = sqrtl((Nl - tl) * tl);
        F = 2.25L * Nl / root +
            ceill(logl(Nl / (2.0L * root)) / logl(1.2L) - 1e-9L) - 3.0L;
      } else {
        F = 2.0344L;
      }
      expected = F * (1.0L + 1.0L / (1.0L - F / (9.2L * sqrtl(Nl))));
    }
    const double got = grover_expected_queries(params, N, t);
    if (std::abs((double)expected - got) >
        1e-9 * std::max(1.0, std::abs((double)expected)))
      report.mismatches.push_back({id, str((double)expected), str(got)});
  }

  // Closed form vs exact binomial sum for every N <= 30.
  for (int N = 1; N <= 30; ++N)
    for (int t = 1; t <= N; ++t) {
      ++report.cases;
      if (!expected_first_marked_matches_sum(N, t))
        report.mismatches.push_back(
            {"first-marked N=" + str(N) + " t=" + str(t),
             str(expected_first_marked(N, t)), "sum mismatch"});
    }
  return report;
}

}  // namespace qsat::oracles
