#include "qsat/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qsat/rng.hpp"

namespace qsat {

namespace {

constexpr int kMinK = 3;
constexpr int kMaxK = 12;
// Threshold ratios alpha_3..alpha_12.
constexpr double kAlpha[] = {4.27,   9.93,   21.12,  43.27,   87.79,
                             176.54, 354.01, 708.92, 1418.71, 2838.28};

// Circular distance on [0, 2pi), result in [0, pi].
double circular_distance(double a, double b) {
  const double pi = std::numbers::pi;
  return pi - std::abs(pi - std::abs(a - b));
}

Clause draw_uniform_clause(int n, int k, rng::Stream& s) {
  Clause clause;
  clause.reserve(k);
  while (static_cast<int>(clause.size()) < k) {
    const int v = static_cast<int>(s.below(static_cast<std::uint64_t>(n))) + 1;
    bool seen = false;
    for (Lit lit : clause)
      if (std::abs(lit) == v) { seen = true; break; }
    if (seen) continue;
    clause.push_back(s.coin() ? static_cast<Lit>(-v) : static_cast<Lit>(v));
  }
  return clause;
}

}  // namespace

double threshold_ratio(int k) {
  if (k < kMinK || k > kMaxK)
    throw UnsupportedK("no threshold ratio for k=" + std::to_string(k) +
                       " (supported: 3..12)");
  return kAlpha[k - kMinK];
}

int clauses_for_threshold(int n, int k) {
  const double alpha = threshold_ratio(k);
  if (n < 0) throw std::invalid_argument("negative n");
  return static_cast<int>(std::floor(alpha * n + 0.5));
}

CnfFormula sample_uniform_ksat(int n, int k, int num_clauses, std::uint64_t seed) {
  if (k > n)
    throw InfeasibleClause("cannot place " + std::to_string(k) +
                           " distinct variables among n=" + std::to_string(n));
  if (k < 1) throw std::invalid_argument("k must be positive");
  CnfFormula f;
  f.num_vars = n;
  f.meta = {k, std::numeric_limits<double>::infinity(), seed,
            n > 0 ? static_cast<double>(num_clauses) / n : 0.0};
  f.clauses.reserve(num_clauses);
  for (int j = 0; j < num_clauses; ++j) {
    rng::Stream s(rng::derive(seed, {rng::kClauseStream, static_cast<std::uint64_t>(j)}));
    f.clauses.push_back(draw_uniform_clause(n, k, s));
  }
  return f;
}

double powerlaw_weight(int index, double dist, double beta, double normalization) {
  const double x = static_cast<double>(index) * dist / normalization;
  return 1.0 / (1.0 + std::pow(x, 1.0 / beta));
}

double solve_normalization(const std::vector<double>& dist, double beta, int k) {
  const int n = static_cast<int>(dist.size());
  const double inv_beta = 1.0 / beta;
  // Precompute w_i = (i * d_i)^(1/beta); then p_i = u / (u + w_i) with
  // u = R^(1/beta), and sum_i p_i is increasing in u. Bisect on u.
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = std::pow(static_cast<double>(i + 1) * dist[i], inv_beta);

  const auto sum_at = [&](double u) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u / (u + w[i]);
    return s;
  };

  // sum_at is 0 near u=0 and approaches n >= k for large u; bisect on log u
  // so roots of any magnitude converge.
  double lo = 1e-300, hi = 1.0;
  while (sum_at(hi) < k && hi < 1e300) hi *= 2.0;
  double mid = hi;
  for (int iter = 0; iter < 400; ++iter) {
    mid = std::sqrt(lo) * std::sqrt(hi);
    const double s = sum_at(mid);
    if (std::abs(s - k) <= 1e-9) break;
    (s < k ? lo : hi) = mid;
    if (hi / lo < 1.0 + 1e-15) break;
  }
  return std::pow(mid, beta);
}

CnfFormula sample_powerlaw_ksat(int n, int k, int num_clauses, double beta,
                                std::uint64_t seed) {
  if (std::isinf(beta)) return sample_uniform_ksat(n, k, num_clauses, seed);
  if (!(beta > 0)) throw std::invalid_argument("beta must be positive or infinity");
  if (k > n)
    throw InfeasibleClause("cannot place " + std::to_string(k) +
                           " distinct variables among n=" + std::to_string(n));
  if (k < 1) throw std::invalid_argument("k must be positive");

  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> var_angle(n);
  rng::Stream angles(rng::derive(seed, {rng::kAngleStream}));
  for (int i = 0; i < n; ++i) var_angle[i] = angles.unit() * two_pi;

  CnfFormula f;
  f.num_vars = n;
  f.meta = {k, beta, seed, n > 0 ? static_cast<double>(num_clauses) / n : 0.0};
  f.clauses.reserve(num_clauses);

  const double inv_beta = 1.0 / beta;
  std::vector<double> weight(n);
  for (int j = 0; j < num_clauses; ++j) {
    rng::Stream s(rng::derive(seed, {rng::kClauseStream, static_cast<std::uint64_t>(j)}));
    const double clause_angle = s.unit() * two_pi;

    std::vector<double> dist(n);
    for (int i = 0; i < n; ++i)
      dist[i] = circular_distance(var_angle[i], clause_angle);
    const double norm = solve_normalization(dist, beta, k);
    const double u = std::pow(norm, inv_beta);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = std::pow(static_cast<double>(i + 1) * dist[i], inv_beta);
      weight[i] = u / (u + w);
      total += weight[i];
    }

    // Sequential weighted sampling without replacement; draw order is the
    // stored literal order.
    Clause clause;
    clause.reserve(k);
    for (int pick = 0; pick < k; ++pick) {
      double r = s.unit() * total;
      int chosen = -1;
      for (int i = 0; i < n; ++i) {
        if (weight[i] <= 0.0) continue;
        r -= weight[i];
        if (r < 0.0) { chosen = i; break; }
      }
      if (chosen < 0) {  // numerical tail: take the last remaining variable
        for (int i = n - 1; i >= 0; --i)
          if (weight[i] > 0.0) { chosen = i; break; }
      }
      total -= weight[chosen];
      weight[chosen] = 0.0;
      const int v = chosen + 1;
      clause.push_back(s.coin() ? static_cast<Lit>(-v) : static_cast<Lit>(v));
    }
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

}  // namespace qsat
