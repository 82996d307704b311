#include "qsat/quantum_bounds.hpp"

#include <algorithm>
#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace qsat {

namespace {

using boost::multiprecision::cpp_int;

// Exact binomial coefficient, converted to long double once.
long double binomial_ld(int n, int k) {
  cpp_int num = 1;
  for (int i = 0; i < k; ++i) {
    num *= (n - i);
    num /= (i + 1);  // exact: product of j consecutive integers divides by j!
  }
  return num.convert_to<long double>();
}

// ceil(log2 x) with an exact power-of-two test, avoiding log2 rounding at
// the boundaries.
int ceil_log2(long double x) {
  if (!(x > 0))
    throw std::invalid_argument("ceil_log2 requires a positive argument");
  const int e = ilogbl(x);              // 2^e <= x < 2^{e+1}
  return (exp2l(e) == x) ? e : e + 1;
}

// ceil of a logarithm that the formulas treat as integer-valued; snaps
// values within 1e-9 of an integer before taking the ceiling.
long double snapped_ceil(long double x) {
  const long double r = roundl(x);
  if (fabsl(x - r) < 1e-9L) return r;
  return ceill(x);
}

}  // namespace

long double majority_error(long double C, int l) {
  if (l < 1 || l % 2 == 0) throw std::invalid_argument("l must be odd and positive");
  if (!(C > 0)) throw std::invalid_argument("C must be positive");
  long double sum = 0.0L;
  long double c_pow = 1.0L;
  for (int i = 0; i <= l / 2; ++i) {
    sum += binomial_ld(l, i) * c_pow;
    c_pow *= C;
  }
  return sum / powl(1.0L + C, l);
}

namespace {

// Unique C > 1 with majority_error(C, l) == delta; the error is strictly
// decreasing in C and equals 1/2 at C = 1.
double solve_walk_constant(double delta, int l) {
  long double lo = 1.0L, hi = 1e6L;
  if (majority_error(hi, l) > delta)
    throw NoAmplificationPossible("no C <= 1e6 reaches delta for l=" +
                                  std::to_string(l));
  while (hi - lo > 1e-6L) {
    const long double mid = 0.5L * (lo + hi);
    if (majority_error(mid, l) > delta)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

double walk_objective(double C, int l) {
  return l * std::sqrt(C * (1.0 + C * C));
}

}  // namespace

DetectionConfig optimize_detection_config(double delta) {
  if (!(delta > 0.0) || delta >= 0.5)
    throw NoAmplificationPossible(
        "majority amplification needs 0 < delta < 1/2, got delta=" +
        std::to_string(delta));
  DetectionConfig best;
  double best_objective = 0.0;
  for (int l = 1; l <= 501; l += 2) {
    const double C = solve_walk_constant(delta, l);
    const double objective = walk_objective(C, l);
    if (best.l != 0 && objective > best_objective) break;
    if (best.l == 0 || objective < best_objective) {
      best = {delta, C, l, objective};
      best_objective = objective;
    }
  }
  return best;
}

DetectionQueries detection_queries(const DetectionConfig& config, double R_bound,
                                   double W) {
  if (!(R_bound > 0) || !(W > 0))
    throw std::invalid_argument("R and W bounds must be positive");
  const long double C = config.C;
  const long double M = sqrtl((1.0L + C * C) * (1.0L + C * R_bound * W));
  const int m = ceil_log2(M);
  if (m >= 63) throw std::overflow_error("phase estimation size overflows 2^63");
  DetectionQueries q;
  q.precision_bits = m;
  q.smooth = static_cast<double>(config.l * (M - 1.0L));
  const unsigned __int128 rounded =
      static_cast<unsigned __int128>(config.l) * ((std::uint64_t{1} << m) - 1);
  if (rounded > static_cast<unsigned __int128>(UINT64_MAX))
    throw std::overflow_error("rounded query count overflows 64 bits");
  q.rounded = static_cast<std::uint64_t>(rounded);
  return q;
}

int search_amplification(double delta, int n) {
  if (!(delta > 0.0) || delta >= 0.5)
    throw NoAmplificationPossible("search amplification needs 0 < delta < 1/2");
  if (n < 1) throw std::invalid_argument("n must be positive");
  // Per-run failure budget so n consecutive runs succeed with prob 1-delta.
  const long double target = -expm1l(log1pl(-(long double)delta) / n);
  // Majority over l' runs each failing w.p. delta is the same sum as
  // majority_error with odds C = (1-delta)/delta.
  const long double odds = (1.0L - (long double)delta) / (long double)delta;
  for (int l = 1; l <= 1001; l += 2)
    if (majority_error(odds, l) <= target) return l;
  throw std::runtime_error("search amplification did not converge below l'=1001");
}

double search_queries(double delta, int n, std::uint64_t tree_size, double R_bound,
                      std::optional<int> first_solution_depth) {
  if (tree_size < 1) throw std::invalid_argument("tree size must be >= 1");
  if (first_solution_depth && (*first_solution_depth < 0 || *first_solution_depth > n))
    throw std::invalid_argument("first solution depth must lie in [0, n]");
  const DetectionConfig config = optimize_detection_config(delta);
  const int lprime = search_amplification(delta, n);

  // ceil(log2 T), but always at least one doubling round (T = 1 still runs
  // binary search once with the initial guess W = 2).
  const int iterations =
      std::max(tree_size <= 1 ? 0 : static_cast<int>(std::bit_width(tree_size - 1)), 1);

  const long double C = config.C;
  long double total = 0.0L;
  for (int i = 1; i <= iterations; ++i) {
    const long double W = exp2l(i);
    const long double M = sqrtl((1.0L + C * C) * (1.0L + C * R_bound * W));
    const int m = ceil_log2(M);
    const long double per_detection = config.l * (exp2l(m) - 1.0L);
    long double factor = n;
    if (i == iterations)
      factor = first_solution_depth ? (long double)*first_solution_depth : 1.0L;
    total += factor * per_detection;
  }
  return static_cast<double>(lprime * total);
}

double grover_expected_queries(const GroverParams& params, std::uint64_t N,
                               std::uint64_t t) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (t > N) throw std::invalid_argument("t exceeds N");
  const long double Nl = static_cast<long double>(N);
  if (t == 0) {
    const long double reps = snapped_ceil(logl(1.0L / params.delta) / logl(3.0L));
    return static_cast<double>(params.n_samples +
                               params.alpha * params.oracle_query_factor * reps *
                                   sqrtl(Nl));
  }
  const long double tl = static_cast<long double>(t);
  const long double miss = 1.0L - tl / Nl;
  // (1 - t/N)^n_samples, with 0^0 = 1 for the no-sampling case.
  const long double skip =
      params.n_samples == 0 ? 1.0L : powl(miss, (long double)params.n_samples);
  const long double classical = (Nl / tl) * (1.0L - skip);

  long double F;
  if (4 * t < N) {
    const long double root = sqrtl((Nl - tl) * tl);
    F = (9.0L / 4.0L) * Nl / root +
        snapped_ceil(logl(Nl / (2.0L * root)) / logl(6.0L / 5.0L)) - 3.0L;
  } else {
    F = 2.0344L;
  }
  const long double e_grover = F * (1.0L + 1.0L / (1.0L - F / (params.alpha * sqrtl(Nl))));
  return static_cast<double>(classical + skip * params.oracle_query_factor * e_grover);
}

}  // namespace qsat
