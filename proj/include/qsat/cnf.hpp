#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qsat {

// Signed DIMACS-style literal: +v is the plain variable, -v its negation.
// Variables are 1-based. Clause order and literal order are significant:
// the backtracking predicate scans both in stored order.
using Lit = std::int32_t;
using Clause = std::vector<Lit>;

struct CnfMeta {
  int k = 0;  // 0 = unknown / not generated by our samplers
  double beta = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  double ratio = 0.0;

  bool operator==(const CnfMeta&) const = default;
};

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  CnfMeta meta;

  int num_clauses() const { return static_cast<int>(clauses.size()); }

  bool operator==(const CnfFormula&) const = default;
};

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Checks literal ranges, distinctness of variables within each clause, and
// (when meta.k is set) the exact clause width. Throws FormulaError.
void validate(const CnfFormula& f);

}  // namespace qsat
