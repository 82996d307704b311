#include "qsat/cnf.hpp"

#include <cstdlib>
#include <string>

namespace qsat {

void validate(const CnfFormula& f) {
  if (f.num_vars < 0) throw FormulaError("negative variable count");
  for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
    const Clause& c = f.clauses[ci];
    if (f.meta.k > 0 && static_cast<int>(c.size()) != f.meta.k)
      throw FormulaError("clause " + std::to_string(ci) + " has " +
                         std::to_string(c.size()) + " literals, expected k=" +
                         std::to_string(f.meta.k));
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Lit lit = c[i];
      const int v = std::abs(lit);
      if (v < 1 || v > f.num_vars)
        throw FormulaError("literal out of range in clause " + std::to_string(ci));
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(c[j]) == v)
          throw FormulaError("duplicate variable " + std::to_string(v) +
                             " in clause " + std::to_string(ci));
    }
  }
}

}  // namespace qsat
