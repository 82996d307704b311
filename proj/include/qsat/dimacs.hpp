#pragma once

#include <stdexcept>
#include <string>

#include "qsat/cnf.hpp"

namespace qsat {

class DimacsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Standard DIMACS CNF: "p cnf <vars> <clauses>" header, one 0-terminated
// clause per line. Generation metadata, when present, rides in a
// "c qsat ..." comment so that parse(write(f)) == f including meta.
std::string write_dimacs(const CnfFormula& f);
CnfFormula parse_dimacs(const std::string& text);

CnfFormula read_dimacs_file(const std::string& path);
void write_dimacs_file(const CnfFormula& f, const std::string& path);

}  // namespace qsat
