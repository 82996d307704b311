#include "qsat/dimacs.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qsat {

namespace {

std::string format_real(double x) {
  if (std::isinf(x)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_real(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

std::string write_dimacs(const CnfFormula& f) {
  std::string out;
  if (f.meta.k > 0) {
    out += "c qsat k=" + std::to_string(f.meta.k) +
           " beta=" + format_real(f.meta.beta) +
           " seed=" + std::to_string(f.meta.seed) +
           " ratio=" + format_real(f.meta.ratio) + "\n";
  }
  out += "p cnf " + std::to_string(f.num_vars) + " " +
         std::to_string(f.clauses.size()) + "\n";
  for (const Clause& c : f.clauses) {
    for (Lit lit : c) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula f;
  std::istringstream in(text);
  std::string line;
  long declared_clauses = -1;

  // Header phase: comments (possibly carrying our metadata) then "p cnf n m".
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c') {
      std::istringstream ls(line);
      std::string tok;
      ls >> tok >> tok;
      if (tok == "qsat") {
        while (ls >> tok) {
          const auto eq = tok.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = tok.substr(0, eq);
          const std::string val = tok.substr(eq + 1);
          try {
            if (key == "k") f.meta.k = std::stoi(val);
            else if (key == "beta") f.meta.beta = parse_real(val);
            else if (key == "seed") f.meta.seed = std::stoull(val);
            else if (key == "ratio") f.meta.ratio = parse_real(val);
          } catch (const std::exception&) {
            throw DimacsError("malformed metadata comment: " + tok);
          }
        }
      }
      continue;
    }
    std::istringstream ls(line);
    std::string p, cnf;
    long n = -1, m = -1;
    if (!(ls >> p >> cnf >> n >> m) || p != "p" || cnf != "cnf" || n < 0 || m < 0) {
      std::string rest;
      throw DimacsError("malformed header: \"" + line + "\"");
    }
    std::string trailing;
    if (ls >> trailing) throw DimacsError("malformed header: trailing tokens");
    f.num_vars = static_cast<int>(n);
    declared_clauses = m;
    break;
  }
  if (declared_clauses < 0) throw DimacsError("malformed header: missing \"p cnf\" line");

  f.clauses.reserve(static_cast<std::size_t>(declared_clauses));
  Clause current;
  long lit = 0;
  while (static_cast<long>(f.clauses.size()) < declared_clauses && (in >> lit)) {
    if (lit == 0) {
      f.clauses.push_back(current);
      current.clear();
      continue;
    }
    const long v = lit < 0 ? -lit : lit;
    if (v > f.num_vars)
      throw DimacsError("literal out of range: " + std::to_string(lit));
    current.push_back(static_cast<Lit>(lit));
  }
  if (!current.empty() || static_cast<long>(f.clauses.size()) < declared_clauses)
    throw DimacsError("unterminated clause: expected " +
                      std::to_string(declared_clauses) + " clauses, got " +
                      std::to_string(f.clauses.size()));

  std::string trailing;
  while (in >> trailing) {
    if (trailing[0] == 'c') {  // trailing comment line; discard the rest of it
      std::getline(in, trailing);
      continue;
    }
    throw DimacsError("unexpected content after final clause: " + trailing);
  }
  return f;
}

CnfFormula read_dimacs_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DimacsError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dimacs(ss.str());
}

void write_dimacs_file(const CnfFormula& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DimacsError("cannot open " + path + " for writing");
  out << write_dimacs(f);
  if (!out) throw DimacsError("write failed: " + path);
}

}  // namespace qsat
