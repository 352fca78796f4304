// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/cnf.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "factorsat/error.hpp"

namespace factorsat {

std::array<Clause, 3> encode_and(int a, int b, int c) {
  return {Clause{-a, -b, c}, Clause{a, -c}, Clause{b, -c}};
}

std::array<Clause, 4> encode_xor(int a, int b, int c) {
  return {Clause{-c, -a, -b}, Clause{-c, a, b}, Clause{c, -a, b}, Clause{c, a, -b}};
}

namespace {

// Constants ride through the encoders as a literal that negates correctly.
constexpr int kTrue = INT_MAX;

bool by_magnitude(int x, int y) {
  return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : x < y;
}

// Substitutes constants and normalizes. Returns false if the clause is
// satisfied or tautological.
bool simplify(Clause& c) {
  Clause out;
  for (int lit : c) {
    if (lit == kTrue) return false;
    if (lit == -kTrue) continue;
    out.push_back(lit);
  }
  std::sort(out.begin(), out.end(), by_magnitude);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] == -out[i - 1]) return false;
  }
  if (out.empty()) throw InconsistentInstance("inconsistent instance: empty clause after substitution");
  c = std::move(out);
  return true;
}

bool subset_of(const Clause& small, const Clause& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end(), by_magnitude);
}

// Keeps clauses not strictly containing another clause. Occurrence lists keep
// this near-linear on the sparse formulas produced here.
std::vector<Clause> remove_subsumed(std::vector<Clause> clauses) {
  std::unordered_map<int, std::vector<std::size_t>> occurs;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    for (int lit : clauses[i]) occurs[lit].push_back(i);
  }
  std::vector<bool> removed(clauses.size(), false);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const Clause& a = clauses[i];
    int pivot = a.front();
    for (int lit : a) {
      if (occurs[lit].size() < occurs[pivot].size()) pivot = lit;
    }
    for (std::size_t j : occurs[pivot]) {
      if (j == i || removed[j] || clauses[j].size() <= a.size()) continue;
      if (subset_of(a, clauses[j])) removed[j] = true;
    }
  }
  std::vector<Clause> kept;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (!removed[i]) kept.push_back(std::move(clauses[i]));
  }
  return kept;
}

}  // namespace

CnfResult to_cnf(const ReducedSystem& rs) {
  CnfResult result;

  // Work in raw VarId space (index + 1) and renumber at the end.
  auto code = [](const Term& t) {
    if (t.is_const()) return t.value() ? kTrue : -kTrue;
    const int v = static_cast<int>(t.var().index) + 1;
    return t.lit().negated ? -v : v;
  };

  std::vector<Clause> clauses;
  for (const ResidualGate& g : rs.residual_ands) {
    for (Clause& c : encode_and(code(g.in1), code(g.in2), code(g.out))) clauses.push_back(std::move(c));
  }
  for (const ResidualGate& g : rs.residual_xors) {
    for (Clause& c : encode_xor(code(g.in1), code(g.in2), code(g.out))) clauses.push_back(std::move(c));
  }
  result.raw_clauses = clauses.size();

  std::vector<Clause> live;
  for (Clause& c : clauses) {
    if (simplify(c)) live.push_back(std::move(c));
  }
  result.after_substitution = live.size();

  std::set<Clause> seen;
  std::vector<Clause> unique;
  for (Clause& c : live) {
    if (seen.insert(c).second) unique.push_back(std::move(c));
  }
  result.after_dedupe = unique.size();
  std::vector<Clause> kept = remove_subsumed(std::move(unique));

  // Surviving variables: those in clauses plus free input-bit roots, so that
  // every input bit decodes through the assignment.
  std::vector<bool> used(rs.raw_vars, false);
  for (const Clause& c : kept) {
    for (int lit : c) used[static_cast<std::size_t>(std::abs(lit) - 1)] = true;
  }
  for (unsigned i = 0; i < rs.n_p + rs.n_q; ++i) {
    const Term t = rs.resolve(VarId{i});
    if (!t.is_const()) used[t.var().index] = true;
  }
  std::vector<int> renumber(rs.raw_vars, 0);
  CnfFormula& f = result.formula;
  for (std::uint32_t v = 0; v < rs.raw_vars; ++v) {
    if (!used[v]) continue;
    f.var_origin.push_back(VarId{v});
    renumber[v] = static_cast<int>(f.var_origin.size());
  }
  f.num_vars = static_cast<int>(f.var_origin.size());
  for (Clause& c : kept) {
    for (int& lit : c) {
      const int v = renumber[static_cast<std::size_t>(std::abs(lit) - 1)];
      lit = lit < 0 ? -v : v;
    }
    std::sort(c.begin(), c.end(), by_magnitude);
  }
  f.clauses = std::move(kept);

  WitnessMap& wm = result.witness;
  wm.n_p = rs.n_p;
  wm.n_q = rs.n_q;
  wm.n = rs.n;
  wm.var_origin = f.var_origin;
  auto source = [&](VarId v) {
    const Term t = rs.resolve(v);
    BitSource s;
    if (t.is_const()) {
      s.pinned = true;
      s.value = t.value();
    } else {
      const int cnf = renumber[t.var().index];
      s.literal = t.lit().negated ? -cnf : cnf;
    }
    return s;
  };
  for (unsigned i = 0; i < rs.n_p; ++i) wm.p_bits.push_back(source(rs.p_bit(i)));
  for (unsigned j = 0; j < rs.n_q; ++j) wm.q_bits.push_back(source(rs.q_bit(j)));
  return result;
}

void write_dimacs(const CnfFormula& f, const std::vector<std::string>& comments, std::ostream& out) {
  for (const std::string& c : comments) out << "c " << c << '\n';
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
  if (!out) throw Error("failed to write DIMACS output");
}

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  bool have_header = false;
  long declared_clauses = 0;
  Clause current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p;
      std::string kind;
      if (have_header || !(ls >> p >> kind >> f.num_vars >> declared_clauses) || kind != "cnf" ||
          f.num_vars < 0 || declared_clauses < 0) {
        throw ParseError("bad DIMACS header at line " + std::to_string(line_no));
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("DIMACS clause before header at line " + std::to_string(line_no));
    long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        f.clauses.push_back(std::move(current));
        current.clear();
      } else if (std::abs(lit) > f.num_vars) {
        throw ParseError("DIMACS literal out of range at line " + std::to_string(line_no));
      } else {
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!ls.eof()) throw ParseError("bad DIMACS token at line " + std::to_string(line_no));
  }
  if (!have_header) throw ParseError("missing DIMACS header");
  if (!current.empty()) throw ParseError("unterminated DIMACS clause");
  if (static_cast<long>(f.clauses.size()) != declared_clauses) {
    throw ParseError("DIMACS clause count does not match header");
  }
  return f;
}

void write_witness_map(const WitnessMap& wm, std::ostream& out) {
  out << "n_p " << wm.n_p << '\n' << "n_q " << wm.n_q << '\n' << "N " << wm.n.to_decimal() << '\n';
  auto emit = [&](char name, const std::vector<BitSource>& bits) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
      out << name << ' ' << i;
      if (bits[i].pinned) {
        out << " PIN " << (bits[i].value ? 1 : 0) << '\n';
      } else {
        out << " LIT " << std::abs(bits[i].literal) << ' ' << (bits[i].literal < 0 ? -1 : 1) << '\n';
      }
    }
  };
  emit('P', wm.p_bits);
  emit('Q', wm.q_bits);
  for (std::size_t v = 0; v < wm.var_origin.size(); ++v) {
    out << "V " << v + 1 << ' ' << wm.var_origin[v].index << '\n';
  }
  if (!out) throw Error("failed to write witness map");
}

WitnessMap parse_witness_map(std::istream& in) {
  WitnessMap wm;
  std::map<std::size_t, BitSource> p;
  std::map<std::size_t, BitSource> q;
  std::string line;
  bool have_np = false;
  bool have_nq = false;
  bool have_n = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    bool ok = true;
    if (key == "n_p") {
      ok = static_cast<bool>(ls >> wm.n_p);
      have_np = true;
    } else if (key == "n_q") {
      ok = static_cast<bool>(ls >> wm.n_q);
      have_nq = true;
    } else if (key == "N") {
      std::string digits;
      ok = static_cast<bool>(ls >> digits);
      if (ok) wm.n = Natural::from_decimal(digits);
      have_n = true;
    } else if (key == "P" || key == "Q") {
      std::size_t index = 0;
      std::string kind;
      BitSource s;
      ok = static_cast<bool>(ls >> index >> kind);
      if (ok && kind == "PIN") {
        int v = 0;
        ok = (ls >> v) && (v == 0 || v == 1);
        s.pinned = true;
        s.value = v == 1;
      } else if (ok && kind == "LIT") {
        int var = 0;
        int sign = 0;
        ok = (ls >> var >> sign) && var > 0 && (sign == 1 || sign == -1);
        s.literal = sign * var;
      } else {
        ok = false;
      }
      if (ok) ok = (key == "P" ? p : q).emplace(index, s).second;
    } else if (key == "V") {
      std::size_t cnf = 0;
      std::uint32_t raw = 0;
      ok = (ls >> cnf >> raw) && cnf == wm.var_origin.size() + 1;
      wm.var_origin.push_back(VarId{raw});
    } else {
      ok = false;
    }
    if (!ok) throw ParseError("bad witness map line: " + line);
  }
  if (!have_np || !have_nq || !have_n) throw ParseError("witness map header incomplete");
  auto collect = [](const std::map<std::size_t, BitSource>& m, unsigned width, char name) {
    std::vector<BitSource> out;
    for (unsigned i = 0; i < width; ++i) {
      const auto it = m.find(i);
      if (it == m.end()) throw ParseError(std::string("witness map missing bit ") + name + std::to_string(i));
      out.push_back(it->second);
    }
    if (m.size() != width) throw ParseError(std::string("witness map has extra ") + name + " bits");
    return out;
  };
  wm.p_bits = collect(p, wm.n_p, 'P');
  wm.q_bits = collect(q, wm.n_q, 'Q');
  return wm;
}

std::pair<Natural, Natural> decode_witness(const Assignment& assignment, const WitnessMap& wm) {
  auto decode = [&](const std::vector<BitSource>& sources) {
    BitString bits;
    for (const BitSource& s : sources) {
      bool value = s.value;
      if (!s.pinned) {
        const auto var = static_cast<std::size_t>(std::abs(s.literal));
        if (var == 0 || var > assignment.size()) {
          throw Error("assignment does not cover CNF variable " + std::to_string(var));
        }
        value = (assignment[var - 1] != 0) != (s.literal < 0);
      }
      bits.bits.push_back(value ? 1 : 0);
    }
    return from_bits(bits);
  };
  return {decode(wm.p_bits), decode(wm.q_bits)};
}

Assignment project_assignment(const CnfFormula& f, const std::vector<std::uint8_t>& circuit_values) {
  Assignment a;
  a.reserve(f.var_origin.size());
  for (VarId v : f.var_origin) a.push_back(circuit_values.at(v.index));
  return a;
}

}  // namespace factorsat
