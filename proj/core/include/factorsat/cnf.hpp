// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "factorsat/reduce.hpp"

namespace factorsat {

/// Signed DIMACS literals; variables are numbered from 1.
using Clause = std::vector<int>;

/// Truth values indexed by CNF variable minus one.
using Assignment = std::vector<std::uint8_t>;

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  /// var_origin[v - 1] is the canonical circuit variable behind CNF variable v.
  /// Not part of the DIMACS text; carried by the witness map instead.
  std::vector<VarId> var_origin;

  /// Compares the DIMACS-visible content only.
  friend bool operator==(const CnfFormula& a, const CnfFormula& b) {
    return a.num_vars == b.num_vars && a.clauses == b.clauses;
  }
};

/// Where one bit of p or q comes from.
struct BitSource {
  bool pinned = false;
  bool value = false;  // meaningful when pinned
  int literal = 0;     // signed CNF literal when not pinned

  friend bool operator==(const BitSource&, const BitSource&) = default;
};

struct WitnessMap {
  unsigned n_p = 0;
  unsigned n_q = 0;
  Natural n;
  std::vector<BitSource> p_bits;
  std::vector<BitSource> q_bits;
  std::vector<VarId> var_origin;

  friend bool operator==(const WitnessMap&, const WitnessMap&) = default;
};

struct CnfResult {
  CnfFormula formula;
  WitnessMap witness;
  /// 3 per residual AND plus 4 per residual XOR, before any cleanup.
  std::size_t raw_clauses = 0;
  std::size_t after_substitution = 0;
  std::size_t after_dedupe = 0;
};

std::array<Clause, 3> encode_and(int a, int b, int c);
std::array<Clause, 4> encode_xor(int a, int b, int c);

/// Encodes the residual gates, substitutes constants, drops tautologies,
/// duplicates and subsumed clauses, and renumbers the remaining variables.
/// Throws InconsistentInstance if an empty clause appears.
CnfResult to_cnf(const ReducedSystem& rs);

void write_dimacs(const CnfFormula& f, const std::vector<std::string>& comments, std::ostream& out);
/// Accepts `c` comment lines, one `p cnf` header and 0-terminated clauses that
/// may span lines. Throws ParseError.
CnfFormula parse_dimacs(std::istream& in);

void write_witness_map(const WitnessMap& wm, std::ostream& out);
WitnessMap parse_witness_map(std::istream& in);

/// Rebuilds (p, q) from a CNF assignment. Throws Error if a referenced
/// variable is outside the assignment.
std::pair<Natural, Natural> decode_witness(const Assignment& assignment, const WitnessMap& wm);

/// CNF assignment induced by a full circuit assignment (see planted_assignment).
Assignment project_assignment(const CnfFormula& f, const std::vector<std::uint8_t>& circuit_values);

}  // namespace factorsat
