// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "factorsat/reduce.hpp"

namespace factorsat {

/// Spin values are +1 (true) and -1 (false). Indices are 0-based in memory and
/// 1-based in the text format.
using SpinConfig = std::vector<std::int8_t>;

/// Quadratic pseudo-Boolean polynomial over up to four gadget operands.
struct GadgetTerms {
  std::int64_t constant = 0;
  std::vector<std::pair<int, std::int64_t>> fields;           // (operand, h)
  std::vector<std::tuple<int, int, std::int64_t>> couplings;  // (operand, operand, J)
};

/// Operands are (in1, in2, out). Zero on the four configurations with out = in1 AND in2.
GadgetTerms and_gadget_terms();
/// Operands are (in1, in2, out, aux). Zero iff out = in1 XOR in2 and aux = planted_aux(in1, in2).
GadgetTerms xor_gadget_terms();
std::int64_t evaluate(const GadgetTerms& terms, const std::array<int, 4>& spins);

/// +1 iff both inputs are +1.
int planted_aux(int s1, int s2);

/// Gadget operand after canonicalization: coeff * s[spin], or the constant
/// coeff when spin < 0.
struct SpinOperand {
  int spin = -1;
  int coeff = 1;

  int value(const SpinConfig& s) const { return spin < 0 ? coeff : coeff * s[static_cast<std::size_t>(spin)]; }
};

struct Gadget {
  enum class Kind { And, Xor };
  Kind kind;
  /// in1, in2, out, then aux for XOR.
  std::array<SpinOperand, 4> operands;
  std::size_t source;  // residual gate index

  std::int64_t energy(const SpinConfig& s) const;
  /// The Boolean relation (aux ignored) fails under s.
  bool violated(const SpinConfig& s) const;
};

struct SpinOrigin {
  enum class Kind { Physical, XorAux };
  Kind kind;
  /// Canonical VarId index for Physical, residual XOR index for XorAux.
  std::uint32_t ref;
};

struct IsingModel {
  std::size_t n_spins = 0;
  std::size_t n_physical = 0;
  std::map<std::uint32_t, std::int64_t> h;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> J;  // first < second
  /// Sum of gadget constants after folding pinned operands.
  std::int64_t e0 = 0;
  /// Lowest reachable energy. Every gadget is non-negative and the planted
  /// configuration zeroes all of them, so this is 0 for any planted instance.
  std::int64_t ground_energy = 0;
  std::int64_t gap = 2;

  unsigned n_p = 0;
  unsigned n_q = 0;
  Natural n;

  std::vector<SpinOrigin> spin_origin;
  std::vector<Gadget> gadgets;
  /// Spin-spin coupling contributions before merging equal pairs.
  std::size_t raw_couplings = 0;

  /// Compares the exported content.
  friend bool operator==(const IsingModel& a, const IsingModel& b) {
    return a.n_spins == b.n_spins && a.h == b.h && a.J == b.J && a.e0 == b.e0 &&
           a.ground_energy == b.ground_energy && a.gap == b.gap && a.n_p == b.n_p && a.n_q == b.n_q &&
           a.n == b.n;
  }
};

/// Spins: physical_vars() of rs in order, then one aux per residual XOR.
/// Constant operands fold into fields and e0; zero merged entries are dropped.
IsingModel assemble(const ReducedSystem& rs);

/// e0 + sum h_i s_i + sum J_ij s_i s_j. Throws Error on a length mismatch.
std::int64_t energy(const IsingModel& m, const SpinConfig& s);

/// Sum of per-gadget energies. The folded constants live in e0, so this
/// matches energy(m, s) for every configuration.
std::int64_t gadget_energy_sum(const IsingModel& m, const SpinConfig& s);
std::size_t count_violated(const IsingModel& m, const SpinConfig& s);

/// Physical spins from circuit values (s = 2b - 1), aux spins from planted_aux.
/// Throws std::logic_error if some gadget is not at zero energy.
SpinConfig planted_spin_config(const IsingModel& m, const std::vector<std::uint8_t>& circuit_values);

struct GraphStats {
  std::size_t n_edges = 0;
  std::size_t max_degree = 0;
  std::map<std::size_t, std::size_t> degree_histogram;
  /// |column(i) - column(j)| over edges between physical spins.
  std::map<std::uint32_t, std::size_t> column_distance_histogram;
};

GraphStats graph_stats(const IsingModel& m, const std::vector<std::uint32_t>& column_of);

void write_ising(const IsingModel& m, const SpinConfig* planted, std::ostream& out);
/// Returns the model and the planted section if present. Throws ParseError.
std::pair<IsingModel, std::optional<SpinConfig>> parse_ising(std::istream& in);
/// `i j weight` lines, 1-based.
void write_edge_list(const IsingModel& m, std::ostream& out);

}  // namespace factorsat
