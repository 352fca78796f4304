// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "factorsat/numeric.hpp"

namespace factorsat {

/// Dense index of a Boolean variable inside one ConstraintSystem.
struct VarId {
  std::uint32_t index = 0;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

struct InputP {
  unsigned i;
};
struct InputQ {
  unsigned j;
};
struct PartialProduct {
  unsigned i, j;
};
struct Sum {
  std::uint32_t serial;
};
struct Carry {
  std::uint32_t serial;
};
using VarKind = std::variant<InputP, InputQ, PartialProduct, Sum, Carry>;

/// out = in1 AND in2
struct AndGate {
  VarId out, in1, in2;
};
/// out = in1 XOR in2
struct XorGate {
  VarId out, in1, in2;
};
struct Pin {
  VarId var;
  bool value;
};

/// Raw multiplier circuit for N = p * q built from partial products and
/// pairwise half-adder contraction, with every column's survivor pinned to N_k.
struct ConstraintSystem {
  unsigned n_p = 0;
  unsigned n_q = 0;
  Natural n;

  std::vector<VarKind> vars;
  std::vector<std::uint32_t> column_of;
  /// Partial-product ANDs first (n_p * n_q), then one carry AND per contraction.
  std::vector<AndGate> ands;
  /// One XOR per contraction; xors[t] pairs with ands[n_p * n_q + t].
  std::vector<XorGate> xors;
  std::vector<Pin> pins;

  /// m_k observed while building (entries when column k was processed).
  std::vector<std::uint64_t> column_entries;
  std::vector<std::uint64_t> column_contractions;

  std::size_t num_vars() const { return vars.size(); }
  std::size_t num_partial_products() const { return static_cast<std::size_t>(n_p) * n_q; }
  std::size_t num_contractions() const { return xors.size(); }
  std::size_t active_columns() const { return column_entries.size(); }
  VarId p_bit(unsigned i) const { return VarId{i}; }
  VarId q_bit(unsigned j) const { return VarId{n_p + j}; }
  bool is_input(VarId v) const { return v.index < n_p + n_q; }
};

/// Partial products landing in column k: min(k+1, n_p, n_q, n_p+n_q-1-k).
std::uint64_t pp_count(std::uint64_t k, unsigned n_p, unsigned n_q);

/// m_k from the column recurrence m_{k+1} = pp_{k+1} + max(m_k - 1, 0), m_0 = 1,
/// truncated after the last column with m_k >= 1.
std::vector<std::uint64_t> column_profile(unsigned n_p, unsigned n_q);

/// Builds the circuit for an n_p x n_q multiplier whose product bits are
/// `n_bits`. Only the bit-lengths shape the structure; N enters via pins.
ConstraintSystem build_circuit(unsigned n_p, unsigned n_q, const BitString& n_bits);

/// Convenience overload deriving lengths from the factors themselves.
ConstraintSystem build_circuit(const Natural& p, const Natural& q);

/// Forward evaluation of the circuit from the bits of p and q.
/// Throws std::logic_error if a pin disagrees (construction bug).
std::vector<std::uint8_t> planted_assignment(const ConstraintSystem& cs, const BitString& p_bits,
                                             const BitString& q_bits);

/// Debug dump: `AND out in1 in2`, `XOR out in1 in2`, `PIN var 0|1`.
void write_circuit_dump(const ConstraintSystem& cs, std::ostream& out);

}  // namespace factorsat
