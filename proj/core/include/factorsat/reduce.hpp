// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "factorsat/circuit.hpp"

namespace factorsat {

struct Lit {
  VarId var;
  bool negated = false;

  Lit operator~() const { return {var, !negated}; }
  friend bool operator==(const Lit&, const Lit&) = default;
};

/// A literal after canonicalization: either a constant or a literal over the
/// root of its equivalence class.
class Term {
 public:
  static Term constant(bool value) { return Term(true, value, {}); }
  static Term literal(Lit lit) { return Term(false, false, lit); }

  bool is_const() const { return is_const_; }
  bool value() const { return value_; }
  Lit lit() const { return lit_; }
  VarId var() const { return lit_.var; }

  Term operator~() const { return is_const_ ? constant(!value_) : literal(~lit_); }
  friend bool operator==(const Term& a, const Term& b) {
    return a.is_const_ == b.is_const_ && (a.is_const_ ? a.value_ == b.value_ : a.lit_ == b.lit_);
  }

 private:
  Term(bool is_const, bool value, Lit lit) : is_const_(is_const), value_(value), lit_(lit) {}
  bool is_const_;
  bool value_;
  Lit lit_;
};

/// Both terms are literals over the same root (equal or complementary).
inline bool same_var(const Term& a, const Term& b) {
  return !a.is_const() && !b.is_const() && a.var() == b.var();
}

/// Union-find over variables where each edge carries a parity: a variable is
/// either equal to its parent or to the parent's negation. The smallest VarId
/// of a class is its root.
class SignedUnionFind {
 public:
  SignedUnionFind() = default;
  explicit SignedUnionFind(std::size_t n);

  /// Root literal equal to `v`. Compresses paths.
  Lit find(VarId v);
  Lit find(VarId v) const;
  Lit find(Lit l) { return resolve_sign(find(l.var), l.negated); }
  Lit find(Lit l) const { return resolve_sign(find(l.var), l.negated); }

  /// Records a == b for root literals over two different roots.
  void unite(Lit a, Lit b);

  bool is_root(VarId v) const { return parent_[v.index] == v.index; }
  std::size_t size() const { return parent_.size(); }

 private:
  static Lit resolve_sign(Lit root, bool negated) { return {root.var, root.negated != negated}; }

  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> parity_;
};

/// Constant values of class roots.
class PinTable {
 public:
  PinTable() = default;
  explicit PinTable(std::size_t n) : value_(n, kUnset) {}

  std::optional<bool> get(VarId root) const {
    const auto v = value_[root.index];
    if (v == kUnset) return std::nullopt;
    return v != 0;
  }
  bool contains(VarId root) const { return value_[root.index] != kUnset; }
  void set(VarId root, bool value) { value_[root.index] = value ? 1 : 0; }
  std::size_t count() const;

 private:
  static constexpr std::int8_t kUnset = -1;
  std::vector<std::int8_t> value_;
};

/// Result of running one rule family on one gate. Derived facts make the gate
/// redundant, so any outcome other than Keep retires it.
struct RuleOutcome {
  enum class Kind { Keep, Drop, Derive, Contradiction };

  Kind kind = Kind::Keep;
  std::string_view rule;
  /// Non-constant term forced to a value.
  std::vector<std::pair<Term, bool>> pins;
  /// Literal terms over different roots forced equal.
  std::vector<std::pair<Term, Term>> merges;
};

/// Truth-table rules for out = in1 AND in2 over canonical terms.
RuleOutcome and_rules(Term out, Term in1, Term in2);
/// Truth-table rules for out = in1 XOR in2 over canonical terms.
RuleOutcome xor_rules(Term out, Term in1, Term in2);

/// Mutable union-find and pin state threaded through the reduction loop.
class ReductionState {
 public:
  explicit ReductionState(std::size_t num_vars) : uf(num_vars), pins(num_vars) {}

  Term canon(VarId v);
  Term canon(Lit l);

  /// Applies pins and merges; returns true if anything new was learned.
  /// Throws InconsistentInstance on a contradiction.
  bool apply(const RuleOutcome& outcome);
  bool pin(Term t, bool value);
  bool merge(Term a, Term b);

  SignedUnionFind uf;
  PinTable pins;
  std::size_t direct_pins = 0;
  std::size_t unions = 0;
  /// Append-only log of class changes for incremental consumers:
  /// (root, root) for a pin, (surviving root, absorbed root) for a union.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> changes;
};

RuleOutcome and_rules(const AndGate& gate, ReductionState& state);
RuleOutcome xor_rules(const XorGate& gate, ReductionState& state);

struct GateRef {
  enum class Kind { And, Xor };
  Kind kind;
  std::size_t index;
};

struct CrossFinding {
  GateRef gate;
  RuleOutcome outcome;
  /// False when the facts are implied by the gate but do not replace it.
  bool retire = true;
};

/// Deductions that need more than one gate: AND rules re-fired on gates that
/// share a variable with a resolved XOR (`touched`), structurally identical
/// gates, and half-adder pairs (XOR and AND over the same inputs, whose
/// outputs can never both be 1). `alive_*` select the residual gates.
std::vector<CrossFinding> cross_infer(const ConstraintSystem& cs, const std::vector<bool>& alive_ands,
                                      const std::vector<bool>& alive_xors,
                                      const std::vector<bool>& touched, ReductionState& state);

struct ResidualGate {
  Term out, in1, in2;
  /// Index of the gate in the raw system's ands/xors list.
  std::size_t source;
};

struct ReductionStats {
  std::size_t n_free = 0;
  std::size_t n_pinned = 0;
  std::size_t n_merged = 0;
  std::size_t iterations = 0;
  /// Chronological counters: pins written onto a then-root, and class unions.
  std::size_t direct_pins = 0;
  std::size_t unions = 0;
};

/// Output of preprocessing: residual gates over canonical terms plus the
/// equivalence and pin tables needed to decode solutions.
struct ReducedSystem {
  unsigned n_p = 0;
  unsigned n_q = 0;
  Natural n;
  std::size_t raw_vars = 0;
  std::vector<std::uint32_t> column_of;

  SignedUnionFind uf;
  PinTable pins;
  std::vector<ResidualGate> residual_ands;
  std::vector<ResidualGate> residual_xors;
  ReductionStats stats;
  /// False for the pins-only bypass.
  bool reduced = true;

  Term resolve(VarId v) const;
  VarId p_bit(unsigned i) const { return VarId{i}; }
  VarId q_bit(unsigned j) const { return VarId{n_p + j}; }

  /// Free roots referenced by a residual gate or by an input bit, ascending.
  /// These become CNF variables 1..n and Ising spins 1..n in this order.
  std::vector<VarId> physical_vars() const;
};

/// Runs pin propagation, AND rules, XOR rules and cross inference, in that
/// order, until a full cycle learns nothing. `trace` receives one
/// `CYCLE n RULE name VARS ...` line per firing.
/// Only gates whose canonical triple changed since their last evaluation are
/// revisited, which yields exactly the result and trace of full sweeps.
ReducedSystem reduce_to_fixpoint(const ConstraintSystem& cs, std::ostream* trace = nullptr);

/// Same schedule, re-evaluating every live gate on every pass. Reference for tests.
ReducedSystem reduce_by_full_sweeps(const ConstraintSystem& cs, std::ostream* trace = nullptr);

/// Bypass: every raw gate survives with pinned variables substituted.
ReducedSystem pins_only(const ConstraintSystem& cs);

/// Every raw gate over raw variables, no pins. Used for structural size checks.
ReducedSystem unpinned(const ConstraintSystem& cs);

}  // namespace factorsat
