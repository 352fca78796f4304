// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/reduce.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <tuple>

#include "factorsat/error.hpp"

namespace factorsat {

// ---------------------------------------------------------------------------
// SignedUnionFind / PinTable
// ---------------------------------------------------------------------------

SignedUnionFind::SignedUnionFind(std::size_t n) : parent_(n), parity_(n, 0) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
}

Lit SignedUnionFind::find(VarId v) const {
  std::uint32_t x = v.index;
  bool sign = false;
  while (parent_[x] != x) {
    sign = sign != (parity_[x] != 0);
    x = parent_[x];
  }
  return {VarId{x}, sign};
}

Lit SignedUnionFind::find(VarId v) {
  const Lit root = std::as_const(*this).find(v);
  // Second pass: point every node on the path straight at the root.
  std::uint32_t x = v.index;
  bool sign = root.negated;
  while (parent_[x] != x) {
    const std::uint32_t next = parent_[x];
    const bool next_sign = sign != (parity_[x] != 0);
    parent_[x] = root.var.index;
    parity_[x] = sign ? 1 : 0;
    x = next;
    sign = next_sign;
  }
  return root;
}

void SignedUnionFind::unite(Lit a, Lit b) {
  // value(a.var) ^ a.negated == value(b.var) ^ b.negated
  const bool parity = a.negated != b.negated;
  const auto [lo, hi] = std::minmax(a.var.index, b.var.index);
  parent_[hi] = lo;
  parity_[hi] = parity ? 1 : 0;
}

std::size_t PinTable::count() const {
  return static_cast<std::size_t>(std::count_if(value_.begin(), value_.end(),
                                                [](std::int8_t v) { return v != kUnset; }));
}

// ---------------------------------------------------------------------------
// Single-gate rules
// ---------------------------------------------------------------------------

namespace {

class OutcomeBuilder {
 public:
  explicit OutcomeBuilder(std::string_view rule) { outcome_.rule = rule; }

  OutcomeBuilder& pin(Term t, bool value) {
    if (t.is_const()) {
      if (t.value() != value) contradiction_ = true;
      return *this;
    }
    outcome_.pins.emplace_back(t, value);
    return *this;
  }

  OutcomeBuilder& merge(Term a, Term b) {
    if (a.is_const()) return pin(b, a.value());
    if (b.is_const()) return pin(a, b.value());
    if (a.var() == b.var()) {
      if (a.lit().negated != b.lit().negated) contradiction_ = true;
      return *this;
    }
    outcome_.merges.emplace_back(a, b);
    return *this;
  }

  RuleOutcome finish() {
    if (contradiction_) {
      outcome_.kind = RuleOutcome::Kind::Contradiction;
    } else if (outcome_.pins.empty() && outcome_.merges.empty()) {
      outcome_.kind = RuleOutcome::Kind::Drop;
    } else {
      outcome_.kind = RuleOutcome::Kind::Derive;
    }
    return std::move(outcome_);
  }

 private:
  RuleOutcome outcome_;
  bool contradiction_ = false;
};

bool complementary(const Term& a, const Term& b) {
  return same_var(a, b) && a.lit().negated != b.lit().negated;
}

}  // namespace

RuleOutcome and_rules(Term c, Term a, Term b) {
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    if (x.is_const() && !x.value()) return OutcomeBuilder("and_input_zero").pin(c, false).finish();
  }
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    if (x.is_const() && x.value()) return OutcomeBuilder("and_input_one").merge(c, y).finish();
  }
  if (a == b) return OutcomeBuilder("and_equal_inputs").merge(c, a).finish();
  if (complementary(a, b)) return OutcomeBuilder("and_complementary_inputs").pin(c, false).finish();
  if (c.is_const()) {
    if (c.value()) return OutcomeBuilder("and_output_one").pin(a, true).pin(b, true).finish();
    return {};  // NOT(a AND b): a genuine binary constraint
  }
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    // c = !x and c = x & y admit only x = 1, y = 0, c = 0.
    if (complementary(c, x)) {
      return OutcomeBuilder("and_output_negates_input").pin(x, true).pin(y, false).finish();
    }
  }
  // c == x leaves the implication x -> y, which has no pin or merge form.
  return {};
}

RuleOutcome xor_rules(Term c, Term a, Term b) {
  const int consts = int{c.is_const()} + int{a.is_const()} + int{b.is_const()};
  if (consts >= 2) {
    // c ^ a ^ b == 0: the free term (if any) equals the parity of the others.
    bool parity = false;
    const Term* free_term = nullptr;
    for (const Term* t : {&c, &a, &b}) {
      if (t->is_const()) {
        parity = parity != t->value();
      } else {
        free_term = t;
      }
    }
    OutcomeBuilder out("xor_constants");
    if (free_term != nullptr) return out.pin(*free_term, parity).finish();
    return out.pin(Term::constant(parity), false).finish();
  }
  if (consts == 1) {
    const Term* k = c.is_const() ? &c : (a.is_const() ? &a : &b);
    std::vector<Term> rest;
    for (const Term* t : {&c, &a, &b}) {
      if (t != k) rest.push_back(*t);
    }
    return OutcomeBuilder("xor_one_constant")
        .merge(rest[0], k->value() ? ~rest[1] : rest[1])
        .finish();
  }
  if (a == b) return OutcomeBuilder("xor_equal_inputs").pin(c, false).finish();
  if (complementary(a, b)) return OutcomeBuilder("xor_complementary_inputs").pin(c, true).finish();
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    if (c == x) return OutcomeBuilder("xor_output_equals_input").pin(y, false).finish();
    if (complementary(c, x)) return OutcomeBuilder("xor_output_negates_input").pin(y, true).finish();
  }
  return {};
}

// ---------------------------------------------------------------------------
// ReductionState
// ---------------------------------------------------------------------------

Term ReductionState::canon(VarId v) {
  const Lit root = uf.find(v);
  if (const auto value = pins.get(root.var)) return Term::constant(*value != root.negated);
  return Term::literal(root);
}

Term ReductionState::canon(Lit l) {
  const Term t = canon(l.var);
  return l.negated ? ~t : t;
}

bool ReductionState::pin(Term t, bool value) {
  const Term cur = t.is_const() ? t : canon(t.lit());
  if (cur.is_const()) {
    if (cur.value() != value) {
      throw InconsistentInstance("inconsistent instance: pin conflicts with an earlier deduction");
    }
    return false;
  }
  pins.set(cur.var(), value != cur.lit().negated);
  changes.emplace_back(cur.var().index, cur.var().index);
  ++direct_pins;
  return true;
}

bool ReductionState::merge(Term a, Term b) {
  const Term ca = a.is_const() ? a : canon(a.lit());
  const Term cb = b.is_const() ? b : canon(b.lit());
  if (ca.is_const()) return pin(cb, ca.value());
  if (cb.is_const()) return pin(ca, cb.value());
  if (ca.var() == cb.var()) {
    if (ca.lit().negated != cb.lit().negated) {
      throw InconsistentInstance("inconsistent instance: variable merged with its own negation");
    }
    return false;
  }
  uf.unite(ca.lit(), cb.lit());
  changes.emplace_back(std::min(ca.var().index, cb.var().index), std::max(ca.var().index, cb.var().index));
  ++unions;
  return true;
}

bool ReductionState::apply(const RuleOutcome& outcome) {
  if (outcome.kind == RuleOutcome::Kind::Contradiction) {
    throw InconsistentInstance("inconsistent instance: rule " + std::string(outcome.rule) +
                               " derived a contradiction");
  }
  bool changed = false;
  for (const auto& [t, v] : outcome.pins) changed |= pin(t, v);
  for (const auto& [a, b] : outcome.merges) changed |= merge(a, b);
  return changed;
}

RuleOutcome and_rules(const AndGate& gate, ReductionState& state) {
  return and_rules(state.canon(gate.out), state.canon(gate.in1), state.canon(gate.in2));
}

RuleOutcome xor_rules(const XorGate& gate, ReductionState& state) {
  return xor_rules(state.canon(gate.out), state.canon(gate.in1), state.canon(gate.in2));
}

// ---------------------------------------------------------------------------
// Cross-clause inference
// ---------------------------------------------------------------------------

namespace {

// Order-insensitive key over two literal terms.
using PairKey = std::tuple<std::uint32_t, bool, std::uint32_t, bool>;

PairKey literal_pair_key(const Term& a, const Term& b) {
  auto ka = std::pair{a.var().index, a.lit().negated};
  auto kb = std::pair{b.var().index, b.lit().negated};
  if (kb < ka) std::swap(ka, kb);
  return {ka.first, ka.second, kb.first, kb.second};
}

}  // namespace

std::vector<CrossFinding> cross_infer(const ConstraintSystem& cs, const std::vector<bool>& alive_ands,
                                      const std::vector<bool>& alive_xors,
                                      const std::vector<bool>& touched, ReductionState& state) {
  std::vector<CrossFinding> findings;
  std::vector<bool> claimed(cs.ands.size(), false);

  auto is_touched = [&](VarId v) {
    return touched[v.index] || touched[state.uf.find(v).var.index];
  };

  for (std::size_t i = 0; i < cs.ands.size(); ++i) {
    if (!alive_ands[i]) continue;
    const AndGate& g = cs.ands[i];
    if (!is_touched(g.out) && !is_touched(g.in1) && !is_touched(g.in2)) continue;
    RuleOutcome o = and_rules(g, state);
    if (o.kind == RuleOutcome::Kind::Keep) continue;
    o.rule = "cross_and_refire";
    claimed[i] = true;
    findings.push_back({{GateRef::Kind::And, i}, std::move(o), true});
  }

  // Identical AND inputs force identical outputs.
  std::map<PairKey, std::size_t> and_by_inputs;
  for (std::size_t i = 0; i < cs.ands.size(); ++i) {
    if (!alive_ands[i] || claimed[i]) continue;
    const Term c = state.canon(cs.ands[i].out);
    const Term a = state.canon(cs.ands[i].in1);
    const Term b = state.canon(cs.ands[i].in2);
    if (a.is_const() || b.is_const()) continue;
    const auto [it, inserted] = and_by_inputs.emplace(literal_pair_key(a, b), i);
    if (inserted) continue;
    RuleOutcome o = OutcomeBuilder("cross_duplicate_and").merge(c, state.canon(cs.ands[it->second].out)).finish();
    findings.push_back({{GateRef::Kind::And, i}, std::move(o), true});
  }

  // XOR outputs agree up to the parity of their input signs.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::size_t, bool>> xor_by_inputs;
  for (std::size_t i = 0; i < cs.xors.size(); ++i) {
    if (!alive_xors[i]) continue;
    const Term c = state.canon(cs.xors[i].out);
    const Term a = state.canon(cs.xors[i].in1);
    const Term b = state.canon(cs.xors[i].in2);
    if (a.is_const() || b.is_const() || c.is_const() || same_var(a, b)) continue;
    const bool parity = a.lit().negated != b.lit().negated;
    const std::pair key{std::min(a.var().index, b.var().index), std::max(a.var().index, b.var().index)};
    const auto [it, inserted] = xor_by_inputs.emplace(key, std::pair{i, parity});
    if (inserted) continue;
    const auto [first, first_parity] = it->second;
    const Term other = state.canon(cs.xors[first].out);
    RuleOutcome o = OutcomeBuilder("cross_duplicate_xor")
                        .merge(c, parity != first_parity ? ~other : other)
                        .finish();
    findings.push_back({{GateRef::Kind::Xor, i}, std::move(o), true});
  }

  // Half-adder pair: carry = x & y and sum = x ^ y are never both 1.
  std::map<PairKey, std::size_t> and_outputs;
  for (std::size_t i = 0; i < cs.ands.size(); ++i) {
    if (!alive_ands[i]) continue;
    const Term a = state.canon(cs.ands[i].in1);
    const Term b = state.canon(cs.ands[i].in2);
    if (a.is_const() || b.is_const()) continue;
    and_outputs.emplace(literal_pair_key(a, b), i);
  }
  for (std::size_t i = 0; i < cs.xors.size(); ++i) {
    if (!alive_xors[i]) continue;
    const Term s = state.canon(cs.xors[i].out);
    const Term a = state.canon(cs.xors[i].in1);
    const Term b = state.canon(cs.xors[i].in2);
    if (s.is_const() || a.is_const() || b.is_const()) continue;
    const auto it = and_outputs.find(literal_pair_key(a, b));
    if (it == and_outputs.end()) continue;
    const Term c = state.canon(cs.ands[it->second].out);
    if (c == s) {
      RuleOutcome o = OutcomeBuilder("cross_half_adder").pin(c, false).finish();
      findings.push_back({{GateRef::Kind::Xor, i}, std::move(o), false});
    }
  }
  return findings;
}

// ---------------------------------------------------------------------------
// Reduction loop
// ---------------------------------------------------------------------------

namespace {

bool gate_holds(bool kind_is_and, bool c, bool a, bool b) {
  return kind_is_and ? c == (a && b) : c == (a != b);
}

// Growable dirty set over gate ids with ordered iteration.
class DirtyBits {
 public:
  explicit DirtyBits(std::size_t n) : words_((n + 63) / 64, ~std::uint64_t{0}) {
    if (n % 64 != 0) words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  /// First set index >= from within [from, end), or end.
  std::size_t next(std::size_t from, std::size_t end) const {
    if (from >= end) return end;
    std::size_t w = from / 64;
    std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (from % 64));
    while (bits == 0) {
      if (++w * 64 >= end) return end;
      bits = words_[w];
    }
    return std::min(end, w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Gate ids: ANDs first, then XORs. Each pass keeps its own dirty set; a gate
// is dirty for a pass when its canonical triple may have changed since the
// pass last evaluated it. Rules are pure functions of that triple, so clean
// gates would return Keep and can be skipped without changing the schedule.
class Reducer {
 public:
  Reducer(const ConstraintSystem& cs, std::ostream* trace, bool full_sweeps)
      : cs_(cs),
        trace_(trace),
        full_(full_sweeps),
        n_and_(cs.ands.size()),
        n_gates_(cs.ands.size() + cs.xors.size()),
        state_(cs.num_vars()),
        alive_ands_(cs.ands.size(), true),
        alive_xors_(cs.xors.size(), true),
        pin_dirty_(n_gates_),
        rule_dirty_(n_gates_),
        index_dirty_(n_gates_),
        touched_(cs.num_vars(), false),
        next_in_class_(cs.num_vars()),
        and_key_(cs.ands.size()),
        xor_dup_key_(cs.xors.size()),
        xor_parity_(cs.xors.size(), false),
        xor_pair_key_(cs.xors.size()) {
    if (!full_) build_occurrences();
    for (std::uint32_t v = 0; v < next_in_class_.size(); ++v) next_in_class_[v] = v;
  }

  ReducedSystem run() {
    for (const Pin& p : cs_.pins) state_.pin(state_.canon(p.var), p.value);
    absorb_changes();

    std::size_t cycle = 0;
    for (bool changed = true; changed;) {
      ++cycle;
      cycle_ = cycle;
      changed = false;
      changed |= propagate_pins();
      for_each_dirty(rule_dirty_, 0, n_and_, [&](std::size_t i) {
        if (alive_ands_[i]) changed |= settle({GateRef::Kind::And, i}, and_rules(cs_.ands[i], state_), true);
      });
      clear_touched();
      for_each_dirty(rule_dirty_, n_and_, n_gates_, [&](std::size_t id) {
        const std::size_t i = id - n_and_;
        if (!alive_xors_[i]) return;
        RuleOutcome o = xor_rules(cs_.xors[i], state_);
        if (o.kind == RuleOutcome::Kind::Derive) mark_touched(cs_.xors[i], o);
        changed |= settle({GateRef::Kind::Xor, i}, std::move(o), true);
      });
      std::vector<CrossFinding> findings =
          full_ ? cross_infer(cs_, alive_ands_, alive_xors_, touched_, state_) : cross_infer_incremental();
      for (CrossFinding& f : findings) {
        if (!alive(f.gate)) continue;
        changed |= settle(f.gate, std::move(f.outcome), f.retire);
      }
    }
    return finish(cycle);
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffU;

  std::size_t id_of(GateRef g) const { return g.kind == GateRef::Kind::And ? g.index : n_and_ + g.index; }

  bool alive(GateRef g) const {
    return g.kind == GateRef::Kind::And ? alive_ands_[g.index] : alive_xors_[g.index];
  }

  std::tuple<VarId, VarId, VarId> raw_vars(GateRef g) const {
    if (g.kind == GateRef::Kind::And) {
      const AndGate& a = cs_.ands[g.index];
      return {a.out, a.in1, a.in2};
    }
    const XorGate& x = cs_.xors[g.index];
    return {x.out, x.in1, x.in2};
  }

  std::tuple<Term, Term, Term> canon_triple(GateRef g) {
    const auto [o, x, y] = raw_vars(g);
    return {state_.canon(o), state_.canon(x), state_.canon(y)};
  }

  // Visits dirty ids in [begin, end) in increasing order, clearing each bit
  // before the callback. Bits set behind the cursor wait for the next pass.
  template <typename Fn>
  void for_each_dirty(DirtyBits& bits, std::size_t begin, std::size_t end, Fn&& fn) {
    if (full_) {
      for (std::size_t i = begin; i < end; ++i) fn(i);
      return;
    }
    for (std::size_t i = bits.next(begin, end); i < end; i = bits.next(i + 1, end)) {
      bits.reset(i);
      fn(i);
    }
  }

  void build_occurrences() {
    occ_start_.assign(cs_.num_vars() + 1, 0);
    auto each = [&](auto&& fn) {
      for (std::size_t i = 0; i < cs_.ands.size(); ++i) {
        for (VarId v : {cs_.ands[i].out, cs_.ands[i].in1, cs_.ands[i].in2}) fn(v.index, i);
      }
      for (std::size_t i = 0; i < cs_.xors.size(); ++i) {
        for (VarId v : {cs_.xors[i].out, cs_.xors[i].in1, cs_.xors[i].in2}) fn(v.index, n_and_ + i);
      }
    };
    each([&](std::uint32_t v, std::size_t) { ++occ_start_[v + 1]; });
    for (std::size_t v = 0; v < cs_.num_vars(); ++v) occ_start_[v + 1] += occ_start_[v];
    occ_.resize(occ_start_.back());
    std::vector<std::uint32_t> fill(occ_start_.begin(), occ_start_.end() - 1);
    each([&](std::uint32_t v, std::size_t id) { occ_[fill[v]++] = static_cast<std::uint32_t>(id); });
  }

  void mark_gate(std::size_t id) {
    pin_dirty_.set(id);
    rule_dirty_.set(id);
    index_dirty_.set(id);
  }

  void mark_class(std::uint32_t root) {
    std::uint32_t v = root;
    do {
      for (std::uint32_t k = occ_start_[v]; k < occ_start_[v + 1]; ++k) mark_gate(occ_[k]);
      v = next_in_class_[v];
    } while (v != root);
  }

  // A pin changes the canonical term of every class member; a union changes
  // only the members of the absorbed class.
  void absorb_changes() {
    if (!full_) {
      for (const auto& [root, other] : state_.changes) {
        mark_class(other);
        if (root != other) std::swap(next_in_class_[root], next_in_class_[other]);
      }
    }
    state_.changes.clear();
  }

  void mark_touched(const XorGate& g, const RuleOutcome& o) {
    auto touch = [&](std::uint32_t v) {
      if (!touched_[v]) {
        touched_[v] = true;
        touched_list_.push_back(v);
      }
    };
    for (VarId v : {g.out, g.in1, g.in2}) touch(v.index);
    for (const auto& [t, value] : o.pins) touch(t.var().index);
    for (const auto& [a, b] : o.merges) {
      touch(a.var().index);
      touch(b.var().index);
    }
  }

  void clear_touched() {
    for (std::uint32_t v : touched_list_) touched_[v] = false;
    touched_list_.clear();
  }

  // Pass 1: substitute constants everywhere; retire gates that became fully constant.
  bool propagate_pins() {
    bool changed = false;
    for_each_dirty(pin_dirty_, 0, n_gates_, [&](std::size_t id) {
      const GateRef g = id < n_and_ ? GateRef{GateRef::Kind::And, id} : GateRef{GateRef::Kind::Xor, id - n_and_};
      if (alive(g)) changed |= retire_if_constant(g);
    });
    return changed;
  }

  bool retire_if_constant(GateRef g) {
    const auto [c, a, b] = canon_triple(g);
    if (!c.is_const() || !a.is_const() || !b.is_const()) return false;
    if (!gate_holds(g.kind == GateRef::Kind::And, c.value(), a.value(), b.value())) {
      throw InconsistentInstance("inconsistent instance: constant gate violated at var " +
                                 std::to_string(std::get<0>(raw_vars(g)).index));
    }
    RuleOutcome done;
    done.kind = RuleOutcome::Kind::Drop;
    done.rule = "pin_resolved";
    return settle(g, std::move(done), true);
  }

  bool settle(GateRef g, RuleOutcome o, bool retire) {
    if (o.kind == RuleOutcome::Kind::Keep) return false;
    if (o.kind == RuleOutcome::Kind::Contradiction) {
      throw InconsistentInstance("inconsistent instance: rule " + std::string(o.rule) +
                                 " at var " + std::to_string(std::get<0>(raw_vars(g)).index));
    }
    const bool learned = state_.apply(o);
    absorb_changes();
    if (trace_ != nullptr) {
      const auto [a, b, c] = raw_vars(g);
      *trace_ << "CYCLE " << cycle_ << " RULE " << o.rule << " VARS " << a.index << ' ' << b.index
              << ' ' << c.index << '\n';
    }
    if (retire) {
      (g.kind == GateRef::Kind::And ? alive_ands_ : alive_xors_)[g.index] = false;
      if (!full_) index_dirty_.set(id_of(g));
      return true;
    }
    return learned;
  }

  // Incremental twin of cross_infer. The gate indexes are refreshed for dirty
  // gates only. After each cross step every duplicate group has been reduced
  // to one live gate, so new duplicates and new half-adder matches always
  // involve a refreshed gate or a key whose first AND changed.
  std::vector<CrossFinding> cross_infer_incremental() {
    std::vector<CrossFinding> findings;
    auto is_touched = [&](VarId v) { return touched_[v.index] || touched_[state_.uf.find(v).var.index]; };

    std::vector<std::size_t> claimed;
    for_each_dirty(rule_dirty_, 0, n_and_, [&](std::size_t i) {
      if (!alive_ands_[i]) return;
      const AndGate& g = cs_.ands[i];
      if (!is_touched(g.out) && !is_touched(g.in1) && !is_touched(g.in2)) {
        rule_dirty_.set(i);  // untouched: the next AND pass still owes it a visit
        return;
      }
      RuleOutcome o = and_rules(g, state_);
      if (o.kind == RuleOutcome::Kind::Keep) return;
      o.rule = "cross_and_refire";
      claimed.push_back(i);
      findings.push_back({{GateRef::Kind::And, i}, std::move(o), true});
    });
    for (std::size_t i : claimed) claimed_.insert(i);

    // Refresh the AND index and collect keys whose membership or first gate may have changed.
    std::set<PairKey> and_keys_new;
    std::set<PairKey> and_keys_affected;
    for_each_dirty(index_dirty_, 0, n_and_, [&](std::size_t i) {
      std::optional<PairKey> key;
      if (alive_ands_[i]) {
        const Term a = state_.canon(cs_.ands[i].in1);
        const Term b = state_.canon(cs_.ands[i].in2);
        if (!a.is_const() && !b.is_const()) key = literal_pair_key(a, b);
      }
      if (and_key_[i]) {
        and_keys_affected.insert(*and_key_[i]);
        erase_member(and_index_, *and_key_[i], i);
      }
      and_key_[i] = key;
      if (key) {
        and_index_[*key].insert(static_cast<std::uint32_t>(i));
        and_keys_new.insert(*key);
        and_keys_affected.insert(*key);
      }
    });

    std::vector<CrossFinding> dup_and;
    for (const PairKey& key : and_keys_new) {
      const auto it = and_index_.find(key);
      if (it == and_index_.end()) continue;
      std::uint32_t first = kNone;
      for (std::uint32_t i : it->second) {
        if (claimed_.count(i) != 0) continue;
        if (first == kNone) {
          first = i;
          continue;
        }
        RuleOutcome o = OutcomeBuilder("cross_duplicate_and")
                            .merge(state_.canon(cs_.ands[i].out), state_.canon(cs_.ands[first].out))
                            .finish();
        dup_and.push_back({{GateRef::Kind::And, i}, std::move(o), true});
      }
    }
    append_sorted(findings, dup_and);

    // Refresh both XOR indexes.
    std::set<std::pair<std::uint32_t, std::uint32_t>> xor_keys_new;
    std::set<std::size_t> ha_candidates;
    for_each_dirty(index_dirty_, n_and_, n_gates_, [&](std::size_t id) {
      const std::size_t i = id - n_and_;
      std::optional<std::pair<std::uint32_t, std::uint32_t>> dup_key;
      std::optional<PairKey> pair_key;
      if (alive_xors_[i]) {
        const auto [c, a, b] = canon_triple({GateRef::Kind::Xor, i});
        if (!a.is_const() && !b.is_const()) {
          pair_key = literal_pair_key(a, b);
          if (!c.is_const() && !same_var(a, b)) {
            dup_key = std::pair{std::min(a.var().index, b.var().index), std::max(a.var().index, b.var().index)};
            xor_parity_[i] = a.lit().negated != b.lit().negated;
          }
        }
        ha_candidates.insert(i);
      }
      if (xor_dup_key_[i]) erase_member(xor_index_, *xor_dup_key_[i], i);
      if (xor_pair_key_[i]) erase_member(xor_pair_index_, *xor_pair_key_[i], i);
      xor_dup_key_[i] = dup_key;
      xor_pair_key_[i] = pair_key;
      if (dup_key) {
        xor_index_[*dup_key].insert(static_cast<std::uint32_t>(i));
        xor_keys_new.insert(*dup_key);
      }
      if (pair_key) xor_pair_index_[*pair_key].insert(static_cast<std::uint32_t>(i));
    });

    std::vector<CrossFinding> dup_xor;
    for (const auto& key : xor_keys_new) {
      const auto it = xor_index_.find(key);
      if (it == xor_index_.end() || it->second.size() < 2) continue;
      const std::uint32_t first = *it->second.begin();
      const Term other = state_.canon(cs_.xors[first].out);
      for (auto m = std::next(it->second.begin()); m != it->second.end(); ++m) {
        const Term c = state_.canon(cs_.xors[*m].out);
        RuleOutcome o = OutcomeBuilder("cross_duplicate_xor")
                            .merge(c, xor_parity_[*m] != xor_parity_[first] ? ~other : other)
                            .finish();
        dup_xor.push_back({{GateRef::Kind::Xor, *m}, std::move(o), true});
      }
    }
    append_sorted(findings, dup_xor);

    for (const PairKey& key : and_keys_affected) {
      const auto it = xor_pair_index_.find(key);
      if (it != xor_pair_index_.end()) ha_candidates.insert(it->second.begin(), it->second.end());
    }
    for (std::size_t i : ha_candidates) {
      if (!alive_xors_[i] || !xor_pair_key_[i]) continue;
      const Term s = state_.canon(cs_.xors[i].out);
      if (s.is_const()) continue;
      const auto it = and_index_.find(*xor_pair_key_[i]);
      if (it == and_index_.end() || it->second.empty()) continue;
      const Term c = state_.canon(cs_.ands[*it->second.begin()].out);
      if (c == s) {
        RuleOutcome o = OutcomeBuilder("cross_half_adder").pin(c, false).finish();
        findings.push_back({{GateRef::Kind::Xor, i}, std::move(o), false});
      }
    }
    claimed_.clear();
    return findings;
  }

  template <typename Map, typename Key>
  static void erase_member(Map& index, const Key& key, std::size_t i) {
    const auto it = index.find(key);
    it->second.erase(static_cast<std::uint32_t>(i));
    if (it->second.empty()) index.erase(it);
  }

  static void append_sorted(std::vector<CrossFinding>& out, std::vector<CrossFinding>& part) {
    std::sort(part.begin(), part.end(),
              [](const CrossFinding& a, const CrossFinding& b) { return a.gate.index < b.gate.index; });
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }

  ReducedSystem finish(std::size_t cycles) {
    ReducedSystem rs;
    rs.n_p = cs_.n_p;
    rs.n_q = cs_.n_q;
    rs.n = cs_.n;
    rs.raw_vars = cs_.num_vars();
    rs.column_of = cs_.column_of;
    for (std::size_t i = 0; i < cs_.ands.size(); ++i) {
      if (!alive_ands_[i]) continue;
      const AndGate& g = cs_.ands[i];
      rs.residual_ands.push_back({state_.canon(g.out), state_.canon(g.in1), state_.canon(g.in2), i});
    }
    for (std::size_t i = 0; i < cs_.xors.size(); ++i) {
      if (!alive_xors_[i]) continue;
      const XorGate& g = cs_.xors[i];
      rs.residual_xors.push_back({state_.canon(g.out), state_.canon(g.in1), state_.canon(g.in2), i});
    }
    for (std::uint32_t v = 0; v < cs_.num_vars(); ++v) state_.uf.find(VarId{v});
    rs.stats.iterations = cycles;
    rs.stats.direct_pins = state_.direct_pins;
    rs.stats.unions = state_.unions;
    rs.uf = std::move(state_.uf);
    rs.pins = std::move(state_.pins);
    for (std::uint32_t v = 0; v < rs.raw_vars; ++v) {
      const Lit root = rs.uf.find(VarId{v});
      if (rs.pins.contains(root.var)) {
        ++rs.stats.n_pinned;
      } else if (root.var.index != v) {
        ++rs.stats.n_merged;
      } else {
        ++rs.stats.n_free;
      }
    }
    return rs;
  }

  const ConstraintSystem& cs_;
  std::ostream* trace_;
  bool full_;
  std::size_t n_and_;
  std::size_t n_gates_;
  ReductionState state_;
  std::vector<bool> alive_ands_;
  std::vector<bool> alive_xors_;
  std::size_t cycle_ = 0;

  DirtyBits pin_dirty_;
  DirtyBits rule_dirty_;
  DirtyBits index_dirty_;
  std::vector<bool> touched_;
  std::vector<std::uint32_t> touched_list_;
  // Circular lists threading the members of each class.
  std::vector<std::uint32_t> next_in_class_;
  std::vector<std::uint32_t> occ_start_;
  std::vector<std::uint32_t> occ_;

  std::vector<std::optional<PairKey>> and_key_;
  std::map<PairKey, std::set<std::uint32_t>> and_index_;
  std::set<std::size_t> claimed_;
  std::vector<std::optional<std::pair<std::uint32_t, std::uint32_t>>> xor_dup_key_;
  std::vector<bool> xor_parity_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::set<std::uint32_t>> xor_index_;
  std::vector<std::optional<PairKey>> xor_pair_key_;
  std::map<PairKey, std::set<std::uint32_t>> xor_pair_index_;
};

ReducedSystem passthrough(const ConstraintSystem& cs, bool apply_pins) {
  ReducedSystem rs;
  rs.n_p = cs.n_p;
  rs.n_q = cs.n_q;
  rs.n = cs.n;
  rs.raw_vars = cs.num_vars();
  rs.column_of = cs.column_of;
  rs.uf = SignedUnionFind(cs.num_vars());
  rs.pins = PinTable(cs.num_vars());
  rs.reduced = false;
  if (apply_pins) {
    for (const Pin& p : cs.pins) rs.pins.set(p.var, p.value);
  }
  for (std::size_t i = 0; i < cs.ands.size(); ++i) {
    const AndGate& g = cs.ands[i];
    rs.residual_ands.push_back({rs.resolve(g.out), rs.resolve(g.in1), rs.resolve(g.in2), i});
  }
  for (std::size_t i = 0; i < cs.xors.size(); ++i) {
    const XorGate& g = cs.xors[i];
    rs.residual_xors.push_back({rs.resolve(g.out), rs.resolve(g.in1), rs.resolve(g.in2), i});
  }
  rs.stats.n_pinned = rs.pins.count();
  rs.stats.n_free = cs.num_vars() - rs.stats.n_pinned;
  rs.stats.direct_pins = rs.stats.n_pinned;
  return rs;
}

}  // namespace

Term ReducedSystem::resolve(VarId v) const {
  const Lit root = uf.find(v);
  if (const auto value = pins.get(root.var)) return Term::constant(*value != root.negated);
  return Term::literal(root);
}

std::vector<VarId> ReducedSystem::physical_vars() const {
  std::vector<bool> used(raw_vars, false);
  auto mark = [&](const Term& t) {
    if (!t.is_const()) used[t.var().index] = true;
  };
  for (const auto* gates : {&residual_ands, &residual_xors}) {
    for (const ResidualGate& g : *gates) {
      mark(g.out);
      mark(g.in1);
      mark(g.in2);
    }
  }
  for (std::uint32_t v = 0; v < n_p + n_q; ++v) mark(resolve(VarId{v}));
  std::vector<VarId> out;
  for (std::uint32_t v = 0; v < raw_vars; ++v) {
    if (used[v]) out.push_back(VarId{v});
  }
  return out;
}

ReducedSystem reduce_to_fixpoint(const ConstraintSystem& cs, std::ostream* trace) {
  return Reducer(cs, trace, false).run();
}

ReducedSystem reduce_by_full_sweeps(const ConstraintSystem& cs, std::ostream* trace) {
  return Reducer(cs, trace, true).run();
}

ReducedSystem pins_only(const ConstraintSystem& cs) { return passthrough(cs, true); }

ReducedSystem unpinned(const ConstraintSystem& cs) { return passthrough(cs, false); }

}  // namespace factorsat
