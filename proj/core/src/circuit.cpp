// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/circuit.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>

#include "factorsat/error.hpp"

namespace factorsat {

std::uint64_t pp_count(std::uint64_t k, unsigned n_p, unsigned n_q) {
  const std::uint64_t last = static_cast<std::uint64_t>(n_p) + n_q - 2;
  if (n_p == 0 || n_q == 0 || k > last) {
    throw Error("column index " + std::to_string(k) + " outside [0, " + std::to_string(last) + "]");
  }
  return std::min({k + 1, std::uint64_t{n_p}, std::uint64_t{n_q}, last + 1 - k});
}

std::vector<std::uint64_t> column_profile(unsigned n_p, unsigned n_q) {
  if (n_p < 2 || n_q < 2) throw Error("column_profile needs n_p, n_q >= 2");
  const std::uint64_t last_pp = static_cast<std::uint64_t>(n_p) + n_q - 2;
  std::vector<std::uint64_t> m{1};
  for (std::uint64_t k = 0;; ++k) {
    const std::uint64_t pp = k + 1 <= last_pp ? pp_count(k + 1, n_p, n_q) : 0;
    const std::uint64_t carries = m.back() > 0 ? m.back() - 1 : 0;
    const std::uint64_t next = pp + carries;
    if (next == 0) break;
    m.push_back(next);
  }
  return m;
}

ConstraintSystem build_circuit(unsigned n_p, unsigned n_q, const BitString& n_bits) {
  if (n_p == 0 || n_q == 0) throw Error("factor bit-lengths must be positive");
  const std::size_t width = static_cast<std::size_t>(n_p) + n_q;
  if (n_bits.size() + 1 < width || n_bits.size() > width) {
    throw Error("N has " + std::to_string(n_bits.size()) + " bits; expected " +
                std::to_string(width - 1) + " or " + std::to_string(width));
  }

  ConstraintSystem cs;
  cs.n_p = n_p;
  cs.n_q = n_q;
  cs.n = from_bits(n_bits);

  auto new_var = [&cs](VarKind kind, std::uint32_t column) {
    cs.vars.push_back(kind);
    cs.column_of.push_back(column);
    return VarId{static_cast<std::uint32_t>(cs.vars.size() - 1)};
  };

  for (unsigned i = 0; i < n_p; ++i) new_var(InputP{i}, i);
  for (unsigned j = 0; j < n_q; ++j) new_var(InputQ{j}, j);

  std::vector<std::deque<VarId>> columns(width);
  for (std::size_t k = 0; k + 1 < width; ++k) {
    for (unsigned i = 0; i < n_p; ++i) {
      if (k < i || k - i >= n_q) continue;
      const auto j = static_cast<unsigned>(k - i);
      VarId a = new_var(PartialProduct{i, j}, static_cast<std::uint32_t>(k));
      cs.ands.push_back({a, cs.p_bit(i), cs.q_bit(j)});
      columns[k].push_back(a);
    }
  }

  std::uint32_t serial = 0;
  for (std::size_t k = 0; k < columns.size() && !columns[k].empty(); ++k) {
    if (k + 1 == columns.size() && columns[k].size() > 1) columns.emplace_back();
    auto& queue = columns[k];
    cs.column_entries.push_back(queue.size());
    cs.column_contractions.push_back(queue.size() - 1);
    const auto col = static_cast<std::uint32_t>(k);
    while (queue.size() > 1) {
      const VarId x = queue.front();
      queue.pop_front();
      const VarId y = queue.front();
      queue.pop_front();
      const VarId sum = new_var(Sum{serial}, col);
      const VarId carry = new_var(Carry{serial}, col + 1);
      ++serial;
      cs.xors.push_back({sum, x, y});
      cs.ands.push_back({carry, x, y});
      queue.push_back(sum);
      columns[k + 1].push_back(carry);
    }
    // Columns past the top bit of N must come out 0.
    const bool nk = k < n_bits.size() && n_bits[k];
    cs.pins.push_back({queue.front(), nk});
  }
  return cs;
}

ConstraintSystem build_circuit(const Natural& p, const Natural& q) {
  return build_circuit(static_cast<unsigned>(p.bit_length()), static_cast<unsigned>(q.bit_length()),
                       to_bits(p * q));
}

std::vector<std::uint8_t> planted_assignment(const ConstraintSystem& cs, const BitString& p_bits,
                                             const BitString& q_bits) {
  if (p_bits.size() != cs.n_p || q_bits.size() != cs.n_q) {
    throw Error("factor bit-lengths do not match the circuit");
  }
  std::vector<std::uint8_t> value(cs.num_vars(), 0);
  for (unsigned i = 0; i < cs.n_p; ++i) value[cs.p_bit(i).index] = p_bits.bits[i];
  for (unsigned j = 0; j < cs.n_q; ++j) value[cs.q_bit(j).index] = q_bits.bits[j];

  const std::size_t n_pp = cs.num_partial_products();
  for (std::size_t g = 0; g < n_pp; ++g) {
    const AndGate& a = cs.ands[g];
    value[a.out.index] = value[a.in1.index] & value[a.in2.index];
  }
  for (std::size_t t = 0; t < cs.xors.size(); ++t) {
    const XorGate& x = cs.xors[t];
    const AndGate& c = cs.ands[n_pp + t];
    value[x.out.index] = value[x.in1.index] ^ value[x.in2.index];
    value[c.out.index] = value[c.in1.index] & value[c.in2.index];
  }
  for (const Pin& pin : cs.pins) {
    if ((value[pin.var.index] != 0) != pin.value) {
      throw std::logic_error("planted evaluation contradicts pin on var " +
                             std::to_string(pin.var.index));
    }
  }
  return value;
}

void write_circuit_dump(const ConstraintSystem& cs, std::ostream& out) {
  for (const AndGate& g : cs.ands) {
    out << "AND " << g.out.index << ' ' << g.in1.index << ' ' << g.in2.index << '\n';
  }
  for (const XorGate& g : cs.xors) {
    out << "XOR " << g.out.index << ' ' << g.in1.index << ' ' << g.in2.index << '\n';
  }
  for (const Pin& p : cs.pins) out << "PIN " << p.var.index << ' ' << (p.value ? 1 : 0) << '\n';
}

}  // namespace factorsat
