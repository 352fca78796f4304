// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/ising.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "factorsat/error.hpp"

namespace factorsat {

GadgetTerms and_gadget_terms() {
  return {3, {{0, -1}, {1, -1}, {2, 2}}, {{0, 1, 1}, {0, 2, -2}, {1, 2, -2}}};
}

GadgetTerms xor_gadget_terms() {
  return {4,
          {{0, -1}, {1, -1}, {2, 1}, {3, 2}},
          {{0, 1, 1}, {0, 2, -1}, {1, 2, -1}, {0, 3, -2}, {1, 3, -2}, {2, 3, 2}}};
}

std::int64_t evaluate(const GadgetTerms& terms, const std::array<int, 4>& spins) {
  std::int64_t e = terms.constant;
  for (const auto& [i, v] : terms.fields) e += v * spins[static_cast<std::size_t>(i)];
  for (const auto& [i, j, v] : terms.couplings) {
    e += v * spins[static_cast<std::size_t>(i)] * spins[static_cast<std::size_t>(j)];
  }
  return e;
}

int planted_aux(int s1, int s2) { return (s1 == 1 && s2 == 1) ? 1 : -1; }

std::int64_t Gadget::energy(const SpinConfig& s) const {
  std::array<int, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) v[i] = operands[i].value(s);
  return evaluate(kind == Kind::And ? and_gadget_terms() : xor_gadget_terms(), v);
}

bool Gadget::violated(const SpinConfig& s) const {
  const bool a = operands[0].value(s) > 0;
  const bool b = operands[1].value(s) > 0;
  const bool c = operands[2].value(s) > 0;
  return kind == Kind::And ? c != (a && b) : c != (a != b);
}

IsingModel assemble(const ReducedSystem& rs) {
  IsingModel m;
  m.n_p = rs.n_p;
  m.n_q = rs.n_q;
  m.n = rs.n;

  std::map<std::uint32_t, int> spin_of;
  for (VarId v : rs.physical_vars()) {
    spin_of[v.index] = static_cast<int>(m.spin_origin.size());
    m.spin_origin.push_back({SpinOrigin::Kind::Physical, v.index});
  }
  m.n_physical = m.spin_origin.size();
  for (std::size_t t = 0; t < rs.residual_xors.size(); ++t) {
    m.spin_origin.push_back({SpinOrigin::Kind::XorAux, static_cast<std::uint32_t>(t)});
  }
  m.n_spins = m.spin_origin.size();

  auto operand = [&](const Term& t) {
    if (t.is_const()) return SpinOperand{-1, t.value() ? 1 : -1};
    return SpinOperand{spin_of.at(t.var().index), t.lit().negated ? -1 : 1};
  };

  for (std::size_t i = 0; i < rs.residual_ands.size(); ++i) {
    const ResidualGate& g = rs.residual_ands[i];
    m.gadgets.push_back({Gadget::Kind::And, {operand(g.in1), operand(g.in2), operand(g.out), SpinOperand{}}, i});
  }
  for (std::size_t t = 0; t < rs.residual_xors.size(); ++t) {
    const ResidualGate& g = rs.residual_xors[t];
    const SpinOperand aux{static_cast<int>(m.n_physical + t), 1};
    m.gadgets.push_back({Gadget::Kind::Xor, {operand(g.in1), operand(g.in2), operand(g.out), aux}, t});
  }

  for (const Gadget& g : m.gadgets) {
    const GadgetTerms terms = g.kind == Gadget::Kind::And ? and_gadget_terms() : xor_gadget_terms();
    m.e0 += terms.constant;
    for (const auto& [i, v] : terms.fields) {
      const SpinOperand& x = g.operands[static_cast<std::size_t>(i)];
      if (x.spin < 0) {
        m.e0 += v * x.coeff;
      } else {
        m.h[static_cast<std::uint32_t>(x.spin)] += v * x.coeff;
      }
    }
    for (const auto& [i, j, v] : terms.couplings) {
      const SpinOperand& x = g.operands[static_cast<std::size_t>(i)];
      const SpinOperand& y = g.operands[static_cast<std::size_t>(j)];
      const std::int64_t w = v * x.coeff * y.coeff;
      if (x.spin < 0 && y.spin < 0) {
        m.e0 += w;
      } else if (x.spin < 0) {
        m.h[static_cast<std::uint32_t>(y.spin)] += w;
      } else if (y.spin < 0) {
        m.h[static_cast<std::uint32_t>(x.spin)] += w;
      } else if (x.spin == y.spin) {
        m.e0 += w;  // s^2 = 1
      } else {
        const auto lo = static_cast<std::uint32_t>(std::min(x.spin, y.spin));
        const auto hi = static_cast<std::uint32_t>(std::max(x.spin, y.spin));
        m.J[{lo, hi}] += w;
        ++m.raw_couplings;
      }
    }
  }
  std::erase_if(m.h, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(m.J, [](const auto& kv) { return kv.second == 0; });
  return m;
}

std::int64_t energy(const IsingModel& m, const SpinConfig& s) {
  if (s.size() != m.n_spins) {
    throw Error("spin configuration has " + std::to_string(s.size()) + " entries, model has " +
                std::to_string(m.n_spins));
  }
  std::int64_t e = m.e0;
  for (const auto& [i, v] : m.h) e += v * s[i];
  for (const auto& [ij, v] : m.J) e += v * s[ij.first] * s[ij.second];
  return e;
}

std::int64_t gadget_energy_sum(const IsingModel& m, const SpinConfig& s) {
  std::int64_t e = 0;
  for (const Gadget& g : m.gadgets) e += g.energy(s);
  return e;
}

std::size_t count_violated(const IsingModel& m, const SpinConfig& s) {
  return static_cast<std::size_t>(
      std::count_if(m.gadgets.begin(), m.gadgets.end(), [&](const Gadget& g) { return g.violated(s); }));
}

SpinConfig planted_spin_config(const IsingModel& m, const std::vector<std::uint8_t>& circuit_values) {
  SpinConfig s(m.n_spins, 1);
  for (std::size_t i = 0; i < m.n_physical; ++i) {
    s[i] = circuit_values.at(m.spin_origin[i].ref) != 0 ? 1 : -1;
  }
  for (const Gadget& g : m.gadgets) {
    if (g.kind != Gadget::Kind::Xor) continue;
    s[static_cast<std::size_t>(g.operands[3].spin)] =
        static_cast<std::int8_t>(planted_aux(g.operands[0].value(s), g.operands[1].value(s)));
  }
  for (const Gadget& g : m.gadgets) {
    if (g.energy(s) != 0) throw std::logic_error("planted configuration excites a gadget");
  }
  return s;
}

GraphStats graph_stats(const IsingModel& m, const std::vector<std::uint32_t>& column_of) {
  GraphStats st;
  std::vector<std::size_t> degree(m.n_spins, 0);
  for (const auto& [ij, v] : m.J) {
    ++degree[ij.first];
    ++degree[ij.second];
    ++st.n_edges;
    if (ij.second < m.n_physical) {
      const std::uint32_t a = column_of.at(m.spin_origin[ij.first].ref);
      const std::uint32_t b = column_of.at(m.spin_origin[ij.second].ref);
      ++st.column_distance_histogram[a > b ? a - b : b - a];
    }
  }
  for (std::size_t d : degree) {
    ++st.degree_histogram[d];
    st.max_degree = std::max(st.max_degree, d);
  }
  return st;
}

void write_ising(const IsingModel& m, const SpinConfig* planted, std::ostream& out) {
  out << "# n_spins " << m.n_spins << '\n'
      << "# E0 " << m.e0 << '\n'
      << "# ground_energy " << m.ground_energy << '\n'
      << "# gap " << m.gap << '\n'
      << "# d " << std::max(m.n_p, m.n_q) << '\n'
      << "# n_p " << m.n_p << '\n'
      << "# n_q " << m.n_q << '\n'
      << "# N " << m.n.to_decimal() << '\n';
  for (const auto& [i, v] : m.h) out << "h " << i + 1 << ' ' << v << '\n';
  for (const auto& [ij, v] : m.J) out << "J " << ij.first + 1 << ' ' << ij.second + 1 << ' ' << v << '\n';
  if (planted != nullptr) {
    for (std::size_t i = 0; i < planted->size(); ++i) {
      out << "S " << i + 1 << ' ' << ((*planted)[i] > 0 ? "+1" : "-1") << '\n';
    }
  }
  if (!out) throw Error("failed to write Ising model");
}

std::pair<IsingModel, std::optional<SpinConfig>> parse_ising(std::istream& in) {
  IsingModel m;
  std::optional<SpinConfig> planted;
  bool have_spins = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&]() { throw ParseError("bad Ising line " + std::to_string(line_no) + ": " + line); };
  auto spin_index = [&](long i) {
    if (!have_spins || i < 1 || static_cast<std::size_t>(i) > m.n_spins) fail();
    return static_cast<std::uint32_t>(i - 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "#") {
      std::string key;
      std::string value;
      if (!(ls >> key >> value)) fail();
      try {
        if (key == "n_spins") {
          m.n_spins = std::stoull(value);
          have_spins = true;
        } else if (key == "E0") {
          m.e0 = std::stoll(value);
        } else if (key == "ground_energy") {
          m.ground_energy = std::stoll(value);
        } else if (key == "gap") {
          m.gap = std::stoll(value);
        } else if (key == "n_p") {
          m.n_p = static_cast<unsigned>(std::stoul(value));
        } else if (key == "n_q") {
          m.n_q = static_cast<unsigned>(std::stoul(value));
        } else if (key == "N") {
          m.n = Natural::from_decimal(value);
        }
      } catch (const std::logic_error&) {
        fail();
      }
    } else if (tag == "h") {
      long i = 0;
      std::int64_t v = 0;
      if (!(ls >> i >> v) || v == 0) fail();
      if (!m.h.emplace(spin_index(i), v).second) fail();
    } else if (tag == "J") {
      long i = 0;
      long j = 0;
      std::int64_t v = 0;
      if (!(ls >> i >> j >> v) || i >= j || v == 0) fail();
      if (!m.J.emplace(std::pair{spin_index(i), spin_index(j)}, v).second) fail();
    } else if (tag == "S") {
      long i = 0;
      int v = 0;
      if (!(ls >> i >> v) || (v != 1 && v != -1)) fail();
      if (!planted) planted = SpinConfig(m.n_spins, 0);
      (*planted)[spin_index(i)] = static_cast<std::int8_t>(v);
    } else {
      fail();
    }
  }
  if (!have_spins) throw ParseError("Ising file lacks n_spins header");
  if (planted && std::count(planted->begin(), planted->end(), 0) != 0) {
    throw ParseError("planted section does not cover every spin");
  }
  return {std::move(m), std::move(planted)};
}

void write_edge_list(const IsingModel& m, std::ostream& out) {
  for (const auto& [ij, v] : m.J) out << ij.first + 1 << ' ' << ij.second + 1 << ' ' << v << '\n';
}

}  // namespace factorsat
