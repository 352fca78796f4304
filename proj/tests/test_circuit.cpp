// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "factorsat/circuit.hpp"
#include "factorsat/error.hpp"

namespace factorsat {
namespace {

const std::vector<std::uint64_t> kProfileD4 = {1, 2, 4, 7, 9, 10, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1};

TEST(PartialProducts, CountPerColumn) {
  std::vector<std::uint64_t> pp;
  for (std::uint64_t k = 0; k < 7; ++k) pp.push_back(pp_count(k, 4, 4));
  EXPECT_EQ(pp, (std::vector<std::uint64_t>{1, 2, 3, 4, 3, 2, 1}));
  EXPECT_THROW(pp_count(7, 4, 4), Error);
  EXPECT_EQ(pp_count(2, 2, 5), 2U);
  EXPECT_EQ(pp_count(5, 2, 5), 1U);
}

TEST(ColumnProfile, MatchesWorkedExample) { EXPECT_EQ(column_profile(4, 4), kProfileD4); }

TEST(ColumnProfile, SmallestCase) { EXPECT_EQ(column_profile(2, 2), (std::vector<std::uint64_t>{1, 2, 2, 1})); }

TEST(BuildCircuit, GoldenCountsForElevenTimesThirteen) {
  const ConstraintSystem cs = build_circuit(Natural(11), Natural(13));
  EXPECT_EQ(cs.num_vars(), 168U);
  EXPECT_EQ(cs.ands.size(), 88U);
  EXPECT_EQ(cs.xors.size(), 72U);
  EXPECT_EQ(cs.pins.size(), 16U);
  EXPECT_EQ(cs.column_entries, kProfileD4);
  std::vector<std::uint64_t> expected_contractions;
  for (std::uint64_t m : kProfileD4) expected_contractions.push_back(m - 1);
  EXPECT_EQ(cs.column_contractions, expected_contractions);
  EXPECT_EQ(std::accumulate(cs.column_contractions.begin(), cs.column_contractions.end(), std::uint64_t{0}), 72U);
}

TEST(BuildCircuit, PinsFollowProductBits) {
  const ConstraintSystem cs = build_circuit(Natural(11), Natural(13));
  const BitString n = to_bits(Natural(143));
  for (std::size_t k = 0; k < cs.pins.size(); ++k) {
    EXPECT_EQ(cs.pins[k].value, k < n.size() && n[k]) << k;
    EXPECT_EQ(cs.column_of[cs.pins[k].var.index], k);
  }
}

TEST(BuildCircuit, VariableLayout) {
  const ConstraintSystem cs = build_circuit(Natural(11), Natural(13));
  for (unsigned i = 0; i < 4; ++i) {
    EXPECT_TRUE(std::holds_alternative<InputP>(cs.vars[cs.p_bit(i).index]));
    EXPECT_TRUE(std::holds_alternative<InputQ>(cs.vars[cs.q_bit(i).index]));
    EXPECT_TRUE(cs.is_input(cs.q_bit(i)));
  }
  // Partial products come first among the ANDs and read two input bits.
  for (std::size_t g = 0; g < cs.num_partial_products(); ++g) {
    const auto* pp = std::get_if<PartialProduct>(&cs.vars[cs.ands[g].out.index]);
    ASSERT_NE(pp, nullptr);
    EXPECT_EQ(cs.ands[g].in1, cs.p_bit(pp->i));
    EXPECT_EQ(cs.ands[g].in2, cs.q_bit(pp->j));
    EXPECT_EQ(cs.column_of[cs.ands[g].out.index], pp->i + pp->j);
  }
  // Each contraction's XOR and carry AND share their inputs.
  for (std::size_t t = 0; t < cs.xors.size(); ++t) {
    const AndGate& c = cs.ands[cs.num_partial_products() + t];
    EXPECT_EQ(cs.xors[t].in1, c.in1);
    EXPECT_EQ(cs.xors[t].in2, c.in2);
    EXPECT_EQ(cs.column_of[c.out.index], cs.column_of[cs.xors[t].out.index] + 1);
  }
}

TEST(BuildCircuit, AsymmetricShapeFollowsRecurrence) {
  const ConstraintSystem cs = build_circuit(Natural(3), Natural(13));
  EXPECT_EQ(cs.n, Natural(39));
  EXPECT_EQ(cs.column_entries, column_profile(2, 4));
  EXPECT_EQ(cs.num_partial_products(), 8U);
}

TEST(BuildCircuit, RejectsWrongProductWidth) {
  EXPECT_THROW(build_circuit(4, 4, to_bits(Natural(15))), Error);
  EXPECT_THROW(build_circuit(4, 4, to_bits(Natural(1000))), Error);
  EXPECT_NO_THROW(build_circuit(4, 4, to_bits(Natural(64))));
}

TEST(PlantedAssignment, SatisfiesEveryGate) {
  for (auto [p, q] : {std::pair{11U, 13U}, {13U, 11U}, {3U, 13U}, {251U, 241U}, {2U, 3U}}) {
    const ConstraintSystem cs = build_circuit(Natural(p), Natural(q));
    const auto v = planted_assignment(cs, to_bits(Natural(p)), to_bits(Natural(q)));
    for (const AndGate& g : cs.ands) EXPECT_EQ(v[g.out.index], v[g.in1.index] & v[g.in2.index]);
    for (const XorGate& g : cs.xors) EXPECT_EQ(v[g.out.index], v[g.in1.index] ^ v[g.in2.index]);
    for (const Pin& pin : cs.pins) EXPECT_EQ(v[pin.var.index] != 0, pin.value);
  }
}

TEST(PlantedAssignment, WrongFactorsContradictPins) {
  const ConstraintSystem cs = build_circuit(Natural(11), Natural(13));
  EXPECT_THROW(planted_assignment(cs, to_bits(Natural(11)), to_bits(Natural(11))), std::logic_error);
  EXPECT_THROW(planted_assignment(cs, to_bits(Natural(3)), to_bits(Natural(13))), Error);
}

TEST(CircuitDump, OneLinePerConstraint) {
  const ConstraintSystem cs = build_circuit(Natural(2), Natural(3));
  std::ostringstream out;
  write_circuit_dump(cs, out);
  const std::string text = out.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            cs.ands.size() + cs.xors.size() + cs.pins.size());
  EXPECT_EQ(text.rfind("AND ", 0), 0U);
}

}  // namespace
}  // namespace factorsat
