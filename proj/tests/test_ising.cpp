// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "factorsat/error.hpp"
#include "factorsat/ising.hpp"
#include "test_util.hpp"

namespace factorsat {
namespace {

std::int64_t and_energy(int a, int b, int c) { return evaluate(and_gadget_terms(), {a, b, c, 1}); }
std::int64_t xor_energy(int a, int b, int c, int aux) { return evaluate(xor_gadget_terms(), {a, b, c, aux}); }

TEST(AndGadget, TruthTable) {
  std::vector<std::int64_t> violating;
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) {
      for (int c : {-1, 1}) {
        const bool ok = (c > 0) == (a > 0 && b > 0);
        if (ok) {
          EXPECT_EQ(and_energy(a, b, c), 0);
        } else {
          violating.push_back(and_energy(a, b, c));
        }
      }
    }
  }
  std::sort(violating.begin(), violating.end());
  EXPECT_EQ(violating, (std::vector<std::int64_t>{4, 4, 4, 12}));
  EXPECT_EQ(and_energy(-1, -1, 1), 12);
  EXPECT_EQ(and_energy(1, 1, 1), 0);
}

TEST(AndGadget, FourTimesBooleanPenalty) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        const int penalty = a * b - 2 * a * c - 2 * b * c + 3 * c;
        EXPECT_EQ(and_energy(2 * a - 1, 2 * b - 1, 2 * c - 1), 4 * penalty);
      }
    }
  }
}

TEST(XorGadget, Examples) {
  EXPECT_EQ(xor_energy(1, -1, 1, -1), 0);
  EXPECT_EQ(std::min(xor_energy(1, 1, 1, 1), xor_energy(1, 1, 1, -1)), 2);
  EXPECT_EQ(xor_energy(1, 1, -1, -1), 8);
}

TEST(XorGadget, MinimumOverAux) {
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) {
      for (int c : {-1, 1}) {
        const std::int64_t best = std::min(xor_energy(a, b, c, 1), xor_energy(a, b, c, -1));
        if ((c > 0) == ((a > 0) != (b > 0))) {
          EXPECT_EQ(best, 0);
          EXPECT_EQ(xor_energy(a, b, c, planted_aux(a, b)), 0);
          EXPECT_GT(xor_energy(a, b, c, -planted_aux(a, b)), 0);
        } else {
          EXPECT_GE(best, 2);
        }
      }
    }
  }
}

TEST(PlantedAux, Table) {
  EXPECT_EQ(planted_aux(1, 1), 1);
  EXPECT_EQ(planted_aux(1, -1), -1);
  EXPECT_EQ(planted_aux(-1, 1), -1);
  EXPECT_EQ(planted_aux(-1, -1), -1);
}

TEST(Assemble, GoldenElevenTimesThirteen) {
  const Instance inst = testing::make_instance(11, 13);
  const IsingModel& m = inst.ising;
  EXPECT_EQ(m.n_spins, 40U);
  EXPECT_EQ(m.n_physical, 28U);
  EXPECT_EQ(m.h.size(), 26U);
  EXPECT_EQ(m.J.size(), 112U);
  EXPECT_EQ(m.e0, 101);
  EXPECT_EQ(m.n_spins, m.n_physical + inst.reduced.residual_xors.size());
  EXPECT_EQ(energy(m, inst.planted_spins), m.ground_energy);
  EXPECT_EQ(m.ground_energy, 0);
}

TEST(Assemble, StructuralCountsWithoutPins) {
  for (unsigned d = 2; d <= 6; ++d) {
    const auto [p, q] = sample_prime_pair(d, d, d);
    const ConstraintSystem cs = build_circuit(p, q);
    const IsingModel m = assemble(unpinned(cs));
    const std::size_t c = cs.num_contractions();
    EXPECT_EQ(m.n_spins, 2 * d + d * d + 3 * c);
    EXPECT_EQ(m.raw_couplings, 3 * d * d + 9 * c);
    EXPECT_LE(m.J.size(), m.raw_couplings);
  }
}

TEST(Assemble, StoredEntriesAreNonzeroAndOrdered) {
  const IsingModel m = testing::make_instance(251, 241).ising;
  for (const auto& [i, v] : m.h) EXPECT_NE(v, 0);
  for (const auto& [ij, v] : m.J) {
    EXPECT_LT(ij.first, ij.second);
    EXPECT_NE(v, 0);
  }
}

TEST(Energy, EqualsGadgetSumAndBoundsViolations) {
  std::mt19937_64 rng(5);
  for (auto [p, q] : {std::pair{11U, 13U}, {5U, 7U}, {53U, 59U}}) {
    const Instance inst = testing::make_instance(p, q);
    const IsingModel& m = inst.ising;
    for (int trial = 0; trial < 500; ++trial) {
      SpinConfig s(m.n_spins);
      for (auto& x : s) x = (rng() & 1U) ? 1 : -1;
      const std::int64_t h = energy(m, s);
      EXPECT_EQ(h - m.ground_energy, gadget_energy_sum(m, s));
      EXPECT_GE(h - m.ground_energy, 2 * static_cast<std::int64_t>(count_violated(m, s)));
    }
  }
}

TEST(Energy, SingleFlipFromPlantedCostsAtLeastGap) {
  const Instance inst = testing::make_instance(11, 13);
  for (std::size_t i = 0; i < inst.ising.n_spins; ++i) {
    SpinConfig s = inst.planted_spins;
    s[i] = static_cast<std::int8_t>(-s[i]);
    EXPECT_GE(energy(inst.ising, s), inst.ising.ground_energy + inst.ising.gap);
  }
}

TEST(Energy, EmptyModelAndLengthMismatch) {
  const IsingModel empty;
  EXPECT_EQ(energy(empty, {}), 0);
  EXPECT_THROW(energy(empty, {1}), Error);
}

TEST(GraphStats, HandshakeAndEdges) {
  const Instance inst = testing::make_instance(11, 13);
  const GraphStats st = graph_stats(inst.ising, inst.circuit.column_of);
  EXPECT_EQ(st.n_edges, 112U);
  std::size_t degree_sum = 0;
  std::size_t spins = 0;
  for (const auto& [deg, count] : st.degree_histogram) {
    degree_sum += deg * count;
    spins += count;
  }
  EXPECT_EQ(degree_sum, 2 * st.n_edges);
  EXPECT_EQ(spins, inst.ising.n_spins);
  EXPECT_EQ(st.max_degree, st.degree_histogram.rbegin()->first);
}

TEST(GraphStats, MaxDegreeGrowsWithD) {
  std::size_t prev = 0;
  for (unsigned d : {4U, 8U, 12U}) {
    GenerateOptions o;
    o.bits = d;
    o.seed = 3;
    const Instance inst = generate(o);
    const std::size_t deg = graph_stats(inst.ising, inst.circuit.column_of).max_degree;
    EXPECT_GT(deg, prev);
    prev = deg;
  }
}

TEST(Export, RoundTripWithPlantedSection) {
  const Instance inst = testing::make_instance(11, 13);
  std::stringstream io;
  write_ising(inst.ising, &inst.planted_spins, io);
  const std::string text = io.str();
  EXPECT_NE(text.find("# E0 101\n"), std::string::npos);
  std::size_t fields = 0;
  for (std::size_t at = text.find("\nh "); at != std::string::npos; at = text.find("\nh ", at + 1)) ++fields;
  EXPECT_EQ(fields, 26U);
  const auto [m, planted] = parse_ising(io);
  EXPECT_EQ(m, inst.ising);
  ASSERT_TRUE(planted.has_value());
  EXPECT_EQ(*planted, inst.planted_spins);
}

TEST(Export, EmptyModelIsHeaderOnly) {
  std::ostringstream out;
  write_ising(IsingModel{}, nullptr, out);
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) EXPECT_EQ(line[0], '#');
}

TEST(Export, ParseRejectsBadLines) {
  for (const char* bad : {"h 1 2\n", "# n_spins 2\nJ 2 1 3\n", "# n_spins 2\nh 3 1\n", "# n_spins 2\nS 1 0\n",
                          "# n_spins 2\nq 1 1\n", "# n_spins 2\nh 1 0\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(parse_ising(in), ParseError) << bad;
  }
}

TEST(Export, EdgeList) {
  const Instance inst = testing::make_instance(11, 13);
  std::ostringstream out;
  write_edge_list(inst.ising, out);
  const std::string text = out.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), inst.ising.J.size());
}

}  // namespace
}  // namespace factorsat
