// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factorsat/bundle.hpp"

namespace factorsat {

/// Throws Error if the assignment is shorter than num_vars.
bool check_assignment(const CnfFormula& f, const Assignment& a);
std::optional<std::size_t> first_violated_clause(const CnfFormula& f, const Assignment& a);

struct ModelCount {
  std::uint64_t count = 0;
  /// Search finished; count is exact. Otherwise count = cap + 1.
  bool exhausted = true;
  /// Models found, at most `cap` of them (none when cap exceeds 4096).
  std::vector<Assignment> models;
};

inline constexpr int kDefaultVarGuard = 40;

/// DPLL with unit propagation, branching on the lowest unassigned variable
/// with false first. A branch whose clauses are all satisfied contributes
/// 2^(unassigned vars). Throws Error above `max_vars` variables.
ModelCount count_models(const CnfFormula& f, std::uint64_t cap, int max_vars = kDefaultVarGuard);

/// Reference counter for tiny formulas: all 2^n assignments.
std::uint64_t count_models_naive(const CnfFormula& f);

struct GadgetRow {
  std::array<int, 4> spins{};  // aux is spins[3]; unused for AND
  std::int64_t energy = 0;
  bool satisfies = false;      // Boolean relation among the first three
};

/// 8 rows for AND, 16 for XOR; row r sets operand i to +1 iff bit i of r is set.
std::vector<GadgetRow> enumerate_gadget(Gadget::Kind kind);

/// Models expected for a correct instance: 1 for unequal widths or p == q, else 2.
std::uint64_t expected_model_count(unsigned n_p, unsigned n_q, bool equal_factors);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CertifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
};

struct CertifyOptions {
  /// Model counting runs when max(n_p, n_q) is at most this.
  unsigned count_models_up_to_d = 5;
  int max_vars = 256;
};

/// Structural consistency, planted solution, decoding, energy and (for small
/// instances) the model-count checks.
CertifyReport certify_instance(const InstanceBundle& b, const CertifyOptions& options = {});

}  // namespace factorsat
