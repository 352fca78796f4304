// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "factorsat/circuit.hpp"

namespace factorsat {

/// Pre-reduction size of the symmetric d x d instance.
struct SizeReport {
  std::int64_t d = 0;
  std::int64_t contractions = 0;
  std::int64_t c1 = 0;  // ascending columns, k < d
  std::int64_t c2 = 0;  // descending columns, d <= k <= 2d-2
  std::int64_t c3 = 0;  // tail, k >= 2d-1
  std::int64_t boolean_vars = 0;
  std::int64_t and_clauses = 0;
  std::int64_t xor_clauses = 0;
  std::int64_t pins = 0;
  std::int64_t total_constraints = 0;
  std::int64_t active_columns = 0;
  std::int64_t peak_entries = 0;
  std::int64_t k_max = 0;
  std::int64_t cnf_clauses_raw = 0;
  std::int64_t ising_spins_raw = 0;
  std::int64_t ising_couplings_raw_bound = 0;

  friend bool operator==(const SizeReport&, const SizeReport&) = default;
};

/// Largest d whose report fits in 64-bit arithmetic with margin.
inline constexpr std::int64_t kMaxPredictD = 30000;

/// Closed forms. Throws Error for d < 2 or d > kMaxPredictD, and
/// std::logic_error if C2 disagrees with summing the descending-phase formula.
SizeReport predict(std::int64_t d);

/// Column population m_k for k < d.
std::int64_t mk_ascending(std::int64_t d, std::int64_t k);
/// Column population m_k for d <= k <= 2d-2.
std::int64_t mk_descending(std::int64_t d, std::int64_t k);

/// Splits sum(max(m_k - 1, 0)) of a column profile by phase.
struct PhaseSums {
  std::int64_t c1 = 0, c2 = 0, c3 = 0;
};
PhaseSums phase_sums(const std::vector<std::uint64_t>& profile, std::int64_t d);

struct FieldCheck {
  std::string field;
  std::int64_t predicted;
  std::int64_t constructed;
};

struct ValidationRecord {
  unsigned n_p = 0;
  unsigned n_q = 0;
  std::uint64_t seed = 0;
  Natural p, q;
  std::vector<FieldCheck> checks;

  std::vector<FieldCheck> mismatches() const;
  bool ok() const { return mismatches().empty(); }
};

/// Builds an instance from seeded random d-bit primes and compares every
/// structural count with predict(d).
ValidationRecord validate(unsigned d, std::uint64_t seed);

/// Asymmetric shapes have no closed forms. Compares the constructed column
/// profile and contraction count with the recurrence simulation.
ValidationRecord validate_shape(unsigned n_p, unsigned n_q, std::uint64_t seed);

/// Structural counts of an existing instance under the same field names.
std::vector<FieldCheck> compare_with_prediction(const ConstraintSystem& cs);

/// Header `d,k,m_k,k_over_kmax,m_over_d2`, one row per active column.
void write_profile_csv(const std::vector<unsigned>& ds, std::ostream& out);

/// Aligned `name value` lines, or `name=value` when key_value is set.
void write_size_report(const SizeReport& r, bool key_value, std::ostream& out);

}  // namespace factorsat
