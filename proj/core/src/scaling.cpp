// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/scaling.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "factorsat/error.hpp"

namespace factorsat {

std::int64_t mk_ascending(std::int64_t d, std::int64_t k) {
  if (k < 0 || k >= d) throw Error("ascending phase covers 0 <= k < d");
  return 1 + k * (k + 1) / 2;
}

std::int64_t mk_descending(std::int64_t d, std::int64_t k) {
  if (k < d || k > 2 * d - 2) throw Error("descending phase covers d <= k <= 2d-2");
  const std::int64_t j = k - d;
  return 1 + d * (d - 1) / 2 + (j + 1) * (d - 2) - j * (j + 1) / 2;
}

SizeReport predict(std::int64_t d) {
  if (d < 2 || d > kMaxPredictD) {
    throw Error("predict needs 2 <= d <= " + std::to_string(kMaxPredictD));
  }
  SizeReport r;
  r.d = d;
  const std::int64_t d2 = d * d;
  r.contractions = d2 * (d - 1) * (d - 1) / 2;
  r.c1 = d * (d - 1) * (d + 1) / 6;
  const std::int64_t e = (d - 1) * (d - 1);
  r.c3 = (e - 1) * e / 2;
  r.c2 = r.contractions - r.c1 - r.c3;

  std::int64_t c2_direct = 0;
  for (std::int64_t k = d; k <= 2 * d - 2; ++k) c2_direct += mk_descending(d, k) - 1;
  if (c2_direct != r.c2) {
    throw std::logic_error("descending-phase sum disagrees with C - C1 - C3 at d=" + std::to_string(d));
  }

  const std::int64_t c = r.contractions;
  r.boolean_vars = 2 * d + d2 + 2 * c;
  r.and_clauses = d2 + c;
  r.xor_clauses = c;
  r.pins = d2;
  r.total_constraints = r.and_clauses + r.xor_clauses + r.pins;
  r.active_columns = d2;
  r.peak_entries = d2 - 2 * d + 2;
  r.k_max = d2 - 1;
  r.cnf_clauses_raw = 3 * (d2 + c) + 4 * c;
  r.ising_spins_raw = 2 * d + d2 + 3 * c;
  r.ising_couplings_raw_bound = 3 * d2 + 9 * c;
  return r;
}

PhaseSums phase_sums(const std::vector<std::uint64_t>& profile, std::int64_t d) {
  PhaseSums s;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const auto extra = static_cast<std::int64_t>(profile[k] > 0 ? profile[k] - 1 : 0);
    const auto kk = static_cast<std::int64_t>(k);
    if (kk < d) {
      s.c1 += extra;
    } else if (kk <= 2 * d - 2) {
      s.c2 += extra;
    } else {
      s.c3 += extra;
    }
  }
  return s;
}

std::vector<FieldCheck> ValidationRecord::mismatches() const {
  std::vector<FieldCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const FieldCheck& c) { return c.predicted != c.constructed; });
  return out;
}

namespace {

std::int64_t as_i64(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

std::vector<FieldCheck> compare_with_prediction(const ConstraintSystem& cs) {
  if (cs.n_p != cs.n_q) throw Error("closed forms exist only for n_p == n_q");
  const SizeReport r = predict(cs.n_p);
  const std::int64_t peak = as_i64(*std::max_element(cs.column_entries.begin(), cs.column_entries.end()));
  const PhaseSums phases = phase_sums(cs.column_entries, r.d);
  const std::int64_t ands = as_i64(cs.ands.size());
  const std::int64_t xors = as_i64(cs.xors.size());
  return {
      {"vars", r.boolean_vars, as_i64(cs.num_vars())},
      {"and", r.and_clauses, ands},
      {"xor", r.xor_clauses, xors},
      {"pins", r.pins, as_i64(cs.pins.size())},
      {"total_constraints", r.total_constraints, ands + xors + as_i64(cs.pins.size())},
      {"active_columns", r.active_columns, as_i64(cs.active_columns())},
      {"peak", r.peak_entries, peak},
      {"k_max", r.k_max, as_i64(cs.active_columns()) - 1},
      {"contractions", r.contractions, as_i64(cs.num_contractions())},
      {"c1", r.c1, phases.c1},
      {"c2", r.c2, phases.c2},
      {"c3", r.c3, phases.c3},
      {"cnf_clauses_raw", r.cnf_clauses_raw, 3 * ands + 4 * xors},
      {"ising_spins_raw", r.ising_spins_raw, as_i64(cs.num_vars()) + xors},
      {"ising_couplings_raw_bound", r.ising_couplings_raw_bound, 3 * ands + 6 * xors},
  };
}

ValidationRecord validate(unsigned d, std::uint64_t seed) {
  ValidationRecord rec;
  rec.n_p = rec.n_q = d;
  rec.seed = seed;
  std::tie(rec.p, rec.q) = sample_prime_pair(d, d, seed);
  rec.checks = compare_with_prediction(build_circuit(rec.p, rec.q));
  return rec;
}

ValidationRecord validate_shape(unsigned n_p, unsigned n_q, std::uint64_t seed) {
  ValidationRecord rec;
  rec.n_p = n_p;
  rec.n_q = n_q;
  rec.seed = seed;
  std::tie(rec.p, rec.q) = sample_prime_pair(n_p, n_q, seed);
  const ConstraintSystem cs = build_circuit(rec.p, rec.q);
  const std::vector<std::uint64_t> sim = column_profile(n_p, n_q);
  std::int64_t sim_contractions = 0;
  for (std::uint64_t m : sim) sim_contractions += static_cast<std::int64_t>(m > 0 ? m - 1 : 0);
  std::int64_t profile_diff = 0;
  for (std::size_t k = 0; k < std::min(sim.size(), cs.column_entries.size()); ++k) {
    if (sim[k] != cs.column_entries[k]) ++profile_diff;
  }
  rec.checks = {
      {"active_columns", as_i64(sim.size()), as_i64(cs.active_columns())},
      {"contractions", sim_contractions, as_i64(cs.num_contractions())},
      {"profile_mismatches", 0, profile_diff},
      {"and", as_i64(cs.num_partial_products()) + sim_contractions, as_i64(cs.ands.size())},
      {"pins", as_i64(sim.size()), as_i64(cs.pins.size())},
  };
  return rec;
}

void write_profile_csv(const std::vector<unsigned>& ds, std::ostream& out) {
  out << "d,k,m_k,k_over_kmax,m_over_d2\n";
  for (unsigned d : ds) {
    const std::vector<std::uint64_t> m = column_profile(d, d);
    const double k_max = static_cast<double>(m.size() - 1);
    const double d2 = static_cast<double>(d) * d;
    for (std::size_t k = 0; k < m.size(); ++k) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f,%.6f", static_cast<double>(k) / k_max,
                    static_cast<double>(m[k]) / d2);
      out << d << ',' << k << ',' << m[k] << ',' << buf << '\n';
    }
  }
}

void write_size_report(const SizeReport& r, bool key_value, std::ostream& out) {
  const std::pair<const char*, std::int64_t> rows[] = {
      {"d", r.d},
      {"contractions", r.contractions},
      {"c1", r.c1},
      {"c2", r.c2},
      {"c3", r.c3},
      {"boolean_vars", r.boolean_vars},
      {"and_clauses", r.and_clauses},
      {"xor_clauses", r.xor_clauses},
      {"pins", r.pins},
      {"total_constraints", r.total_constraints},
      {"active_columns", r.active_columns},
      {"peak_entries", r.peak_entries},
      {"k_max", r.k_max},
      {"cnf_clauses_raw", r.cnf_clauses_raw},
      {"ising_spins_raw", r.ising_spins_raw},
      {"ising_couplings_raw_bound", r.ising_couplings_raw_bound},
  };
  for (const auto& [name, value] : rows) {
    if (key_value) {
      out << name << '=' << value << '\n';
    } else {
      out << std::left << std::setw(28) << name << value << '\n';
    }
  }
}

}  // namespace factorsat
