// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factorsat/cnf.hpp"
#include "factorsat/ising.hpp"

namespace factorsat {

/// Exactly one way of choosing the factors must be set.
struct GenerateOptions {
  std::optional<unsigned> bits;
  std::optional<unsigned> n_p, n_q;
  std::optional<Natural> p, q;
  std::uint64_t seed = 0;
  bool reduce = true;
  bool allow_equal = false;
};

/// Every pipeline stage for one planted instance.
struct Instance {
  Natural p, q;
  std::uint64_t seed = 0;
  ConstraintSystem circuit;
  ReducedSystem reduced;
  CnfResult cnf;
  IsingModel ising;
  std::vector<std::uint8_t> circuit_values;
  SpinConfig planted_spins;
};

/// Samples or checks the primes, then runs circuit, reduce, cnf and ising.
/// `trace` receives the reduction log. Throws Error on bad options, including
/// composite or wrongly sized factors.
Instance generate(const GenerateOptions& options, std::ostream* trace = nullptr);

/// Same seed for the same (base seed, index) regardless of batch size.
std::uint64_t batch_seed(std::uint64_t base, std::uint64_t index);

/// On-disk bundle: instance.cnf, instance.ising, witness.map, meta.
struct InstanceBundle {
  CnfFormula cnf;
  std::vector<std::string> cnf_comments;
  IsingModel ising;
  std::optional<SpinConfig> planted_spins;
  WitnessMap witness;
  std::map<std::string, std::string> meta;

  bool planted() const { return meta.count("p") != 0 && meta.count("q") != 0; }
};

InstanceBundle make_bundle(const Instance& inst, bool planted);
void write_bundle(const InstanceBundle& b, const std::filesystem::path& dir);
/// Throws ParseError or Error if a file is missing or malformed.
InstanceBundle read_bundle(const std::filesystem::path& dir);

void write_meta(const std::map<std::string, std::string>& meta, std::ostream& out);
std::map<std::string, std::string> parse_meta(std::istream& in);

}  // namespace factorsat
