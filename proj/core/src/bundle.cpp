// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "factorsat/error.hpp"
#include "factorsat/scaling.hpp"
#include "factorsat/version.hpp"

namespace factorsat {

std::uint64_t batch_seed(std::uint64_t base, std::uint64_t index) { return derive_seed(base, 0xba7c4, index); }

namespace {

std::pair<Natural, Natural> choose_factors(const GenerateOptions& o) {
  const int ways = int{o.bits.has_value()} + int{o.n_p.has_value() || o.n_q.has_value()} +
                   int{o.p.has_value() || o.q.has_value()};
  if (ways != 1) throw UsageError("give exactly one of: bits, n_p with n_q, p with q");
  if (o.bits) {
    if (*o.bits < 2) throw UsageError("bit-length must be at least 2");
    return sample_prime_pair(*o.bits, *o.bits, o.seed, o.allow_equal);
  }
  if (o.n_p || o.n_q) {
    if (!o.n_p || !o.n_q) throw UsageError("n_p and n_q must be given together");
    if (*o.n_p < 2 || *o.n_q < 2) throw UsageError("bit-lengths must be at least 2");
    return sample_prime_pair(*o.n_p, *o.n_q, o.seed, o.allow_equal);
  }
  if (!o.p || !o.q) throw UsageError("p and q must be given together");
  for (const Natural* f : {&*o.p, &*o.q}) {
    if (!is_prime(*f)) throw UsageError(f->to_decimal() + " is not prime");
  }
  if (*o.p == *o.q && !o.allow_equal) throw UsageError("p equals q; pass allow_equal to permit squares");
  return {*o.p, *o.q};
}

}  // namespace

Instance generate(const GenerateOptions& options, std::ostream* trace) {
  Instance inst;
  std::tie(inst.p, inst.q) = choose_factors(options);
  inst.seed = options.seed;
  inst.circuit = build_circuit(inst.p, inst.q);
  inst.circuit_values = planted_assignment(inst.circuit, to_bits(inst.p), to_bits(inst.q));
  inst.reduced = options.reduce ? reduce_to_fixpoint(inst.circuit, trace) : pins_only(inst.circuit);
  inst.cnf = to_cnf(inst.reduced);
  inst.ising = assemble(inst.reduced);
  inst.planted_spins = planted_spin_config(inst.ising, inst.circuit_values);
  return inst;
}

InstanceBundle make_bundle(const Instance& inst, bool planted) {
  InstanceBundle b;
  b.cnf = inst.cnf.formula;
  b.ising = inst.ising;
  b.witness = inst.cnf.witness;
  if (planted) b.planted_spins = inst.planted_spins;

  const ConstraintSystem& cs = inst.circuit;
  const unsigned d = std::max(cs.n_p, cs.n_q);
  b.cnf_comments = {
      std::string("factorsat ") + std::string(kVersion),
      "d " + std::to_string(d),
      "n_p " + std::to_string(cs.n_p),
      "n_q " + std::to_string(cs.n_q),
      "N " + cs.n.to_decimal(),
      "seed " + std::to_string(inst.seed),
  };

  auto& m = b.meta;
  auto put = [&m](const std::string& k, const auto& v) {
    std::ostringstream os;
    os << v;
    m[k] = os.str();
  };
  put("generator", std::string("factorsat ") + std::string(kVersion));
  put("d", d);
  put("n_p", cs.n_p);
  put("n_q", cs.n_q);
  put("N", cs.n.to_decimal());
  if (planted) {
    put("p", inst.p.to_decimal());
    put("q", inst.q.to_decimal());
  }
  put("seed", inst.seed);
  put("reduced", inst.reduced.reduced ? 1 : 0);
  put("raw_vars", cs.num_vars());
  put("raw_and", cs.ands.size());
  put("raw_xor", cs.xors.size());
  put("raw_pins", cs.pins.size());
  put("residual_and", inst.reduced.residual_ands.size());
  put("residual_xor", inst.reduced.residual_xors.size());
  put("free_vars", inst.reduced.stats.n_free);
  put("pinned_vars", inst.reduced.stats.n_pinned);
  put("merged_vars", inst.reduced.stats.n_merged);
  put("reduction_cycles", inst.reduced.stats.iterations);
  put("cnf_vars", b.cnf.num_vars);
  put("cnf_clauses", b.cnf.clauses.size());
  put("cnf_clauses_raw", inst.cnf.raw_clauses);
  put("ising_spins", b.ising.n_spins);
  put("ising_fields", b.ising.h.size());
  put("ising_couplings", b.ising.J.size());
  put("ising_couplings_raw", b.ising.raw_couplings);
  put("ising_E0", b.ising.e0);
  put("ising_ground_energy", b.ising.ground_energy);
  if (cs.n_p == cs.n_q) {
    const SizeReport r = predict(cs.n_p);
    put("predicted_vars", r.boolean_vars);
    put("predicted_and", r.and_clauses);
    put("predicted_xor", r.xor_clauses);
    put("predicted_pins", r.pins);
    put("predicted_contractions", r.contractions);
    put("predicted_cnf_clauses_raw", r.cnf_clauses_raw);
    put("predicted_ising_spins_raw", r.ising_spins_raw);
  }
  return b;
}

void write_meta(const std::map<std::string, std::string>& meta, std::ostream& out) {
  for (const auto& [k, v] : meta) out << k << '=' << v << '\n';
}

std::map<std::string, std::string> parse_meta(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("bad meta line: " + line);
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return in;
}

}  // namespace

void write_bundle(const InstanceBundle& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "instance.cnf");
    write_dimacs(b.cnf, b.cnf_comments, out);
  }
  {
    auto out = open_out(dir / "instance.ising");
    write_ising(b.ising, b.planted_spins ? &*b.planted_spins : nullptr, out);
  }
  {
    auto out = open_out(dir / "witness.map");
    write_witness_map(b.witness, out);
  }
  {
    auto out = open_out(dir / "meta");
    write_meta(b.meta, out);
    if (!out) throw Error("failed writing " + (dir / "meta").string());
  }
}

InstanceBundle read_bundle(const std::filesystem::path& dir) {
  InstanceBundle b;
  {
    auto in = open_in(dir / "instance.cnf");
    b.cnf = parse_dimacs(in);
  }
  {
    auto in = open_in(dir / "instance.ising");
    std::tie(b.ising, b.planted_spins) = parse_ising(in);
  }
  {
    auto in = open_in(dir / "witness.map");
    b.witness = parse_witness_map(in);
  }
  {
    auto in = open_in(dir / "meta");
    b.meta = parse_meta(in);
  }
  b.cnf.var_origin = b.witness.var_origin;
  return b;
}

}  // namespace factorsat
