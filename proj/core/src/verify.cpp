// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "factorsat/error.hpp"

namespace factorsat {

namespace {

bool literal_true(int lit, const Assignment& a) {
  return (a[static_cast<std::size_t>(std::abs(lit)) - 1] != 0) == (lit > 0);
}

}  // namespace

std::optional<std::size_t> first_violated_clause(const CnfFormula& f, const Assignment& a) {
  if (a.size() < static_cast<std::size_t>(f.num_vars)) {
    throw Error("assignment covers " + std::to_string(a.size()) + " of " + std::to_string(f.num_vars) +
                " variables");
  }
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const Clause& c = f.clauses[i];
    if (std::none_of(c.begin(), c.end(), [&](int lit) { return literal_true(lit, a); })) return i;
  }
  return std::nullopt;
}

bool check_assignment(const CnfFormula& f, const Assignment& a) { return !first_violated_clause(f, a); }

namespace {

// Models are kept only for small caps so that huge caps stay cheap.
constexpr std::uint64_t kMaxStoredModels = 4096;

class DpllCounter {
 public:
  DpllCounter(const CnfFormula& f, std::uint64_t cap)
      : f_(f), cap_(cap), keep_(cap <= kMaxStoredModels), value_(static_cast<std::size_t>(f.num_vars) + 1, -1) {}

  ModelCount run() {
    search();
    result_.exhausted = !stopped_;
    return std::move(result_);
  }

 private:
  enum class Status { Conflict, AllSatisfied, Open };

  void assign(int lit) {
    value_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : 0;
    trail_.push_back(std::abs(lit));
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[static_cast<std::size_t>(trail_.back())] = -1;
      trail_.pop_back();
    }
  }

  Status propagate() {
    for (;;) {
      bool changed = false;
      bool all_sat = true;
      for (const Clause& c : f_.clauses) {
        int open = 0;
        int last = 0;
        bool sat = false;
        for (int lit : c) {
          const int v = value_[static_cast<std::size_t>(std::abs(lit))];
          if (v < 0) {
            ++open;
            last = lit;
          } else if ((v == 1) == (lit > 0)) {
            sat = true;
            break;
          }
        }
        if (sat) continue;
        all_sat = false;
        if (open == 0) return Status::Conflict;
        if (open == 1) {
          assign(last);
          changed = true;
        }
      }
      if (all_sat) return Status::AllSatisfied;
      if (!changed) return Status::Open;
    }
  }

  void record_leaf() {
    std::vector<int> free_vars;
    for (int v = 1; v <= f_.num_vars; ++v) {
      if (value_[static_cast<std::size_t>(v)] < 0) free_vars.push_back(v);
    }
    const std::uint64_t room = cap_ - result_.count;
    const bool overflow = free_vars.size() >= 64 || (std::uint64_t{1} << free_vars.size()) > room;
    const std::uint64_t leaves = overflow ? room : std::uint64_t{1} << free_vars.size();
    if (keep_) {
      for (std::uint64_t mask = 0; mask < leaves; ++mask) {
        Assignment a(static_cast<std::size_t>(f_.num_vars), 0);
        for (int v = 1; v <= f_.num_vars; ++v) {
          a[static_cast<std::size_t>(v) - 1] = value_[static_cast<std::size_t>(v)] == 1;
        }
        for (std::size_t i = 0; i < free_vars.size() && i < 64; ++i) {
          a[static_cast<std::size_t>(free_vars[i]) - 1] = (mask >> i) & 1U;
        }
        result_.models.push_back(std::move(a));
      }
    }
    if (overflow) {
      result_.count = cap_ + 1;
      stopped_ = true;
    } else {
      result_.count += leaves;
    }
  }

  void search() {
    const std::size_t mark = trail_.size();
    const Status s = propagate();
    if (s == Status::AllSatisfied) record_leaf();
    if (s != Status::Open) {
      undo(mark);
      return;
    }
    int branch = 1;
    while (value_[static_cast<std::size_t>(branch)] >= 0) ++branch;
    for (int lit : {-branch, branch}) {
      const std::size_t inner = trail_.size();
      assign(lit);
      search();
      undo(inner);
      if (stopped_) break;
    }
    undo(mark);
  }

  const CnfFormula& f_;
  std::uint64_t cap_;
  bool keep_;
  std::vector<int> value_;
  std::vector<int> trail_;
  ModelCount result_;
  bool stopped_ = false;
};

}  // namespace

ModelCount count_models(const CnfFormula& f, std::uint64_t cap, int max_vars) {
  if (f.num_vars > max_vars) {
    throw Error("model counter guard: " + std::to_string(f.num_vars) + " variables exceeds limit " +
                std::to_string(max_vars));
  }
  return DpllCounter(f, cap).run();
}

std::uint64_t count_models_naive(const CnfFormula& f) {
  if (f.num_vars > 24) throw Error("naive counter is limited to 24 variables");
  std::uint64_t count = 0;
  Assignment a(static_cast<std::size_t>(f.num_vars), 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.num_vars); ++mask) {
    for (int v = 0; v < f.num_vars; ++v) a[static_cast<std::size_t>(v)] = (mask >> v) & 1U;
    if (check_assignment(f, a)) ++count;
  }
  return count;
}

std::vector<GadgetRow> enumerate_gadget(Gadget::Kind kind) {
  const bool is_and = kind == Gadget::Kind::And;
  const GadgetTerms terms = is_and ? and_gadget_terms() : xor_gadget_terms();
  const unsigned operands = is_and ? 3 : 4;
  std::vector<GadgetRow> rows;
  for (unsigned r = 0; r < (1U << operands); ++r) {
    GadgetRow row;
    for (unsigned i = 0; i < 4; ++i) row.spins[i] = (i < operands && ((r >> i) & 1U)) ? 1 : -1;
    row.energy = evaluate(terms, row.spins);
    const bool a = row.spins[0] > 0;
    const bool b = row.spins[1] > 0;
    const bool c = row.spins[2] > 0;
    row.satisfies = is_and ? c == (a && b) : c == (a != b);
    rows.push_back(row);
  }
  return rows;
}

std::uint64_t expected_model_count(unsigned n_p, unsigned n_q, bool equal_factors) {
  return (n_p != n_q || equal_factors) ? 1 : 2;
}

bool CertifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

class Checker {
 public:
  explicit Checker(CertifyReport& report) : report_(report) {}

  void add(std::string name, bool passed, std::string detail = {}) {
    report_.checks.push_back({std::move(name), passed, std::move(detail)});
  }

  template <typename T>
  void expect_meta(const InstanceBundle& b, const std::string& key, const T& actual) {
    std::ostringstream os;
    os << actual;
    const auto it = b.meta.find(key);
    if (it == b.meta.end()) {
      add("meta_" + key, false, "missing from meta");
    } else {
      add("meta_" + key, it->second == os.str(), "meta " + it->second + ", files " + os.str());
    }
  }

 private:
  CertifyReport& report_;
};

}  // namespace

CertifyReport certify_instance(const InstanceBundle& b, const CertifyOptions& options) {
  CertifyReport report;
  Checker check(report);
  const WitnessMap& wm = b.witness;

  check.expect_meta(b, "cnf_vars", b.cnf.num_vars);
  check.expect_meta(b, "cnf_clauses", b.cnf.clauses.size());
  check.expect_meta(b, "ising_spins", b.ising.n_spins);
  check.expect_meta(b, "ising_fields", b.ising.h.size());
  check.expect_meta(b, "ising_couplings", b.ising.J.size());
  check.expect_meta(b, "ising_E0", b.ising.e0);
  check.expect_meta(b, "n_p", wm.n_p);
  check.expect_meta(b, "n_q", wm.n_q);
  check.expect_meta(b, "N", wm.n.to_decimal());
  check.add("ising_header_matches_witness", b.ising.n == wm.n && b.ising.n_p == wm.n_p && b.ising.n_q == wm.n_q);

  bool witness_ok = wm.var_origin.size() == static_cast<std::size_t>(b.cnf.num_vars);
  for (const auto* bits : {&wm.p_bits, &wm.q_bits}) {
    for (const BitSource& s : *bits) {
      if (!s.pinned && (s.literal == 0 || std::abs(s.literal) > b.cnf.num_vars)) witness_ok = false;
    }
  }
  check.add("witness_complete", witness_ok);
  if (!witness_ok) return report;

  std::optional<std::pair<Natural, Natural>> planted;
  if (b.planted()) {
    const Natural p = Natural::from_decimal(b.meta.at("p"));
    const Natural q = Natural::from_decimal(b.meta.at("q"));
    planted.emplace(p, q);
    check.add("planted_product", p * q == wm.n, p.to_decimal() + " * " + q.to_decimal());
    const bool widths = p.bit_length() == wm.n_p && q.bit_length() == wm.n_q;
    check.add("planted_widths", widths);
    if (widths && p * q == wm.n) {
      const ConstraintSystem cs = build_circuit(p, q);
      const std::vector<std::uint8_t> values = planted_assignment(cs, to_bits(p), to_bits(q));
      CnfFormula with_origin = b.cnf;
      with_origin.var_origin = wm.var_origin;
      const Assignment a = project_assignment(with_origin, values);
      const auto bad = first_violated_clause(b.cnf, a);
      check.add("planted_satisfies_cnf", !bad, bad ? "violates clause " + std::to_string(*bad + 1) : "");
      const auto decoded = decode_witness(a, wm);
      check.add("planted_decodes", decoded == *planted,
                decoded.first.to_decimal() + " x " + decoded.second.to_decimal());
    }
    if (b.planted_spins) {
      const std::int64_t e = energy(b.ising, *b.planted_spins);
      check.add("planted_energy", e == b.ising.ground_energy,
                "H = " + std::to_string(e) + ", ground " + std::to_string(b.ising.ground_energy));
    } else {
      check.add("planted_energy", false, "planted bundle lacks spin section");
    }
  }

  if (std::max(wm.n_p, wm.n_q) <= options.count_models_up_to_d && b.cnf.num_vars <= options.max_vars) {
    const ModelCount mc = count_models(b.cnf, 16, options.max_vars);
    std::set<std::pair<Natural, Natural>> pairs;
    bool all_factor = mc.exhausted;
    for (const Assignment& a : mc.models) {
      const auto [p, q] = decode_witness(a, wm);
      if (p * q != wm.n || p.bit_length() != wm.n_p || q.bit_length() != wm.n_q) all_factor = false;
      pairs.emplace(p, q);
    }
    check.add("models_are_factorizations", all_factor && pairs.size() == mc.count,
              std::to_string(mc.count) + " models, " + std::to_string(pairs.size()) + " distinct pairs");
    const bool equal = std::any_of(pairs.begin(), pairs.end(), [](const auto& pq) { return pq.first == pq.second; });
    const std::uint64_t expected = expected_model_count(wm.n_p, wm.n_q, equal);
    check.add("model_count", mc.exhausted && mc.count == expected,
              "counted " + std::to_string(mc.count) + ", expected " + std::to_string(expected));
    if (planted) check.add("planted_among_models", pairs.count(*planted) == 1);
  }
  return report;
}

}  // namespace factorsat
