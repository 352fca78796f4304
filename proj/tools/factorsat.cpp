// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "factorsat/bench.hpp"
#include "factorsat/bundle.hpp"
#include "factorsat/error.hpp"
#include "factorsat/scaling.hpp"
#include "factorsat/verify.hpp"
#include "factorsat/version.hpp"

namespace fs = std::filesystem;
using namespace factorsat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Accepts "8", "8..16" or "8-16".
std::pair<unsigned, unsigned> parse_range(const std::string& text) {
  std::string lo = text;
  std::string hi = text;
  for (const char* sep : {"..", "-"}) {
    const auto pos = text.find(sep);
    if (pos != std::string::npos) {
      lo = text.substr(0, pos);
      hi = text.substr(pos + std::string(sep).size());
      break;
    }
  }
  try {
    std::size_t used = 0;
    const unsigned a = static_cast<unsigned>(std::stoul(lo, &used));
    if (used != lo.size()) throw std::invalid_argument(lo);
    const unsigned b = static_cast<unsigned>(std::stoul(hi, &used));
    if (used != hi.size()) throw std::invalid_argument(hi);
    if (a > b) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("bad range '" + text + "'; expected N or A..B");
  }
}

std::vector<unsigned> parse_list(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto [a, b] = parse_range(item);
    for (unsigned d = a; d <= b; ++d) out.push_back(d);
  }
  if (out.empty()) throw UsageError("empty bit-length list");
  return out;
}

struct GenArgs {
  std::optional<unsigned> bits, np, nq;
  std::optional<std::string> p, q;
  std::uint64_t seed = 0;
  std::string out;
  bool no_reduce = false;
  bool no_planted = false;
  bool allow_equal = false;
  std::string trace;
  std::string dump_circuit;
  unsigned batch = 0;
  unsigned jobs = 1;
};

void print_summary(const Instance& inst, const fs::path& dir) {
  std::cout << dir.string() << ": N=" << inst.circuit.n.to_decimal() << " n_p=" << inst.circuit.n_p
            << " n_q=" << inst.circuit.n_q << " vars " << inst.circuit.num_vars() << " -> "
            << inst.cnf.formula.num_vars << ", clauses " << inst.cnf.raw_clauses << " -> "
            << inst.cnf.formula.clauses.size() << ", spins " << inst.ising.n_spins << ", E0 " << inst.ising.e0
            << '\n';
}

int cmd_gen(const GenArgs& a) {
  GenerateOptions base;
  base.bits = a.bits;
  base.n_p = a.np;
  base.n_q = a.nq;
  if (a.p) base.p = Natural::from_decimal(*a.p);
  if (a.q) base.q = Natural::from_decimal(*a.q);
  base.seed = a.seed;
  base.reduce = !a.no_reduce;
  base.allow_equal = a.allow_equal;

  fs::path out = a.out;
  if (out.empty()) {
    const char* env = std::getenv("FACTORSAT_OUT");
    out = env != nullptr && *env != '\0' ? fs::path(env) : fs::path("bundle");
  }

  if (a.batch == 0) {
    std::ofstream trace_file;
    if (!a.trace.empty()) {
      trace_file.open(a.trace, std::ios::binary | std::ios::trunc);
      if (!trace_file) throw Error("cannot write " + a.trace);
    }
    const Instance inst = generate(base, a.trace.empty() ? nullptr : &trace_file);
    write_bundle(make_bundle(inst, !a.no_planted), out);
    if (!a.dump_circuit.empty()) {
      std::ofstream dump(a.dump_circuit, std::ios::binary | std::ios::trunc);
      if (!dump) throw Error("cannot write " + a.dump_circuit);
      write_circuit_dump(inst.circuit, dump);
    }
    print_summary(inst, out);
    return kExitOk;
  }

  if (!a.trace.empty() || !a.dump_circuit.empty()) throw UsageError("--trace and --dump-circuit need a single bundle");
  if (base.p) throw UsageError("--batch needs sampled primes (--bits or --np/--nq)");
  std::atomic<unsigned> next{0};
  std::mutex io;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (unsigned i = next++; i < a.batch; i = next++) {
      try {
        GenerateOptions o = base;
        o.seed = batch_seed(a.seed, i);
        const Instance inst = generate(o);
        std::ostringstream name;
        name << "b" << std::setw(4) << std::setfill('0') << i;
        const fs::path dir = out / name.str();
        write_bundle(make_bundle(inst, !a.no_planted), dir);
        const std::lock_guard lock(io);
        print_summary(inst, dir);
      } catch (...) {
        const std::lock_guard lock(io);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::max(1U, a.jobs); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return kExitOk;
}

int cmd_verify(const std::string& dir, const CertifyOptions& options) {
  const InstanceBundle b = read_bundle(dir);
  const CertifyReport report = certify_instance(b, options);
  for (const CheckResult& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ')';
    std::cout << '\n';
  }
  std::cout << (report.ok() ? "bundle OK\n" : "bundle FAILED\n");
  return report.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_scaling(unsigned d, bool kv, unsigned validate_seeds) {
  write_size_report(predict(d), kv, std::cout);
  int rc = kExitOk;
  for (unsigned s = 0; s < validate_seeds; ++s) {
    const ValidationRecord rec = validate(d, derive_seed(0x5ca1, d, s));
    std::cout << "validate seed " << rec.seed << " p=" << rec.p.to_decimal() << " q=" << rec.q.to_decimal()
              << (rec.ok() ? " OK" : " MISMATCH") << '\n';
    for (const FieldCheck& m : rec.mismatches()) {
      std::cout << "  " << m.field << ": predicted " << m.predicted << ", constructed " << m.constructed << '\n';
      rc = kExitCheckFailed;
    }
  }
  return rc;
}

int cmd_profile(const std::string& list, const std::string& out) {
  const std::vector<unsigned> ds = parse_list(list);
  if (out.empty() || out == "-") {
    write_profile_csv(ds, std::cout);
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + out);
    write_profile_csv(ds, f);
  }
  return kExitOk;
}

int cmd_bench(const std::vector<std::string>& solvers, const std::string& bits, unsigned reps, double timeout,
              const std::string& out, std::uint64_t seed, const std::string& work) {
  CampaignOptions o;
  std::tie(o.d_min, o.d_max) = parse_range(bits);
  if (o.d_min < 2) throw UsageError("bit-lengths start at 2");
  o.reps = reps;
  o.timeout_s = timeout;
  o.csv = out;
  o.seed = seed;
  o.work_dir = work;
  for (const std::string& s : solvers) o.solvers.push_back(parse_solver_spec(s));
  bool clean = true;
  campaign(o, [&](const RunRecord& r) {
    std::cout << "d=" << r.d << " seed=" << r.seed << ' ' << r.solver << ' ' << to_string(r.outcome) << ' '
              << std::fixed << std::setprecision(3) << r.wall_time_s << "s" << (r.verified ? " verified" : "");
    if (!r.note.empty()) std::cout << "  [" << r.note << ']';
    std::cout << std::endl;
    if (r.outcome == Outcome::Sat && !r.verified) clean = false;
    if (r.outcome == Outcome::Unsat || r.outcome == Outcome::Error) clean = false;
  });
  return clean ? kExitOk : kExitCheckFailed;
}

int cmd_fit(const std::string& in_path, const std::string& aggregator) {
  std::ifstream in(in_path);
  if (!in) throw Error("cannot read " + in_path);
  const auto records = read_runs_csv(in);
  const FitResult f = fit_loglinear(records, aggregator == "mean" ? Aggregator(mean) : Aggregator(median));
  std::cout << std::setprecision(10);
  for (const auto& [d, t] : f.points) std::cout << "d=" << d << " " << aggregator << "_T=" << t << '\n';
  std::cout << "alpha=" << f.alpha << "\nintercept=" << f.intercept << "\nbeta=" << f.beta << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planted factoring instances: circuit, CNF and Ising bundles"};
  app.set_version_flag("--version", std::string("factorsat ") + std::string(kVersion));
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance bundle");
  auto* o_bits = g->add_option("--bits", gen.bits, "Bit-length d of both primes")->check(CLI::Range(2U, 4096U));
  auto* o_np = g->add_option("--np", gen.np, "Bit-length of p")->check(CLI::Range(2U, 4096U));
  auto* o_nq = g->add_option("--nq", gen.nq, "Bit-length of q")->check(CLI::Range(2U, 4096U));
  auto* o_p = g->add_option("--p", gen.p, "Prime p (decimal)");
  auto* o_q = g->add_option("--q", gen.q, "Prime q (decimal)");
  o_np->needs(o_nq);
  o_nq->needs(o_np);
  o_p->needs(o_q);
  o_q->needs(o_p);
  o_bits->excludes(o_np, o_nq, o_p, o_q);
  o_np->excludes(o_p, o_q);
  o_nq->excludes(o_p, o_q);
  g->add_option("--seed", gen.seed, "Instance seed");
  g->add_option("--out", gen.out, "Bundle directory (default: $FACTORSAT_OUT or ./bundle)");
  g->add_flag("--no-reduce", gen.no_reduce, "Substitute pins only; skip equivalence reasoning");
  g->add_flag("--no-planted", gen.no_planted, "Omit p, q and planted spins (blind bundle)");
  g->add_flag("--allow-equal", gen.allow_equal, "Permit p == q");
  g->add_option("--trace", gen.trace, "Write the reduction log to this file");
  g->add_option("--dump-circuit", gen.dump_circuit, "Write the raw circuit to this file");
  g->add_option("--batch", gen.batch, "Generate this many bundles under --out with derived seeds");
  g->add_option("--jobs", gen.jobs, "Worker threads for --batch")->check(CLI::Range(1U, 256U));

  std::string verify_dir;
  CertifyOptions certify;
  auto* v = app.add_subcommand("verify", "Check an instance bundle");
  v->add_option("bundle", verify_dir, "Bundle directory")->required();
  v->add_option("--count-up-to", certify.count_models_up_to_d, "Count models when max(n_p, n_q) is at most this");
  v->add_option("--max-vars", certify.max_vars, "Variable limit for the model counter");

  unsigned scaling_bits = 0;
  bool scaling_kv = false;
  unsigned scaling_validate = 0;
  auto* s = app.add_subcommand("scaling", "Print closed-form instance sizes");
  s->add_option("--bits", scaling_bits, "Bit-length d")->required()->check(CLI::Range(2U, 30000U));
  s->add_flag("--kv", scaling_kv, "key=value output");
  s->add_option("--validate", scaling_validate, "Also build this many random instances and compare");

  std::string profile_bits = "4,6,8,10,12";
  std::string profile_out;
  auto* pr = app.add_subcommand("profile", "Column-population CSV");
  pr->add_option("--bits", profile_bits, "Comma list of d or A..B ranges");
  pr->add_option("--out", profile_out, "CSV path (default: stdout)");

  std::vector<std::string> bench_solvers;
  std::string bench_bits = "8..14";
  unsigned bench_reps = 5;
  double bench_timeout = 3600;
  std::string bench_out = "runs.csv";
  std::uint64_t bench_seed = 1;
  std::string bench_work;
  auto* b = app.add_subcommand("bench", "Run external SAT solvers over generated instances");
  b->add_option("--solver", bench_solvers, "name:command ... {cnf}; repeatable");
  b->add_option("--bits", bench_bits, "Range A..B");
  b->add_option("--reps", bench_reps, "Instances per bit-length");
  b->add_option("--timeout", bench_timeout, "Seconds per run")->check(CLI::PositiveNumber);
  b->add_option("--out", bench_out, "Append-only CSV");
  b->add_option("--seed", bench_seed, "Campaign seed");
  b->add_option("--work-dir", bench_work, "Instance directory (default: <out>.instances)");

  std::string fit_in;
  std::string fit_agg = "median";
  auto* f = app.add_subcommand("fit", "Fit log10(T) = alpha d + c to campaign results");
  f->add_option("--in", fit_in, "Runs CSV")->required();
  f->add_option("--aggregator", fit_agg, "Per-d aggregator")->check(CLI::IsMember({"median", "mean"}));

  if (argc <= 1) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*v) return cmd_verify(verify_dir, certify);
    if (*s) return cmd_scaling(scaling_bits, scaling_kv, scaling_validate);
    if (*pr) return cmd_profile(profile_bits, profile_out);
    if (*b) return cmd_bench(bench_solvers, bench_bits, bench_reps, bench_timeout, bench_out, bench_seed, bench_work);
    if (*f) return cmd_fit(fit_in, fit_agg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  std::cerr << app.help();
  return kExitUsage;
}
