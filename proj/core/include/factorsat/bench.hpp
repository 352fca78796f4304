// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "factorsat/cnf.hpp"

namespace factorsat {

/// External solver invocation. The argument list holds the `{cnf}`
/// placeholder exactly once.
struct SolverSpec {
  std::string name;
  std::vector<std::string> argv;
  /// SAT-competition convention by default: 10 SAT, 20 UNSAT.
  std::set<int> success_codes{0, 10, 20};
};

/// Parses `name:command arg ... {cnf} ...`. Arguments split on whitespace;
/// single or double quotes group words. Throws Error.
SolverSpec parse_solver_spec(const std::string& text);

enum class Outcome { Sat, Unsat, Timeout, Error };
std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

struct RunRecord {
  unsigned d = 0;
  std::uint64_t seed = 0;
  std::string solver;
  double wall_time_s = 0;
  Outcome outcome = Outcome::Error;
  bool verified = false;
  std::string p, q, n;
  /// Captured stderr or anomaly description; not written to CSV.
  std::string note;
};

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  double wall_time_s = 0;
  std::string out, err;
};

/// fork/exec in a fresh process group; the group is killed on timeout.
ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s);

/// Reads `s` and `v` lines. Returns false if no status line is present.
struct SolverOutput {
  std::string status;
  std::vector<int> values;
};
bool parse_solver_output(const std::string& text, SolverOutput& out);

/// Runs the solver on a CNF file, then decodes and multiplies the witness.
RunRecord run_solver(const std::filesystem::path& cnf, const WitnessMap& wm, const SolverSpec& spec,
                     double timeout_s);
RunRecord run_solver(const std::filesystem::path& cnf, const std::filesystem::path& witness,
                     const SolverSpec& spec, double timeout_s);

struct CampaignOptions {
  unsigned d_min = 8;
  unsigned d_max = 14;
  unsigned reps = 5;
  std::uint64_t seed = 1;
  double timeout_s = 3600;
  std::vector<SolverSpec> solvers;
  std::filesystem::path csv;
  /// Holds generated instances; defaults to `<csv>.instances`.
  std::filesystem::path work_dir;
};

inline constexpr const char* kRunsHeader = "d,seed,solver,wall_time_s,outcome,verified,p,q,N";

/// Instance seed for repetition `rep` at bit-length d.
std::uint64_t campaign_seed(std::uint64_t base, unsigned d, unsigned rep);

/// Appends one CSV row per new (d, seed, solver) run and skips triples that
/// are already present. `progress` receives each new record.
std::vector<RunRecord> campaign(const CampaignOptions& options,
                                const std::function<void(const RunRecord&)>& progress = {});

void write_run_row(const RunRecord& r, std::ostream& out);
std::vector<RunRecord> read_runs_csv(std::istream& in);

using Aggregator = std::function<double(std::vector<double>)>;
double median(std::vector<double> values);
double mean(std::vector<double> values);

struct FitResult {
  double alpha = 0;
  double intercept = 0;
  double beta = 0;
  /// (d, aggregated wall time) pairs used in the fit.
  std::vector<std::pair<double, double>> points;
};

/// Least squares of log10(T) on d over (d, T) pairs. Throws Error with fewer
/// than two distinct d or a non-positive T.
FitResult fit_points(const std::vector<std::pair<double, double>>& points);

/// Aggregates SAT and verified records per d, then fits.
FitResult fit_loglinear(const std::vector<RunRecord>& records, const Aggregator& aggregate = median);

}  // namespace factorsat
