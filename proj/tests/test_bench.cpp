// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "factorsat/bench.hpp"
#include "factorsat/error.hpp"
#include "test_util.hpp"

namespace factorsat {
namespace {

std::size_t count_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

TEST(SolverSpec, Parsing) {
  const SolverSpec s = parse_solver_spec("kis:kissat -q {cnf}");
  EXPECT_EQ(s.name, "kis");
  EXPECT_EQ(s.argv, (std::vector<std::string>{"kissat", "-q", "{cnf}"}));
  const SolverSpec quoted = parse_solver_spec("sh:sh -c 'cat \"$0\" > /dev/null' {cnf}");
  EXPECT_EQ(quoted.argv, (std::vector<std::string>{"sh", "-c", "cat \"$0\" > /dev/null", "{cnf}"}));
  for (const char* bad : {"kissat {cnf}", ":x {cnf}", "a:kissat", "a:x {cnf} {cnf}", "a b:x {cnf}", "a:"}) {
    EXPECT_THROW(parse_solver_spec(bad), Error) << bad;
  }
}

TEST(OutcomeNames, RoundTrip) {
  for (Outcome o : {Outcome::Sat, Outcome::Unsat, Outcome::Timeout, Outcome::Error}) {
    EXPECT_EQ(outcome_from_string(to_string(o)), o);
  }
  EXPECT_THROW(outcome_from_string("MAYBE"), ParseError);
}

TEST(RunProcess, CapturesOutputAndExitCode) {
  const ProcessResult r = run_process({"sh", "-c", "echo out; echo err >&2; exit 3"}, 10);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_FALSE(r.timed_out);
  EXPECT_EQ(r.out, "out\n");
  EXPECT_EQ(r.err, "err\n");
}

TEST(RunProcess, TimeoutKillsProcessGroup) {
  const ProcessResult r = run_process({"sh", "-c", "sleep 30 & sleep 30"}, 0.3);
  EXPECT_TRUE(r.timed_out);
  EXPECT_LT(r.wall_time_s, 5.0);
}

TEST(RunProcess, SpawnFailureThrows) {
  EXPECT_THROW(run_process({"/nonexistent/solver-binary"}, 1), Error);
  EXPECT_THROW(run_process({}, 1), Error);
}

TEST(SolverOutput, Parsing) {
  SolverOutput so;
  ASSERT_TRUE(parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", so));
  EXPECT_EQ(so.status, "SATISFIABLE");
  EXPECT_EQ(so.values, (std::vector<int>{1, -2, 3}));
  SolverOutput none;
  EXPECT_FALSE(parse_solver_output("c nothing\n", none));
}

class RunSolverTest : public ::testing::Test {
 protected:
  void SetUp() override {
    inst_ = testing::make_instance(11, 13);
    cnf_ = dir_.path() / "instance.cnf";
    std::ofstream out(cnf_);
    write_dimacs(inst_.cnf.formula, {}, out);
  }
  RunRecord run(const std::string& spec, double timeout = 10) {
    return run_solver(cnf_, inst_.cnf.witness, parse_solver_spec(spec), timeout);
  }
  testing::TempDir dir_{"runsolver"};
  Instance inst_;
  std::filesystem::path cnf_;
};

TEST_F(RunSolverTest, DpllSolverVerifies) {
  const RunRecord r = run(std::string("dpll:") + FACTORSAT_DPLL_SOLVER + " {cnf}");
  EXPECT_EQ(r.outcome, Outcome::Sat);
  EXPECT_TRUE(r.verified) << r.note;
  EXPECT_EQ(r.n, "143");
  EXPECT_TRUE((r.p == "11" && r.q == "13") || (r.p == "13" && r.q == "11"));
}

TEST_F(RunSolverTest, FakeSolverOutcomes) {
  EXPECT_EQ(run("u:sh -c 'echo s UNSATISFIABLE; exit 20' {cnf}").outcome, Outcome::Unsat);
  EXPECT_EQ(run("e:sh -c 'exit 1' {cnf}").outcome, Outcome::Error);
  EXPECT_EQ(run("t:sh -c 'sleep 30' {cnf}", 0.3).outcome, Outcome::Timeout);
  const RunRecord wrong = run("w:sh -c 'echo s SATISFIABLE; echo v 0; exit 10' {cnf}");
  EXPECT_EQ(wrong.outcome, Outcome::Sat);
  EXPECT_FALSE(wrong.verified);
}

TEST(Campaign, WritesRowsAndResumes) {
  testing::TempDir dir("campaign");
  CampaignOptions o;
  o.d_min = 3;
  o.d_max = 4;
  o.reps = 2;
  o.seed = 9;
  o.timeout_s = 30;
  o.solvers = {parse_solver_spec(std::string("dpll:") + FACTORSAT_DPLL_SOLVER + " {cnf}")};
  o.csv = dir.path() / "runs.csv";
  std::size_t seen = 0;
  const auto first = campaign(o, [&](const RunRecord&) { ++seen; });
  EXPECT_EQ(first.size(), 4U);
  EXPECT_EQ(seen, 4U);
  for (const RunRecord& r : first) {
    EXPECT_EQ(r.outcome, Outcome::Sat);
    EXPECT_TRUE(r.verified) << r.note;
  }
  EXPECT_EQ(count_lines(o.csv), 5U);
  const auto bundle = dir.path() / "runs.csv.instances" / ("d3_s" + std::to_string(campaign_seed(9, 3, 0)));
  EXPECT_TRUE(std::filesystem::exists(bundle / "instance.cnf"));
  EXPECT_FALSE(read_bundle(bundle).planted());

  EXPECT_TRUE(campaign(o).empty());
  EXPECT_EQ(count_lines(o.csv), 5U);

  o.reps = 3;
  EXPECT_EQ(campaign(o).size(), 2U);
  std::ifstream in(o.csv);
  EXPECT_EQ(read_runs_csv(in).size(), 6U);
}

TEST(Campaign, EmptyRangeWritesHeaderOnly) {
  testing::TempDir dir("campaign_empty");
  CampaignOptions o;
  o.d_min = 5;
  o.d_max = 4;
  o.csv = dir.path() / "runs.csv";
  EXPECT_TRUE(campaign(o).empty());
  std::ifstream in(o.csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kRunsHeader);
}

TEST(Campaign, SeedsAreDistinct) {
  std::set<std::uint64_t> seeds;
  for (unsigned d = 8; d <= 14; ++d) {
    for (unsigned rep = 0; rep < 5; ++rep) seeds.insert(campaign_seed(1, d, rep));
  }
  EXPECT_EQ(seeds.size(), 35U);
}

TEST(RunsCsv, RoundTripAndErrors) {
  RunRecord r;
  r.d = 9;
  r.seed = 123;
  r.solver = "k";
  r.wall_time_s = 0.25;
  r.outcome = Outcome::Sat;
  r.verified = true;
  r.p = "269";
  r.q = "293";
  r.n = "78817";
  std::stringstream io;
  io << kRunsHeader << '\n';
  write_run_row(r, io);
  const auto back = read_runs_csv(io);
  ASSERT_EQ(back.size(), 1U);
  EXPECT_EQ(back[0].seed, 123U);
  EXPECT_EQ(back[0].outcome, Outcome::Sat);
  EXPECT_DOUBLE_EQ(back[0].wall_time_s, 0.25);
  EXPECT_EQ(back[0].n, "78817");
  std::istringstream timeout("8,1,k,3600.000000,TIMEOUT,0,,,15\n");
  EXPECT_EQ(read_runs_csv(timeout)[0].p, "");
  std::istringstream bad("8,1,k\n");
  EXPECT_THROW(read_runs_csv(bad), ParseError);
}

TEST(Fit, ExactSynthetic) {
  std::vector<std::pair<double, double>> pts;
  for (int d = 8; d <= 14; ++d) pts.emplace_back(d, std::pow(10.0, 0.3 * d - 2.0));
  const FitResult f = fit_points(pts);
  EXPECT_NEAR(f.alpha, 0.3, 1e-12);
  EXPECT_NEAR(f.intercept, -2.0, 1e-12);
  EXPECT_NEAR(f.beta, 0.3 / std::log10(2.0), 1e-12);
}

TEST(Fit, Errors) {
  EXPECT_THROW(fit_points({{8, 1.0}, {8, 2.0}}), Error);
  EXPECT_THROW(fit_points({{8, 1.0}, {9, 0.0}}), Error);
}

TEST(Fit, AggregatesVerifiedSatOnly) {
  std::vector<RunRecord> rs;
  auto add = [&](unsigned d, double t, Outcome o, bool v) {
    RunRecord r;
    r.d = d;
    r.wall_time_s = t;
    r.outcome = o;
    r.verified = v;
    rs.push_back(r);
  };
  add(8, 1, Outcome::Sat, true);
  add(8, 100, Outcome::Sat, true);
  add(8, 10, Outcome::Sat, true);
  add(9, 10, Outcome::Sat, true);
  add(9, 1e6, Outcome::Timeout, false);
  add(9, 1e6, Outcome::Sat, false);
  const FitResult med = fit_loglinear(rs);
  EXPECT_NEAR(med.alpha, 0.0, 1e-12);
  const FitResult avg = fit_loglinear(rs, mean);
  EXPECT_NEAR(avg.alpha, 1.0 - std::log10(37.0), 1e-12);
  EXPECT_DOUBLE_EQ(median({1, 2, 3, 4}), 2.5);
  EXPECT_THROW(median({}), Error);
}

}  // namespace
}  // namespace factorsat
