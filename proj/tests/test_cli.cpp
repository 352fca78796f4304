// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "factorsat/bench.hpp"
#include "factorsat/bundle.hpp"
#include "test_util.hpp"

namespace factorsat {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ProcessResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), FACTORSAT_CLI);
  return run_process(args, 120);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (std::string(FACTORSAT_CLI).empty()) GTEST_SKIP() << "CLI not built";
  }
  testing::TempDir dir_{"cli"};
};

TEST_F(Cli, VersionAndUsageErrors) {
  const ProcessResult v = cli({"--version"});
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_EQ(v.out.rfind("factorsat ", 0), 0U);
  EXPECT_EQ(cli({}).exit_code, 2);
  EXPECT_EQ(cli({"nosuch"}).exit_code, 2);
  EXPECT_EQ(cli({"gen", "--p", "15", "--q", "13", "--out", (dir_.path() / "x").string()}).exit_code, 2);
  EXPECT_EQ(cli({"gen", "--bits", "4", "--p", "11", "--out", (dir_.path() / "y").string()}).exit_code, 2);
}

TEST_F(Cli, GenAndVerifyGolden) {
  const auto out = dir_.path() / "b";
  ASSERT_EQ(cli({"gen", "--p", "11", "--q", "13", "--out", out.string()}).exit_code, 0);
  EXPECT_NE(slurp(out / "instance.cnf").find("p cnf 28 99\n"), std::string::npos);
  const InstanceBundle b = read_bundle(out);
  EXPECT_TRUE(b.planted());
  EXPECT_EQ(b.ising.n_spins, 40U);
  const ProcessResult v = cli({"verify", out.string()});
  EXPECT_EQ(v.exit_code, 0) << v.out;
  EXPECT_NE(v.out.find("bundle OK"), std::string::npos);
}

TEST_F(Cli, VerifyDetectsTampering) {
  const auto out = dir_.path() / "b";
  ASSERT_EQ(cli({"gen", "--p", "11", "--q", "13", "--out", out.string()}).exit_code, 0);
  std::string meta = slurp(out / "meta");
  const auto at = meta.find("\np=11\n");
  ASSERT_NE(at, std::string::npos) << meta;
  meta.replace(at, 6, "\np=7\n");
  std::ofstream(out / "meta", std::ios::trunc) << meta;
  EXPECT_EQ(cli({"verify", out.string()}).exit_code, 1);
}

TEST_F(Cli, GenIsDeterministic) {
  const auto a = dir_.path() / "a";
  const auto b = dir_.path() / "b";
  ASSERT_EQ(cli({"gen", "--bits", "10", "--seed", "42", "--out", a.string()}).exit_code, 0);
  ASSERT_EQ(cli({"gen", "--bits", "10", "--seed", "42", "--out", b.string()}).exit_code, 0);
  for (const char* f : {"instance.cnf", "instance.ising", "witness.map", "meta"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_FALSE(slurp(a / f).empty()) << f;
  }
}

TEST_F(Cli, BlindBundleOmitsFactors) {
  const auto out = dir_.path() / "blind";
  ASSERT_EQ(cli({"gen", "--bits", "6", "--seed", "1", "--no-planted", "--out", out.string()}).exit_code, 0);
  const InstanceBundle b = read_bundle(out);
  EXPECT_FALSE(b.planted());
  EXPECT_FALSE(b.planted_spins.has_value());
  EXPECT_EQ(slurp(out / "instance.ising").find("\nS "), std::string::npos);
}

TEST_F(Cli, BypassCounts) {
  const auto out = dir_.path() / "raw";
  ASSERT_EQ(cli({"gen", "--p", "11", "--q", "13", "--no-reduce", "--out", out.string()}).exit_code, 0);
  EXPECT_EQ(read_bundle(out).cnf.clauses.size(), 511U);
  EXPECT_EQ(cli({"verify", out.string()}).exit_code, 0);
}

TEST_F(Cli, BatchUsesIndexSeeds) {
  const auto out = dir_.path() / "batch";
  ASSERT_EQ(cli({"gen", "--bits", "5", "--seed", "3", "--batch", "3", "--jobs", "2", "--out", out.string()}).exit_code, 0);
  const auto single = dir_.path() / "single";
  ASSERT_EQ(cli({"gen", "--bits", "5", "--seed", std::to_string(batch_seed(3, 1)), "--out", single.string()}).exit_code, 0);
  EXPECT_EQ(slurp(out / "b0001" / "instance.cnf"), slurp(single / "instance.cnf"));
  EXPECT_TRUE(std::filesystem::exists(out / "b0002" / "meta"));
}

TEST_F(Cli, ScalingAndProfile) {
  const ProcessResult s = cli({"scaling", "--bits", "4", "--kv"});
  EXPECT_EQ(s.exit_code, 0);
  EXPECT_NE(s.out.find("contractions=72"), std::string::npos);
  EXPECT_EQ(cli({"scaling", "--bits", "6", "--validate", "2"}).exit_code, 0);
  const ProcessResult p = cli({"profile", "--bits", "3..4"});
  EXPECT_EQ(p.exit_code, 0);
  EXPECT_EQ(p.out.rfind("d,k,m_k,k_over_kmax,m_over_d2\n", 0), 0U);
}

TEST_F(Cli, BenchThenFit) {
  const auto csv = dir_.path() / "runs.csv";
  const ProcessResult b = cli({"bench", "--solver", std::string("dpll:") + FACTORSAT_DPLL_SOLVER + " {cnf}", "--bits",
                               "4..6", "--reps", "2", "--timeout", "60", "--out", csv.string()});
  ASSERT_EQ(b.exit_code, 0) << b.out << b.err;
  std::ifstream in(csv);
  const auto runs = read_runs_csv(in);
  EXPECT_EQ(runs.size(), 6U);
  const ProcessResult f = cli({"fit", "--in", csv.string()});
  EXPECT_EQ(f.exit_code, 0) << f.err;
  EXPECT_NE(f.out.find("alpha="), std::string::npos);
  EXPECT_EQ(cli({"fit", "--in", (dir_.path() / "missing.csv").string()}).exit_code, 1);
}

}  // namespace
}  // namespace factorsat
