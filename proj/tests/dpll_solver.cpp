// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Test helper speaking the SAT-competition output protocol.

#include <fstream>
#include <iostream>

#include "factorsat/cnf.hpp"
#include "factorsat/verify.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: factorsat_dpll_solver FILE.cnf\n";
    return 2;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot read " << argv[1] << '\n';
    return 2;
  }
  const factorsat::CnfFormula f = factorsat::parse_dimacs(in);
  const factorsat::ModelCount mc = factorsat::count_models(f, 1, 1 << 20);
  if (mc.count == 0) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::cout << "s SATISFIABLE\nv";
  for (int v = 1; v <= f.num_vars; ++v) std::cout << ' ' << (mc.models.front()[v - 1] != 0 ? v : -v);
  std::cout << " 0\n";
  return 10;
}
