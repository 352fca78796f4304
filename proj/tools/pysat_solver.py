#!/usr/bin/env python3
# Copyright 2026 The factorsat Authors.
# SPDX-License-Identifier: Apache-2.0
"""Runs CaDiCaL through python-sat and prints SAT-competition output.

Usage: pysat_solver.py FILE.cnf [SOLVER]   (SOLVER defaults to cadical153)
Exit status is 10 for SAT and 20 for UNSAT.
"""

import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    if len(sys.argv) not in (2, 3):
        print(__doc__, file=sys.stderr)
        return 2
    name = sys.argv[2] if len(sys.argv) == 3 else "cadical153"
    formula = CNF(from_file=sys.argv[1])
    with Solver(name=name, bootstrap_with=formula.clauses) as solver:
        if not solver.solve():
            print("s UNSATISFIABLE")
            return 20
        model = solver.get_model() or []
    seen = {abs(lit) for lit in model}
    model += [-v for v in range(1, formula.nv + 1) if v not in seen]
    model.sort(key=abs)
    print("s SATISFIABLE")
    for start in range(0, len(model), 20):
        print("v " + " ".join(str(lit) for lit in model[start:start + 20]))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
