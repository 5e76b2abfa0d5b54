#!/usr/bin/env python3
"""Independent SAT oracle for the 3-CNF reduction equivalence experiments.

Decides satisfiability of exact-3 DIMACS formulas by brute force over all
assignments and cross-checks the CLI's reduce/solve pipeline: for every
formula, SAT must hold iff the reduced subset instance has a witness.

    python3 tools/oracle_reduction.py --cli build/srds-sim [--samples 50]

Without --cli it prints the SAT verdicts for the built-in corpus so they can
be frozen into the acceptance test.
"""

import argparse
import itertools
import json
import random
import subprocess
import sys
import tempfile


def parse_dimacs(text: str):
    nvars = 0
    clauses = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            nvars = int(line.split()[2])
            continue
        lits = [int(x) for x in line.split()]
        assert lits[-1] == 0 and len(lits) == 4, "exact-3 clauses required"
        clauses.append(lits[:3])
    return nvars, clauses


def brute_sat(nvars: int, clauses) -> bool:
    for bits in itertools.product([False, True], repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def sample_formula(rng: random.Random, nvars: int, nclauses: int) -> str:
    lines = [f"p cnf {nvars} {nclauses}"]
    for _ in range(nclauses):
        vs = rng.sample(range(1, nvars + 1), 3)
        lits = [v if rng.random() < 0.5 else -v for v in vs]
        lines.append(" ".join(map(str, lits)) + " 0")
    return "\n".join(lines) + "\n"


def cli_has_witness(cli: str, dimacs: str, ell: int, cap: int = 40) -> bool:
    with tempfile.NamedTemporaryFile("w", suffix=".cnf") as f:
        f.write(dimacs)
        f.flush()
        red = subprocess.run(
            [cli, "reduce", "--cnf", f.name, "--ell", str(ell)],
            capture_output=True, text=True, check=True,
        )
    with tempfile.NamedTemporaryFile("w", suffix=".json") as g:
        g.write(red.stdout)
        g.flush()
        sol = subprocess.run(
            [cli, "solve", "--instance", g.name, "--cap", str(cap)],
            capture_output=True, text=True, check=True,
        )
    out = json.loads(sol.stdout)["result"]
    assert not out["result"]["found"] or out["witness_checks"], "witness must check"
    return out["result"]["found"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", help="path to the simulator binary")
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    corpus = [sample_formula(rng, rng.randint(3, 4), rng.randint(3, 6))
              for _ in range(args.samples)]

    sat_count = 0
    for i, dimacs in enumerate(corpus):
        nvars, clauses = parse_dimacs(dimacs)
        sat = brute_sat(nvars, clauses)
        sat_count += sat
        if not args.cli:
            continue
        for ell in (2, 3, 4):
            found = cli_has_witness(args.cli, dimacs, ell)
            if found != sat:
                print(f"MISMATCH sample {i} ell={ell}: sat={sat} witness={found}")
                print(dimacs)
                sys.exit(1)
    print(f"{args.samples} sampled formulas, {sat_count} satisfiable")
    if args.cli:
        print("reduce/solve agrees with brute-force SAT at ell in {2,3,4}")


if __name__ == "__main__":
    main()
