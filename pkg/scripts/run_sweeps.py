#!/usr/bin/env python3
"""Run acceptance sweeps with adjustable sizes and print their findings.

    python3 scripts/run_sweeps.py            # all criteria, default sizes
    python3 scripts/run_sweeps.py 3 10 --exhaustive-games 3 --games 5000
"""
import argparse
import sys

from ntlcheck import sweeps


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("criteria", nargs="*", type=int, help="criterion numbers (default: all)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--full-nodes", type=int, default=5, help="criterion 3: all (d,p) labellings")
    ap.add_argument("--prop-nodes", type=int, default=4, help="criterion 3: full 1-prop alphabet")
    ap.add_argument("--shape-nodes", type=int, default=7, help="criterion 3: shapes with mutations")
    ap.add_argument("--random-trees", type=int, default=100, help="criterion 5: per formula")
    ap.add_argument("--samples", type=int, default=10_000, help="criterion 9")
    ap.add_argument("--exhaustive-games", type=int, default=3, help="criterion 10: exhaustive up to n")
    ap.add_argument("--games", type=int, default=3000, help="criterion 10: random games per size")
    args = ap.parse_args(argv)
    wanted = set(args.criteria or range(1, 11))

    runs = []
    if wanted & {1, 2}:
        runs.append(("1+2", sweeps.criterion_successors(args.seed + 1)))
    if 3 in wanted:
        runs.append(("3", sweeps.criterion_exec_tree_automaton(
            args.full_nodes, args.prop_nodes, args.shape_nodes, args.seed)))
    if wanted & {4, 5}:
        s4, s5 = sweeps.criterion_formula_automata(args.random_trees, args.seed)
        runs += [("4", s4), ("5", s5)]
    if 6 in wanted:
        runs.append(("6", sweeps.criterion_model_checking()))
    if 7 in wanted:
        runs.append(("7", sweeps.criterion_satisfiability()))
    if 8 in wanted:
        runs.append(("8", sweeps.criterion_scenarios()))
    if 9 in wanted:
        runs.append(("9", sweeps.criterion_monotonicity(args.samples, args.seed)))
    if 10 in wanted:
        runs.append(("10", sweeps.criterion_parity(args.exhaustive_games, args.games,
                                                   seed=args.seed)))
    failed = False
    for name, s in runs:
        verdict = "ok" if s.passed else "FAILURES"
        scope = "" if s.complete else " (reduced scope)"
        print(f"[{name}] {verdict}{scope} {s.seconds:.1f} s: {s.summary}")
        for d in s.detail:
            print("    " + d.replace("\n", "\n    "))
        failed |= not s.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
