#!/usr/bin/env python3
"""Satisfiability verdicts, round-trip results and witness sizes for the corpus formulas."""
import sys
import time

from ntlcheck.checker import satisfiable
from ntlcheck.corpus import SAT_FORMULAS, UNSAT_FORMULAS
from ntlcheck.formula import parse_formula


def main():
    wrong = 0
    for expected, texts in (("sat", SAT_FORMULAS), ("unsat", UNSAT_FORMULAS)):
        for text in texts:
            t0 = time.perf_counter()
            r = satisfiable(parse_formula(text))
            size = len(r.witness.labels) if r.witness is not None else "-"
            ok = r.verdict == expected and r.stats.get("round_trip", "holds") == "holds"
            wrong += not ok
            print(f"{text:45s} {r.verdict:6s} round-trip={r.stats.get('round_trip', '-'):9s} "
                  f"classes={size!s:4s} {time.perf_counter() - t0:6.2f} s{'' if ok else '  WRONG'}",
                  flush=True)
    return 1 if wrong else 0


if __name__ == "__main__":
    sys.exit(main())
