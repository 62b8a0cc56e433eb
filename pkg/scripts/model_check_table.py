#!/usr/bin/env python3
"""Per-pair table of checker verdict, oracle verdict, time and automaton size for the corpus."""
import sys
import time

from ntlcheck.checker import model_check
from ntlcheck.corpus import FORMULAS, corpus_dpn, corpus_pairs
from ntlcheck.formula import parse_formula
from ntlcheck.oracle import dpn_models_oracle


def main():
    print(f"{'dpn':15s} {'formula':16s} {'oracle':8s} {'checker':10s} {'seconds':>8s} {'states':>8s}")
    disagree = 0
    t0 = time.perf_counter()
    for d, f in corpus_pairs():
        m, phi = corpus_dpn(d), parse_formula(FORMULAS[f][0])
        o = dpn_models_oracle(m, phi)
        r = model_check(m, phi)
        same = (o.verdict == "true") == (r.verdict == "holds")
        disagree += not same
        print(f"{d:15s} {f:16s} {o.verdict:8s} {r.verdict:10s} {r.stats.get('seconds', 0):8.2f} "
              f"{r.stats.get('states', '-'):>8}{'' if same else '  DISAGREE'}", flush=True)
    print(f"total {time.perf_counter() - t0:.1f} s, {disagree} disagreements")
    return 1 if disagree else 0


if __name__ == "__main__":
    sys.exit(main())
