"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines; they are
also written to ``acceptance_report.txt`` next to this directory.
A criterion passes only when its sweep found no failure and covered the
criterion's full scope; a reduced scope is reported as FAIL with the
reduced sweep's result.
"""
import os

import pytest

from ntlcheck import sweeps

REPORT = os.path.join(os.path.dirname(__file__), os.pardir, "acceptance_report.txt")
_lines = {}


def _report(number, title, sweep, budget=None):
    ok = sweep.passed and sweep.complete
    over = budget is not None and sweep.seconds > budget
    ok = ok and not over
    notes = []
    if not sweep.complete:
        notes.append("scope incomplete")
    if over:
        notes.append(f"over the {budget} s budget")
    note = f" [{'; '.join(notes)}]" if notes else ""
    line = (f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {sweep.summary} "
            f"({sweep.seconds:.1f} s){note}")
    print(line)
    _lines[number] = line
    with open(REPORT, "w", encoding="utf-8") as fh:
        fh.write("\n".join(_lines[k] for k in sorted(_lines)) + "\n")
    for d in sweep.detail[:5]:
        print("   ", d)
    return ok


@pytest.fixture(scope="module")
def successors():
    return sweeps.criterion_successors()


@pytest.fixture(scope="module")
def formula_automata():
    return sweeps.criterion_formula_automata()


def test_criterion_01_successor_equivalence(successors):
    # criterion 2 shares this run and its time
    assert _report(1, "successor equivalence", successors, 60)


def test_criterion_02_characterization(successors):
    assert _report(2, "characterization and stack level", successors, 60)


def test_criterion_03_exec_tree_automaton():
    assert _report(3, "A_ET exactness", sweeps.criterion_exec_tree_automaton(), 120)


def test_criterion_04_formula_automaton(formula_automata):
    assert _report(4, "formula automaton vs oracle", formula_automata[0], 600)


def test_criterion_05_dealternation(formula_automata):
    assert _report(5, "dealternation equivalence", formula_automata[1])


def test_criterion_06_model_checking():
    assert _report(6, "model checking vs oracle", sweeps.criterion_model_checking(), 900)


def test_criterion_07_satisfiability():
    assert _report(7, "satisfiability round trip", sweeps.criterion_satisfiability())


def test_criterion_08_scenarios():
    assert _report(8, "lock pair and single-indexed embedding", sweeps.criterion_scenarios(), 60)


def test_criterion_09_monotonicity():
    assert _report(9, "monotonicity", sweeps.criterion_monotonicity())


def test_criterion_10_parity():
    assert _report(10, "parity solver vs brute force", sweeps.criterion_parity(), 120)
