"""Model checking and satisfiability of NTL formulas over DPNs."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .automata import (Alphabet, ResourceLimit, check_emptiness, intersect,
                       npta_membership_regular)
from .constructions import (build_dpn_automaton, build_exec_tree_automaton,
                            build_formula_npta, synthesize_dpn)
from .dpn import Dpn, make_dpn
from .execution import RegularTree
from .formula import (TRUE_PROP, And, Atom, Formula, Next, Not, Or, Succ, negate, props,
                      reach_eventually, rename_apart, require_well_formed, to_pnf)

HOLDS, VIOLATED = "holds", "violated"
SAT, UNSAT = "sat", "unsat"
LIMIT = "resourceLimit"

DEFAULT_CAP = 2_000_000


@dataclass
class CheckResult:
    verdict: str
    counterexample: Optional[RegularTree] = None
    dpn: Optional[Dpn] = None
    stats: dict = field(default_factory=dict)
    message: str = ""


@dataclass
class SatResult:
    verdict: str
    witness: Optional[RegularTree] = None
    dpn: Optional[Dpn] = None
    stats: dict = field(default_factory=dict)
    message: str = ""


def universe(phi: Formula, m: Optional[Dpn] = None, extra=()) -> Alphabet:
    ps = set(props(phi)) | set(extra) | {TRUE_PROP}
    if m is not None:
        ps |= m.props
    return Alphabet(ps)


def model_check(m: Dpn, phi: Formula, cap: int = DEFAULT_CAP, extra_props=()) -> CheckResult:
    """Decide whether every execution graph of ``m`` satisfies ``phi``."""
    require_well_formed(phi)
    t0 = time.perf_counter()
    alpha = universe(phi, m, extra_props)
    neg = negate(phi)
    try:
        b = intersect(build_dpn_automaton(m, alpha), build_formula_npta(neg, alpha, cap))
        res = check_emptiness(b, cap)
    except ResourceLimit as e:
        return CheckResult(LIMIT, message=str(e),
                           stats={"seconds": time.perf_counter() - t0})
    stats = {"states": res.states, "positions": res.positions,
             "seconds": time.perf_counter() - t0}
    if res.empty:
        return CheckResult(HOLDS, stats=stats)
    return CheckResult(VIOLATED, res.witness, synthesize_dpn(res.witness, check=False), stats)


def satisfiable(phi: Formula, cap: int = DEFAULT_CAP, verify: bool = True,
                extra_props=()) -> SatResult:
    """Decide whether some execution graph satisfies ``phi``.

    A satisfying regular tree is turned into a one-location DPN; with
    ``verify`` that DPN is model checked against ``phi`` as a round trip.
    """
    require_well_formed(phi)
    t0 = time.perf_counter()
    alpha = universe(phi, None, extra_props)
    try:
        a = build_formula_npta(to_pnf(phi), alpha, cap)
        res = check_emptiness(a, cap)
    except ResourceLimit as e:
        return SatResult(LIMIT, message=str(e), stats={"seconds": time.perf_counter() - t0})
    stats = {"states": res.states, "positions": res.positions}
    if res.empty:
        stats["seconds"] = time.perf_counter() - t0
        return SatResult(UNSAT, stats=stats)
    m = synthesize_dpn(res.witness)
    out = SatResult(SAT, res.witness, m, stats)
    if verify:
        back = model_check(m, phi, cap)
        stats["round_trip"] = back.verdict
        if back.verdict != HOLDS:
            out.message = f"round trip model check returned {back.verdict}"
    stats["seconds"] = time.perf_counter() - t0
    return out


def counterexample_is_valid(m: Dpn, phi: Formula, t: RegularTree, cap: int = DEFAULT_CAP) -> bool:
    """The tree is accepted by A_M, A_ET and the automaton of the negated formula."""
    alpha = universe(phi, m)
    if not npta_membership_regular(build_exec_tree_automaton(alpha), t):
        return False
    if not npta_membership_regular(build_dpn_automaton(m, alpha), t):
        return False
    return npta_membership_regular(build_formula_npta(negate(phi), alpha, cap), t)


# ---------------------------------------------------------------- single-indexed LTL


class EmbeddingError(ValueError):
    pass


@dataclass
class Component:
    """One pushdown system of a multi-component network.

    Spawn rules may start any component; their targets are checked against
    the union of all components when embedding.
    """

    locations: tuple
    stack_symbols: tuple
    init: tuple
    rules: tuple
    labels: dict = field(default_factory=dict)


def embed_single_indexed(components, tags=None):
    """Encode a single-indexed LTL question as an NTL model-checking question.

    ``components`` is a sequence of ``(Component, formula)`` pairs; the first
    component runs at the root and LTL next is written ``<g>``.  Every head
    of component ``i`` gets the fresh proposition ``tags[i]``.  Returns
    ``(dpn, formula)``: some execution graph has all local runs of every
    component satisfying that component's formula iff ``dpn`` does not
    satisfy ``formula``.
    """
    n = len(components)
    if n == 0:
        raise EmbeddingError("no components")
    tags = list(tags or [f"__p{i + 1}" for i in range(n)])
    if len(tags) != n or len(set(tags)) != n:
        raise EmbeddingError("need one distinct tag per component")
    used = set()
    for c, phi in components:
        used |= props(phi)
        for ls in c.labels.values():
            used |= set(ls)
    clash = used & set(tags)
    if clash:
        raise EmbeddingError(f"tags {sorted(clash)} are already propositions")
    owner = {}
    for i, (c, _) in enumerate(components):
        for s in c.locations:
            if s in owner:
                raise EmbeddingError(f"location {s} belongs to components {owner[s] + 1} and {i + 1}")
            owner[s] = i
    syms = sorted({g for c, _ in components for g in c.stack_symbols})
    rules, labels = [], {}
    for i, (c, _) in enumerate(components):
        rules += list(c.rules)
        for s in c.locations:
            for g in syms:
                labels[(s, g)] = set(c.labels.get((s, g), ())) | {tags[i]}
    dpn = make_dpn(list(owner), syms, components[0][0].init, rules, labels)
    violation = [And(Atom(tags[i]), Not(phi)) for i, (_, phi) in enumerate(components)]
    spawned = None
    for v in violation:
        spawned = Next(Succ.C, v) if spawned is None else Or(spawned, Next(Succ.C, v))
    return dpn, rename_apart(Or(violation[0], reach_eventually(spawned, "__R")))
