"""The three automata of the decision procedures and tree-to-DPN synthesis."""
from __future__ import annotations

from .automata import (EPS, FALSE_F, TRUE_F, UP, Alphabet, Npta, TwoWayAta, atom, conj,
                       disj, intersect, npta_membership_regular)
from .dealternate import dealternate, execution_child_kind
from .dpn import CALL, INT, RET, SPAWN, Dpn, Rule, make_dpn
from .execution import CALLRET, END, RegularTree
from .formula import (And, Atom, DualNext, Formula, Mu, Next, Not, Nu, Or, Succ, Var,
                      assign_priorities, check_well_formed, fixpoint_map, free_variables,
                      is_pnf, props)

# ---------------------------------------------------------------- execution trees


def build_exec_tree_automaton(alphabet: Alphabet) -> Npta:
    """Accepts exactly the tree encodings of execution graphs.

    A state ``(p, c)`` expects the parent type ``p``; ``c = 1`` means the
    current thread segment is inside a call that has to return.
    """

    def delta(q, lab):
        p, c = q
        if lab.p != p:
            return []
        d = lab.d
        if d == INT:
            return [((INT, c),)]
        if d == CALL:
            return [((CALL, 0),)] if c == 0 else []
        if d == CALLRET:
            return [((CALL, 1), (RET, c))]
        if d == SPAWN:
            return [((INT, c), (SPAWN, 0))]
        if (d, c) in ((RET, 1), (END, 0)):
            return [()]
        return []

    return Npta((None, 0), delta, lambda q: q[1], alphabet, 1, trivial=False, name="A_ET")


# ---------------------------------------------------------------- formulas


class FormulaError(ValueError):
    pass


def build_formula_automaton(phi: Formula, alphabet: Alphabet) -> TwoWayAta:
    """Two-way alternating automaton accepting the trees of graphs satisfying ``phi``.

    States are subformulas plus helpers: ``<->(<a> psi)`` and ``<a> psi`` for
    the global successor of a return, ``("call", psi)`` and ``("leaf", psi)``
    for the predecessor of a node after a return.  The helpers are shared by
    the dual operators.
    """
    if free_variables(phi):
        raise FormulaError(f"formula has free variables {sorted(free_variables(phi))}")
    if not is_pnf(phi):
        raise FormulaError("formula is not in positive normal form")
    diags = check_well_formed(phi)
    if diags:
        raise FormulaError("; ".join(d.message for d in diags))
    fps = fixpoint_map(phi)
    prios = assign_priorities(phi)
    uni = set(alphabet.props)
    missing = props(phi) - uni
    if missing:
        raise FormulaError(f"propositions {sorted(missing)} are outside the alphabet")

    def delta(q, lab):
        d, p = lab.d, lab.p
        if isinstance(q, tuple):
            kind, psi = q
            if kind == "call":
                return atom(0, ("leaf", psi))
            if d in (INT, SPAWN):
                return atom(0, q)
            if d == CALLRET:
                return atom(1, q)
            return atom(EPS, psi)  # ret; call and end do not occur on execution trees
        if isinstance(q, Atom):
            return TRUE_F if q.name in lab.props else FALSE_F
        if isinstance(q, Not):
            return FALSE_F if q.sub.name in lab.props else TRUE_F
        if isinstance(q, Or):
            return disj(atom(EPS, q.left), atom(EPS, q.right))
        if isinstance(q, And):
            return conj(atom(EPS, q.left), atom(EPS, q.right))
        if isinstance(q, Var):
            return atom(EPS, fps[q.name])
        if isinstance(q, (Mu, Nu)):
            return atom(EPS, q.body)
        dual = isinstance(q, DualNext)
        missing_succ = TRUE_F if dual else FALSE_F
        f, psi = q.succ, q.sub
        if f is Succ.G:
            if d in (INT, CALL, CALLRET, SPAWN):
                return atom(0, psi)
            if d == RET:
                return atom(EPS, Next(Succ.CALLER, Next(Succ.A, psi)))
            return missing_succ
        if f is Succ.A:
            if d in (INT, SPAWN):
                return atom(0, psi)
            if d == CALLRET:
                return atom(1, psi)
            return missing_succ
        if f is Succ.CALLER:
            if p == CALL:
                return atom(UP, psi)
            if p in (INT, RET):
                return atom(UP, q)
            return missing_succ
        if f is Succ.P:
            if p == SPAWN:
                return atom(UP, psi)
            if p in (INT, CALL, RET):
                return atom(UP, q)
            return missing_succ
        if f is Succ.C:
            return atom(1, psi) if d == SPAWN else missing_succ
        if f is Succ.U:
            if p in (INT, CALL):
                return atom(UP, psi)
            if p == RET:
                return atom(UP, ("call", psi))
            return missing_succ
        raise TypeError(q)

    return TwoWayAta(phi, delta, prios.of, alphabet, prios.max_priority, name="A~phi")


def build_formula_npta(phi: Formula, alphabet: Alphabet, cap: int = 2_000_000) -> Npta:
    dealt = dealternate(build_formula_automaton(phi, alphabet), cap, execution_child_kind)
    return intersect(dealt, build_exec_tree_automaton(alphabet))


# ---------------------------------------------------------------- DPNs


def build_dpn_automaton(m: Dpn, alphabet: Alphabet) -> Npta:
    """Accepts the execution trees of ``m`` (together with A_ET).

    A state ``(s, g, c)`` is the head of the current configuration; ``c`` is
    the head that must perform the matching return, or None.
    """
    ints, calls, rets, spawns = ({}, {}, [], {})
    for r in m.rules:
        h = (r.src_loc, r.src_sym)
        if r.kind == INT:
            ints.setdefault(h, []).append((r.dst_loc, r.push[0]))
        elif r.kind == CALL:
            calls.setdefault(h, []).append((r.dst_loc, r.push[0], r.push[1]))
        elif r.kind == RET:
            rets.append((h, r.dst_loc))
        else:
            spawns.setdefault(h, []).append((r.dst_loc, r.push[0], r.spawn))
    heads = {(r.src_loc, r.src_sym) for r in m.rules}
    uni = frozenset(alphabet.props)

    def delta(q, lab):
        s, g, c = q
        h = (s, g)
        if lab.props != m.label(s, g) & uni:
            return []
        d = lab.d
        if d == INT:
            return [((s2, g2, c),) for s2, g2 in ints.get(h, ())]
        if d == CALL:
            if c is not None:
                return []
            return [((s2, g2, None),) for s2, g2, _ in calls.get(h, ())]
        if d == CALLRET:
            return [((s2, g2, rh), (s3, g3, c))
                    for s2, g2, g3 in calls.get(h, ()) for rh, s3 in rets]
        if d == SPAWN:
            return [((s2, g2, c), (sn, gn, None)) for s2, g2, (sn, gn) in spawns.get(h, ())]
        if d == RET:
            return [()] if c == h and any(rh == h for rh, _ in rets) else []
        return [()] if c is None and h not in heads else []

    return Npta((m.init_loc, m.init_sym, None), delta, lambda q: 0, alphabet, 0,
                trivial=True, name="A_M")


class SynthesisError(ValueError):
    pass


def synthesize_dpn(t: RegularTree, check: bool = True) -> Dpn:
    """A one-location DPN whose only execution graph has tree ``t``.

    Stack symbols ``x0..x{n-1}`` stand for the classes of ``t``.
    """
    if check:
        alpha = Alphabet(set().union(*(lab.props for lab in t.labels)))
        if not npta_membership_regular(build_exec_tree_automaton(alpha), t):
            raise SynthesisError("the tree is not an execution tree")
    syms = [f"x{i}" for i in range(len(t.labels))]
    rules = []
    for i, (lab, ks) in enumerate(zip(t.labels, t.kids)):
        x = syms[i]
        if lab.d == INT:
            rules.append(Rule("s", x, "s", (syms[ks[0]],)))
        elif lab.d == SPAWN:
            rules.append(Rule("s", x, "s", (syms[ks[0]],), ("s", syms[ks[1]])))
        elif lab.d == CALLRET:
            rules.append(Rule("s", x, "s", (syms[ks[0]], syms[ks[1]])))
        elif lab.d == CALL:
            rules.append(Rule("s", x, "s", (syms[ks[0]], x)))
        elif lab.d == RET:
            rules.append(Rule("s", x, "s"))
    labels = {("s", syms[i]): set(lab.props) for i, lab in enumerate(t.labels)}
    return make_dpn(["s"], syms, ("s", syms[0]), rules, labels)
