"""Parity tree automata over execution-tree labels.

Automata are lazy: transitions are callables evaluated on demand and states
are any hashable values.  ``Npta.delta(q, label)`` returns a list of child
state tuples (one state per child, the empty tuple meaning ``true`` on a
leaf label); ``TwoWayAta.delta(q, label)`` returns a positive boolean formula
built from :data:`TRUE_F`, :data:`FALSE_F`, :func:`atom`, :func:`conj` and
:func:`disj`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Optional

from .dpn import MOVES
from .execution import SHAPES, ExecutionTree, RegularTree, TreeLabel
from .formula import TRUE_PROP
from .parity import PATHFINDER, VERIFIER, ParityGame, solve_parity

EPS, UP = "e", "u"
DIRECTIONS = (0, 1, EPS, UP)

TRUE_F = ("T",)
FALSE_F = ("F",)


def atom(direction, state) -> tuple:
    return ("A", direction, state)


def conj(*parts) -> tuple:
    parts = [p for p in parts if p != TRUE_F]
    if any(p == FALSE_F for p in parts):
        return FALSE_F
    if not parts:
        return TRUE_F
    return parts[0] if len(parts) == 1 else ("&", tuple(parts))


def disj(*parts) -> tuple:
    parts = [p for p in parts if p != FALSE_F]
    if any(p == TRUE_F for p in parts):
        return TRUE_F
    if not parts:
        return FALSE_F
    return parts[0] if len(parts) == 1 else ("|", tuple(parts))


def minimal_models(f) -> list:
    """Minimal sets of atoms ``(direction, state)`` satisfying ``f``."""
    kind = f[0]
    if kind == "T":
        return [frozenset()]
    if kind == "F":
        return []
    if kind == "A":
        return [frozenset([(f[1], f[2])])]
    if kind == "|":
        out = []
        for g in f[1]:
            out.extend(minimal_models(g))
    else:
        out = [frozenset()]
        for g in f[1]:
            out = [a | b for a in out for b in minimal_models(g)]
    out = list(dict.fromkeys(out))
    return [s for s in out if not any(t < s for t in out)]


class ResourceLimit(RuntimeError):
    """A construction exceeded its state budget."""


# ---------------------------------------------------------------- alphabet


class Alphabet:
    """All execution-tree labels over a proposition universe, in canonical order.

    The reserved proposition behind ``true`` is part of the universe but
    never part of a label.
    """

    def __init__(self, props):
        self.props = tuple(sorted(set(props) | {TRUE_PROP}))
        real = [p for p in self.props if p != TRUE_PROP]
        subsets = []
        for r in range(len(real) + 1):
            subsets.extend(frozenset(c) for c in itertools.combinations(real, r))
        parents = [None] + list(MOVES)
        self.labels = [TreeLabel(s, d, p) for s in subsets for d in SHAPES for p in parents]
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, lab) -> bool:
        return lab in self.index

    def check_tree(self, t) -> None:
        labs = t.labels.values() if isinstance(t, ExecutionTree) else t.labels
        for lab in labs:
            if lab not in self.index:
                raise AlphabetMismatch(f"label {lab.to_text()} is outside the alphabet {self.props}")


class AlphabetMismatch(ValueError):
    pass


def restrict_label(lab: TreeLabel, props) -> TreeLabel:
    return TreeLabel(frozenset(lab.props) & frozenset(props), lab.d, lab.p)


# ---------------------------------------------------------------- automata


@dataclass
class Npta:
    initial: Hashable
    delta_fn: Callable
    priority_fn: Callable
    alphabet: Alphabet
    max_priority: int
    trivial: Optional[bool] = None  # all priorities equal and even, when known
    name: str = "npta"
    _cache: dict = field(default_factory=dict, repr=False)

    def delta(self, q, lab: TreeLabel) -> list:
        key = (q, lab)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.delta_fn(q, lab)
            self._cache[key] = hit
        return hit

    def priority(self, q) -> int:
        return self.priority_fn(q)

    def reachable_states(self, cap: int = 2_000_000) -> list:
        seen, order = {self.initial}, [self.initial]
        i = 0
        while i < len(order):
            q = order[i]
            i += 1
            for lab in self.alphabet:
                for tup in self.delta(q, lab):
                    for r in tup:
                        if r not in seen:
                            seen.add(r)
                            order.append(r)
                            if len(order) > cap:
                                raise ResourceLimit(f"{self.name}: more than {cap} states")
        return order

    def is_trivial(self) -> bool:
        if self.trivial is None:
            prios = {self.priority(q) for q in self.reachable_states()}
            self.trivial = len(prios) <= 1 and all(p % 2 == 0 for p in prios)
        return self.trivial

    def dump(self, cap: int = 100_000) -> str:
        states = self.reachable_states(cap)
        num = {q: i for i, q in enumerate(states)}
        lines = [f"npta {self.name}: {len(states)} states, initial 0, max priority {self.max_priority}"]
        for q in states:
            lines.append(f"state {num[q]} priority {self.priority(q)} # {q!r}")
            for lab in self.alphabet:
                ds = self.delta(q, lab)
                if ds:
                    alts = " | ".join("(" + " ".join(str(num[r]) for r in t) + ")" for t in ds)
                    lines.append(f"  {lab.to_text()} -> {alts}")
        return "\n".join(lines) + "\n"


@dataclass
class TwoWayAta:
    initial: Hashable
    delta_fn: Callable
    priority_fn: Callable
    alphabet: Alphabet
    max_priority: int
    name: str = "2ata"
    _cache: dict = field(default_factory=dict, repr=False)
    _models: dict = field(default_factory=dict, repr=False)

    def delta(self, q, lab: TreeLabel):
        key = (q, lab)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.delta_fn(q, lab)
            self._cache[key] = hit
        return hit

    def models(self, q, lab: TreeLabel) -> list:
        key = (q, lab)
        hit = self._models.get(key)
        if hit is None:
            hit = minimal_models(self.delta(q, lab))
            self._models[key] = hit
        return hit

    def priority(self, q) -> int:
        return self.priority_fn(q)

    def reachable_states(self) -> list:
        seen, order = {self.initial}, [self.initial]
        i = 0
        while i < len(order):
            q = order[i]
            i += 1
            for lab in self.alphabet:
                for _, r in _atoms(self.delta(q, lab)):
                    if r not in seen:
                        seen.add(r)
                        order.append(r)
        return order

    def dump(self) -> str:
        states = self.reachable_states()
        num = {q: i for i, q in enumerate(states)}
        lines = [f"2ata {self.name}: {len(states)} states, initial 0, max priority {self.max_priority}"]
        for q in states:
            lines.append(f"state {num[q]} priority {self.priority(q)} # {q!r}")
            for lab in self.alphabet:
                f = self.delta(q, lab)
                if f != FALSE_F:
                    lines.append(f"  {lab.to_text()} -> {_show_formula(f, num)}")
        return "\n".join(lines) + "\n"


def _atoms(f):
    if f[0] == "A":
        yield f[1], f[2]
    elif f[0] in "&|":
        for g in f[1]:
            yield from _atoms(g)


def _show_formula(f, num) -> str:
    if f == TRUE_F:
        return "true"
    if f == FALSE_F:
        return "false"
    if f[0] == "A":
        return f"({f[1]},{num[f[2]]})"
    sep = " & " if f[0] == "&" else " | "
    return "(" + sep.join(_show_formula(g, num) for g in f[1]) + ")"


# ---------------------------------------------------------------- membership


def npta_membership_finite(a: Npta, t: ExecutionTree) -> bool:
    """Bottom-up acceptance on a finite tree; priorities play no role."""
    a.alphabet.check_tree(t)
    order = sorted(t.labels, key=len, reverse=True)
    accepted = {}
    needed = {"": {a.initial}}
    # top-down pass collects the states that can possibly be asked for
    for node in sorted(t.labels, key=len):
        lab = t.labels[node]
        for q in needed.get(node, ()):
            for tup in a.delta(q, lab):
                for i, r in enumerate(tup):
                    needed.setdefault(node + str(i), set()).add(r)
    for node in order:
        lab = t.labels[node]
        ok = set()
        for q in needed.get(node, ()):
            for tup in a.delta(q, lab):
                if all(r in accepted[node + str(i)] for i, r in enumerate(tup)):
                    ok.add(q)
                    break
        accepted[node] = ok
    return a.initial in accepted[""]


class _GameBuilder:
    """Incrementally numbered parity game."""

    def __init__(self):
        self.index = {}
        self.owner, self.priority, self.moves, self.keys = [], [], [], []

    def pos(self, key, owner, priority):
        i = self.index.get(key)
        if i is None:
            i = len(self.owner)
            self.index[key] = i
            self.owner.append(owner)
            self.priority.append(priority)
            self.moves.append([])
            self.keys.append(key)
            return i, True
        return i, False

    def game(self) -> ParityGame:
        return ParityGame(self.owner, self.priority, self.moves)


def npta_membership_regular(a: Npta, t: RegularTree) -> bool:
    a.alphabet.check_tree(t)
    top = a.max_priority
    b = _GameBuilder()
    root, _ = b.pos(("S", 0, a.initial), VERIFIER, a.priority(a.initial))
    todo = [root]
    while todo:
        v = todo.pop()
        _, c, q = b.keys[v]
        lab = t.labels[c]
        for tup in a.delta(q, lab):
            w, new = b.pos(("D", c, tup), PATHFINDER, top)
            b.moves[v].append(w)
            if new:
                for i, r in enumerate(tup):
                    u, fresh = b.pos(("S", t.kids[c][i], r), VERIFIER, a.priority(r))
                    b.moves[w].append(u)
                    if fresh:
                        todo.append(u)
    return solve_parity(b.game()).winner[root] == VERIFIER


def ata2_membership_finite(a: TwoWayAta, t: ExecutionTree) -> bool:
    """Acceptance game over (node, state) with boolean-formula subpositions."""
    a.alphabet.check_tree(t)
    top = a.max_priority
    b = _GameBuilder()
    root, _ = b.pos(("S", "", a.initial), VERIFIER, a.priority(a.initial))
    todo = [root]
    while todo:
        v = todo.pop()
        key = b.keys[v]
        if key[0] == "S":
            _, node, q = key
            targets = [("F", node, a.delta(q, t.labels[node]))]
        else:
            _, node, f = key
            kind = f[0]
            if kind == "A":
                d, r = f[1], f[2]
                nxt = _move(t, node, d)
                targets = [] if nxt is None else [("S", nxt, r)]
            elif kind in "&|":
                targets = [("F", node, g) for g in f[1]]
            else:
                targets = []
        for k in targets:
            if k[0] == "S":
                owner, prio = VERIFIER, a.priority(k[2])
            else:
                kind = k[2][0]
                owner = PATHFINDER if kind in ("&", "T") else VERIFIER
                prio = top
            w, new = b.pos(k, owner, prio)
            b.moves[v].append(w)
            if new:
                todo.append(w)
    return solve_parity(b.game()).winner[root] == VERIFIER


def _move(t: ExecutionTree, node: str, d):
    if d == EPS:
        return node
    if d == UP:
        return node[:-1] if node else None
    child = node + str(d)
    return child if child in t.labels else None


# ---------------------------------------------------------------- intersection


TOP = None  # memory entry meaning "no step seen yet"


def intersect(a1: Npta, a2: Npta) -> Npta:
    """Product automaton accepting the intersection of the two languages.

    If either side has a trivial condition the plain product is used, with
    the other side's priorities.  Otherwise a small memory turns the pair of
    parity conditions into one: the product tracks, for each priority level
    of the second automaton, the least first-automaton priority seen since
    that level was last reached.
    """
    if a1.alphabet.props != a2.alphabet.props:
        raise AlphabetMismatch("automata over different proposition universes")
    if a2.is_trivial() or a1.is_trivial():
        keep = a1 if a2.is_trivial() else a2

        def delta(q, lab):
            d1 = a1.delta(q[0], lab)
            if not d1:
                return []
            d2 = a2.delta(q[1], lab)
            return list(dict.fromkeys(tuple(zip(t1, t2)) for t1 in d1 for t2 in d2))

        idx = 0 if keep is a1 else 1
        return Npta((a1.initial, a2.initial), delta, lambda q: keep.priority(q[idx]),
                    a1.alphabet, keep.max_priority,
                    trivial=a1.is_trivial() and a2.is_trivial(),
                    name=f"({a1.name} x {a2.name})")
    k1, k2 = a1.max_priority, a2.max_priority
    width = k1 + 1 if (k1 + 1) % 2 == 0 else k1 + 2

    def emit(w, s):
        return w * width + (1 if w % 2 else s)

    def enter(q1, q2, mem):
        w, a = a2.priority(q2), a1.priority(q1)
        s = a if mem[w] is TOP else min(mem[w], a)
        return (q1, q2, mem, emit(w, s))

    def update(mem, w, a):
        return tuple(TOP if v >= w else (a if m is TOP else min(m, a)) for v, m in enumerate(mem))

    def delta(q, lab):
        q1, q2, mem, _ = q
        d1 = a1.delta(q1, lab)
        if not d1:
            return []
        d2 = a2.delta(q2, lab)
        mem2 = update(mem, a2.priority(q2), a1.priority(q1))
        out = []
        for t1 in d1:
            for t2 in d2:
                out.append(tuple(enter(r1, r2, mem2) for r1, r2 in zip(t1, t2)))
        return list(dict.fromkeys(out))

    init = enter(a1.initial, a2.initial, (TOP,) * (k2 + 1))
    return Npta(init, delta, lambda q: q[3], a1.alphabet, (k2 + 1) * width,
                trivial=False, name=f"({a1.name} x {a2.name})")


# ---------------------------------------------------------------- emptiness


@dataclass
class EmptinessResult:
    empty: bool
    witness: Optional[RegularTree] = None
    states: int = 0
    positions: int = 0


def emptiness_game(a: Npta, cap: int = 2_000_000):
    """Verifier picks a label and a transition, Pathfinder picks a child."""
    b = _GameBuilder()
    choice = {}
    root, _ = b.pos(("Q", a.initial), VERIFIER, a.priority(a.initial))
    todo = [root]
    top = a.max_priority
    while todo:
        v = todo.pop()
        q = b.keys[v][1]
        for lab in a.alphabet:
            for tup in a.delta(q, lab):
                w, new = b.pos(("T", tup), PATHFINDER, top)
                if (v, w) not in choice:
                    choice[(v, w)] = lab
                    b.moves[v].append(w)
                if new:
                    for r in tup:
                        u, fresh = b.pos(("Q", r), VERIFIER, a.priority(r))
                        b.moves[w].append(u)
                        if fresh:
                            todo.append(u)
                            if len(b.owner) > cap:
                                raise ResourceLimit(f"emptiness game for {a.name} exceeds {cap} positions")
    return b, root, choice


def check_emptiness(a: Npta, cap: int = 2_000_000) -> EmptinessResult:
    b, root, choice = emptiness_game(a, cap)
    sol = solve_parity(b.game())
    nstates = sum(1 for k in b.keys if k[0] == "Q")
    if sol.winner[root] != VERIFIER:
        return EmptinessResult(True, None, nstates, len(b.owner))
    # classes are the Verifier positions reached under the winning strategy
    cls, labels, kids = {}, [], []
    order = [root]
    cls[root] = 0
    labels.append(None)
    kids.append(None)
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        w = sol.strategy[v]
        lab = choice[(v, w)]
        ks = []
        for u in b.moves[w]:
            if u not in cls:
                cls[u] = len(order)
                order.append(u)
                labels.append(None)
                kids.append(None)
            ks.append(cls[u])
        labels[cls[v]] = lab
        kids[cls[v]] = tuple(ks)
    return EmptinessResult(False, RegularTree(labels, kids), nstates, len(b.owner))


def is_empty(a: Npta, cap: int = 2_000_000) -> bool:
    return check_emptiness(a, cap).empty


def extract_witness(a: Npta, cap: int = 2_000_000) -> RegularTree:
    res = check_emptiness(a, cap)
    if res.empty:
        raise ValueError("the automaton accepts no tree")
    return res.witness
