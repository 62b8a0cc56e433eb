"""Hypothesis strategies for formulas and parity games."""
import itertools

from hypothesis import strategies as st

from ntlcheck.formula import (FIXPOINTS, And, Atom, DualNext, Mu, Next, Not, Nu, Or, Succ,
                              Var)
from ntlcheck.parity import ParityGame

PROPS = ("p", "q")


def _uniquify(f, env=None, counter=None):
    """Rename every binder to a distinct ``X<i>``."""
    env = env or {}
    counter = counter if counter is not None else itertools.count()
    if isinstance(f, Var):
        return Var(env[f.name])
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(_uniquify(f.sub, env, counter))
    if isinstance(f, (Or, And)):
        return type(f)(_uniquify(f.left, env, counter), _uniquify(f.right, env, counter))
    if isinstance(f, (Next, DualNext)):
        return type(f)(f.succ, _uniquify(f.sub, env, counter))
    name = f"X{next(counter)}"
    return type(f)(name, _uniquify(f.body, {**env, f.var: name}, counter))


def formulas(max_depth: int = 4, pnf: bool = False):
    """Closed well-formed formulas over ``p`` and ``q``.

    A variable only occurs below a next operator inside its binder, and
    never below a negation (negation is applied to closed subformulas only).
    """

    def build(depth, usable, level):
        leaves = [st.sampled_from(PROPS).map(Atom),
                  st.sampled_from(PROPS).map(lambda p: Not(Atom(p)))]
        if usable:
            leaves.append(st.sampled_from(sorted(usable)).map(Var))
        leaf = st.one_of(leaves)
        if depth == 0:
            return leaf
        sub = st.deferred(lambda: build(depth - 1, usable, level))
        succ = st.sampled_from(list(Succ))
        options = [
            leaf,
            st.tuples(sub, sub).map(lambda t: Or(*t)),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(succ, sub).map(lambda t: Next(*t)),
            st.tuples(succ, sub).map(lambda t: DualNext(*t)),
            st.tuples(st.booleans(), st.deferred(lambda: fixpoint(depth - 1, usable, level))).map(
                lambda t: (Mu if t[0] else Nu)(f"V{level}", t[1])),
        ]
        if not pnf:
            options.append(st.deferred(lambda: build(depth - 1, set(), level + 1)).map(Not))
        return st.one_of(options)

    def fixpoint(depth, usable, level):
        name = f"V{level}"
        step = st.tuples(st.booleans(), st.sampled_from(list(Succ)),
                         st.deferred(lambda: build(max(depth - 1, 0), usable | {name}, level + 1)))
        step = step.map(lambda t: (Next if t[0] else DualNext)(t[1], t[2]))
        other = st.deferred(lambda: build(max(depth - 1, 0), usable, level + 1))
        return st.tuples(st.booleans(), other, step).map(lambda t: (Or if t[0] else And)(t[1], t[2]))

    return build(max_depth, set(), 0).map(_uniquify)


def parity_games(max_n: int = 6, max_prio: int = 3):
    @st.composite
    def game(draw):
        n = draw(st.integers(1, max_n))
        owner = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
        prio = draw(st.lists(st.integers(0, max_prio), min_size=n, max_size=n))
        moves = [draw(st.lists(st.integers(0, n - 1), max_size=3, unique=True)) for _ in range(n)]
        return ParityGame(owner, prio, moves)

    return game()


__all__ = ["formulas", "parity_games", "PROPS", "FIXPOINTS"]
