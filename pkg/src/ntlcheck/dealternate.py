"""Two-way alternating to one-way nondeterministic parity tree automata.

The nondeterministic automaton guesses, at every node, a positional strategy
slice for the acceptance game of the two-way automaton together with a
summary of how each state sent into a child can come back up.  States are

    (is_root, promise, safra, priority)

where ``promise`` maps every state entering the node from its parent to the
returns the parent was told to expect: pairs ``(state, p)`` with ``p`` the
priority of the excursion below, in the order best for Pathfinder.  The node
checks that its actual returns are covered by the promise, that no play can
loop at the node with an odd minimal priority, and feeds a Safra tree that
looks for a play escaping down the branch with an odd minimum.
"""
from __future__ import annotations

import itertools

from .automata import EPS, UP, Npta, ResourceLimit, TwoWayAta
from .dpn import CALL, INT, RET, SPAWN
from .execution import CALLRET

WAIT = 0


def pf_key(p):
    """Orders priorities by how much Pathfinder likes them; ``None`` is worst."""
    if p is None:
        return (-1, 0)
    return (1, -p) if p % 2 else (0, p)


def pf_better(a, b) -> bool:
    return pf_key(a) > pf_key(b)


# ---------------------------------------------------------------- Safra trees
#
# A tree is None (no states) or a node (name, label, children) with
# ``label`` a frozenset of automaton states and ``children`` a tuple of
# nodes ordered from oldest to youngest.  Names are compacted to 1..k after
# every step so equal trees hash equally.


def safra_step(tree, succ, accepting, n_states: int):
    """One step of Safra's construction with Piterman's compact naming.

    Returns ``(tree, priority)``; the priority is even when the step shows
    progress of some accepting run (min-parity), ``2 * n_states + 1`` when
    nothing happened.
    """
    if tree is None:
        return None, 2 * n_states + 1
    counter = [0]
    new_names = []

    def advance(node):
        name, label, kids = node
        nxt = frozenset(s for q in label for s in succ(q))
        kids = [advance(k) for k in kids]
        acc = frozenset(q for q in nxt if accepting(q))
        if acc:
            counter[0] += 1
            fresh = ("new", counter[0])
            new_names.append(fresh)
            kids.append([fresh, acc, []])
        return [name, nxt, kids]

    root = advance(tree)

    def hmerge(node, blocked):
        node[1] = node[1] - blocked
        seen = set(blocked)
        for k in node[2]:
            hmerge(k, frozenset(seen))
            seen |= k[1]

    hmerge(root, frozenset())

    removed, marked = [], []

    def names(node):
        yield node[0]
        for k in node[2]:
            yield from names(k)

    def prune(node):
        keep = []
        for k in node[2]:
            if k[1]:
                prune(k)
                keep.append(k)
            else:
                removed.extend(names(k))
        node[2] = keep
        if keep and frozenset().union(*(k[1] for k in keep)) == node[1]:
            for k in keep:
                removed.extend(names(k))
            node[2] = []
            marked.append(node[0])

    if not root[1]:
        removed.extend(names(root))
        r = min((x for x in removed if isinstance(x, int)), default=None)
        return None, (2 * r - 1) if r is not None else 2 * n_states + 1
    prune(root)

    survivors = sorted((x for x in names(root) if isinstance(x, int)))
    alive = set(survivors)
    r = min((x for x in removed if isinstance(x, int)), default=None)
    g = min((x for x in marked if x in alive), default=None)
    if g is not None and (r is None or g < r):
        prio = 2 * g
    elif r is not None:
        prio = 2 * r - 1
    else:
        prio = 2 * n_states + 1

    order = {x: i + 1 for i, x in enumerate(survivors)}
    k = len(survivors)
    for x in new_names:
        k += 1
        order[x] = k

    def freeze(node):
        return (order[node[0]], node[1], tuple(freeze(c) for c in node[2]))

    return freeze(root), prio


# ---------------------------------------------------------------- static analysis

ANY = "any"


class _Tables:
    """Integer-indexed view of a two-way automaton."""

    def __init__(self, a: TwoWayAta):
        self.a = a
        self.states = a.reachable_states()
        self.index = {q: i for i, q in enumerate(self.states)}
        self.prio = [a.priority(q) for q in self.states]
        self.odds = sorted({p for p in self.prio if p % 2})
        n = len(self.states)
        self._models = {}
        kinds = sorted({lab.p or "" for lab in a.alphabet})
        self.kinds = kinds
        eps = {k: [set() for _ in range(n)] for k in kinds + [ANY]}
        down = {k: [set() for _ in range(n)] for k in kinds + [ANY]}
        up = {k: [set() for _ in range(n)] for k in kinds + [ANY]}
        for i, q in enumerate(self.states):
            for lab in a.alphabet:
                for m in a.models(q, lab):
                    for d, r in m:
                        j = self.index[r]
                        tab = eps if d == EPS else up if d == UP else down
                        tab[lab.p or ""][i].add(j)
                        tab[ANY][i].add(j)

        # excursions: for each entry state, the (return state, path minimum)
        # pairs a visit below the node can produce, first over all labels of
        # the entered node and then for each parent type separately
        exc = [set() for _ in range(n)]

        def explore(k, i):
            out = set()
            start = (i, self.prio[i])
            seen, todo = {start}, [start]
            while todo:
                j, m = todo.pop()
                for r in up[k][j]:
                    out.add((r, m))
                nxt = [(r, min(m, self.prio[r])) for r in eps[k][j]]
                for c in down[k][j]:
                    nxt += [(r, min(m, pr, self.prio[r])) for r, pr in exc[c]]
                for x in nxt:
                    if x not in seen:
                        seen.add(x)
                        todo.append(x)
            return out

        while True:
            new = [explore(ANY, i) for i in range(n)]
            if new == exc:
                break
            exc = new
        self.excursions = {ANY: exc}
        for k in kinds:
            self.excursions[k] = [explore(k, i) for i in range(n)]
        self._options = {}

    def models(self, i: int, lab, arity: int, root: bool) -> list:
        key = (i, lab, root)
        hit = self._models.get(key)
        if hit is None:
            hit = []
            for m in self.a.models(self.states[i], lab):
                atoms = []
                ok = True
                for d, r in m:
                    if d == UP and root or d not in (EPS, UP) and d >= arity:
                        ok = False
                        break
                    atoms.append((d, self.index[r]))
                if ok:
                    hit.append(tuple(sorted(atoms, key=repr)))
            self._models[key] = hit
        return hit

    def options(self, i: int, kind) -> list:
        """Every promise for entry ``i`` into a node of parent type ``kind``."""
        key = (i, kind)
        hit = self._options.get(key)
        if hit is None:
            by_ret = {}
            for r, pr in self.excursions[kind][i]:
                by_ret.setdefault(r, set()).add(pr)
            rets = sorted(by_ret)
            choices = [[None] + sorted(by_ret[r]) for r in rets]
            hit = []
            for combo in itertools.product(*choices):
                hit.append(tuple((r, p) for r, p in zip(rets, combo) if p is not None))
            self._options[key] = hit
        return hit


# ---------------------------------------------------------------- local checks


def _odd_cycle(edges) -> bool:
    weights = sorted({w for _, _, w in edges if w % 2})
    for j in weights:
        adj = {}
        for u, v, w in edges:
            if w >= j:
                adj.setdefault(u, []).append(v)
        for u, v, w in edges:
            if w != j:
                continue
            # is u reachable from v using edges of weight >= j?
            seen, todo = {v}, [v]
            while todo:
                x = todo.pop()
                if x == u:
                    return True
                for y in adj.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
    return False


def _best_paths(src: int, prio, adj) -> dict:
    """Pathfinder-best minimal priority of paths from ``src`` to each node."""
    best = {src: prio[src]}
    todo = [src]
    while todo:
        u = todo.pop()
        bu = best[u]
        for v, w in adj.get(u, ()):
            cand = min(bu, w)
            if pf_better(cand, best.get(v)):
                best[v] = cand
                todo.append(v)
    return best


def execution_child_kind(lab, d):
    """Parent type of child ``d`` of a node labelled ``lab`` in an execution tree."""
    if d == 0:
        return CALL if lab.d in (CALL, CALLRET) else INT
    return SPAWN if lab.d == SPAWN else RET


class _Dealternator:
    def __init__(self, a: TwoWayAta, cap: int, child_kind):
        self.t = _Tables(a)
        self.cap = cap
        self.child_kind = child_kind
        self.seen = set()
        t = self.t
        self.n_modes = 1 + len(t.odds)
        self.n_nba = len(t.states) * self.n_modes * 2
        self.top = 2 * self.n_nba + 2
        q0 = t.index[a.initial]
        root_kind = ANY if child_kind is None else ""
        self.initial = (True, root_kind, ((q0, ()),),
                        (1, frozenset([self._nba(q0, WAIT, 0)]), ()), self.top)

    def _nba(self, q, mode, flag) -> int:
        return (q * self.n_modes + mode) * 2 + flag

    def _unnba(self, s):
        flag = s % 2
        s //= 2
        return s // self.n_modes, s % self.n_modes, flag

    def priority(self, state) -> int:
        return state[4]

    # -- guesses

    def _guesses(self, lab, entries, root):
        t = self.t
        arity = lab.arity
        # generic mode guesses each child's parent type when the first entry goes down
        kinds = [None if self.child_kind is None else self.child_kind(lab, d) for d in range(arity)]
        model = {}
        reached = set(entries)
        sent = [dict() for _ in range(arity)]

        def pending():
            for q in sorted(reached):
                if q not in model:
                    return ("s", q)
            for d in range(arity):
                for q1 in sorted(sent[d]):
                    if sent[d][q1] is None:
                        return ("e", d, q1)
            return None

        def rec():
            nxt = pending()
            if nxt is None:
                yield model, sent, [ANY if k is None else k for k in kinds]
                return
            if nxt[0] == "s":
                q = nxt[1]
                for m in t.models(q, lab, arity, root):
                    added_r, added_s = [], []
                    for d, r in m:
                        if d == EPS:
                            if r not in reached:
                                reached.add(r)
                                added_r.append(r)
                        elif d != UP and r not in sent[d]:
                            sent[d][r] = None
                            added_s.append((d, r))
                    model[q] = m
                    yield from rec()
                    del model[q]
                    for r in added_r:
                        reached.discard(r)
                    for d, r in added_s:
                        del sent[d][r]
            else:
                _, d, q1 = nxt
                if kinds[d] is None:
                    for k in t.kinds:
                        kinds[d] = k
                        yield from rec()
                    kinds[d] = None
                    return
                for opt in t.options(q1, kinds[d]):
                    added = [r for r, _ in opt if r not in reached]
                    reached.update(added)
                    sent[d][q1] = opt
                    yield from rec()
                    sent[d][q1] = None
                    for r in added:
                        reached.discard(r)

        yield from rec()

    def delta(self, state, lab) -> list:
        root, kind, promise, safra, _ = state
        if kind != ANY and (lab.p or "") != kind:
            return []
        entries = [q for q, _ in promise]
        allowed = {q: dict(opt) for q, opt in promise}
        out = {}
        for model, sent, kinds in self._guesses(lab, entries, root):
            res = self._check(model, sent, entries, allowed, root, safra, kinds)
            if res is not None:
                out.setdefault(res, None)
        for tup in out:
            for s in tup:
                if s not in self.seen:
                    self.seen.add(s)
                    if len(self.seen) > self.cap:
                        raise ResourceLimit(f"dealternation exceeds {self.cap} states")
        return list(out)

    def _check(self, model, sent, entries, allowed, root, safra, kinds):
        prio = self.t.prio
        edges = []
        adj = {}
        for q, m in model.items():
            for d, r in m:
                if d == EPS:
                    edges.append((q, r, prio[r]))
                elif d != UP:
                    for r2, u in sent[d][r]:
                        edges.append((q, r2, min(u, prio[r2])))
        for u, v, w in edges:
            adj.setdefault(u, []).append((v, w))
        if _odd_cycle(edges):
            return None
        best = {s: _best_paths(s, prio, adj) for s in entries}
        if not root:
            for s in entries:
                ok = allowed[s]
                for q, b in best[s].items():
                    for d, r in model[q]:
                        if d == UP:
                            if r not in ok or pf_better(b, ok[r]):
                                return None
        children = []
        for d, snt in enumerate(sent):
            letter = {}
            for s in entries:
                for q, b in best[s].items():
                    for dd, r in model[q]:
                        if dd == d:
                            key = (s, r)
                            if pf_better(b, letter.get(key)):
                                letter[key] = b
            succ = self._nba_succ(letter)
            tree, p = safra_step(safra, succ, _odd_flag, self.n_nba)
            prom = tuple(sorted(snt.items()))
            children.append((False, kinds[d], prom, tree, p + 1))
        return tuple(children)

    def _nba_succ(self, letter):
        by_src = {}
        for (s, r), w in letter.items():
            by_src.setdefault(s, []).append((r, w))
        odds = self.t.odds
        cache = {}

        def succ(x):
            hit = cache.get(x)
            if hit is None:
                q, mode, _ = self._unnba(x)
                hit = []
                for r, w in by_src.get(q, ()):
                    if mode == WAIT:
                        hit.append(self._nba(r, WAIT, 0))
                        for i in range(len(odds)):
                            hit.append(self._nba(r, i + 1, 0))
                    else:
                        j = odds[mode - 1]
                        if w >= j:
                            hit.append(self._nba(r, mode, 1 if w == j else 0))
                cache[x] = hit
            return hit

        return succ


def _odd_flag(s: int) -> bool:
    return s % 2 == 1


def dealternate(a: TwoWayAta, cap: int = 2_000_000, child_kind=None) -> Npta:
    """An NPTA built lazily from ``a``.

    Without ``child_kind`` the result has exactly the language of ``a``;
    the parent type of each child that receives obligations is guessed and
    checked one level down.  With ``child_kind(label, d)`` giving the parent type every child ``d``
    must have, the automaton also rejects trees that break that discipline
    and agrees with ``a`` on the rest; this shrinks the guessed return
    summaries.  :func:`execution_child_kind` is the discipline of execution
    trees.
    """
    d = _Dealternator(a, cap, child_kind)
    return Npta(d.initial, d.delta, d.priority, a.alphabet, d.top,
                trivial=False, name=f"dealt({a.name})")
