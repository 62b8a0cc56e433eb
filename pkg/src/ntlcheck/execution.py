"""Execution graphs, their binary tree encoding and the six successor functions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .dpn import BOTTOM, CALL, INT, MOVES, RET, SPAWN, Configuration, Dpn, config_steps, label_of
from .formula import Succ

CALLRET, END = "callRet", "end"
SHAPES = (INT, CALL, CALLRET, SPAWN, RET, END)
ARITY = {INT: 1, CALL: 1, CALLRET: 2, SPAWN: 2, RET: 0, END: 0}
PARENT_TYPES = (INT, CALL, RET, SPAWN, None)


class TreeLabel(NamedTuple):
    props: frozenset
    d: str
    p: Optional[str]  # None stands for the root marker

    @property
    def arity(self) -> int:
        return ARITY[self.d]

    def to_text(self) -> str:
        return f"({' '.join(sorted(self.props))} | {self.d} | {self.p or BOTTOM})"


# ---------------------------------------------------------------- graphs


@dataclass
class ExecutionGraph:
    """Nodes are ``0..n-1`` with ``root`` the initial node.

    ``edges`` holds ``(source, move, target)`` triples; ``nesting`` the
    call-to-return-continuation pairs.  ``frontier`` lists nodes of a
    truncated graph that were never expanded.
    """

    labels: list
    edges: list
    nesting: set
    root: int = 0
    configs: Optional[list] = None
    complete: bool = True
    frontier: frozenset = frozenset()
    names: Optional[list] = None

    def __post_init__(self):
        n = len(self.labels)
        self.out = [[] for _ in range(n)]
        self.inc = [[] for _ in range(n)]
        for x, mv, y in self.edges:
            self.out[x].append((mv, y))
            self.inc[y].append((mv, x))
        self.nest_out = {}
        self.nest_in = {}
        for x, y in self.nesting:
            self.nest_out[x] = y
            self.nest_in[y] = x
        self._succ_cache = None

    @property
    def n(self) -> int:
        return len(self.labels)

    def node_name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def successor(self, x: int, move: str) -> Optional[int]:
        for mv, y in self.out[x]:
            if mv == move:
                return y
        return None

    def moves_from(self, x: int) -> set:
        return {mv for mv, _ in self.out[x]}

    # successor functions -------------------------------------------------

    def _tables(self):
        if self._succ_cache is None:
            n = self.n
            g = [None] * n
            up = [None] * n
            a = [None] * n
            c = [None] * n
            for x, mv, y in self.edges:
                if mv == SPAWN:
                    c[x] = y
                else:
                    g[x] = y
                    up[y] = x
                    if mv == INT:
                        a[x] = y
            for x, y in self.nesting:
                a[x] = y
            caller = [None] * n
            for x, mv, y in self.edges:
                if mv == CALL:
                    z, seen = y, set()
                    while z is not None and z not in seen:
                        seen.add(z)
                        caller[z] = x
                        z = a[z]
            parent = [None] * n
            for x, mv, y in self.edges:
                if mv == SPAWN:
                    z, seen = y, set()
                    while z is not None and z not in seen:
                        seen.add(z)
                        parent[z] = x
                        z = g[z]
            self._succ_cache = {Succ.G: g, Succ.U: up, Succ.A: a,
                                Succ.CALLER: caller, Succ.P: parent, Succ.C: c}
        return self._succ_cache

    def succ(self, x: int, f: Succ) -> Optional[int]:
        return self._tables()[f][x]

    def successor_table(self, f: Succ) -> list:
        return self._tables()[f]

    # export --------------------------------------------------------------

    def to_text(self) -> str:
        lines = ["graph"]
        for x in range(self.n):
            outs = " ".join(f"{mv}:{y}" for mv, y in sorted(self.out[x], key=lambda e: MOVES.index(e[0])))
            lines.append(f"{x} {{{' '.join(sorted(self.labels[x]))}}} {outs}".rstrip())
        for x, y in sorted(self.nesting):
            lines.append(f"nest {x} {y}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        style = {INT: "solid", CALL: "bold", RET: "dotted", SPAWN: "solid"}
        lines = ["digraph G {", "  rankdir=LR;"]
        for x in range(self.n):
            lab = ",".join(sorted(self.labels[x]))
            extra = ""
            if self.configs is not None and self.configs[x] is not None:
                extra = "\\n" + str(self.configs[x])
            shape = "doublecircle" if x == self.root else "circle"
            lines.append(f'  n{x} [shape={shape}, label="{self.node_name(x)}\\n{{{lab}}}{extra}"];')
        for x, mv, y in self.edges:
            color = ', color="gray40"' if mv == SPAWN else ""
            lines.append(f'  n{x} -> n{y} [label="{mv}", style={style[mv]}{color}];')
        for x, y in sorted(self.nesting):
            lines.append(f'  n{x} -> n{y} [style=dashed, constraint=false];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ExecutionGraph:
    labels, edges, nesting = {}, [], set()
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "graph":
        raise ValueError("graph files start with 'graph'")
    for ln in lines[1:]:
        if ln.startswith("nest"):
            _, x, y = ln.split()
            nesting.add((int(x), int(y)))
            continue
        head, rest = ln.split("{", 1)
        props, outs = rest.split("}", 1)
        x = int(head)
        labels[x] = frozenset(props.split())
        for item in outs.split():
            mv, y = item.split(":")
            if mv not in MOVES:
                raise ValueError(f"unknown move {mv!r}")
            edges.append((x, mv, int(y)))
    n = len(labels)
    if sorted(labels) != list(range(n)):
        raise ValueError("nodes must be numbered 0..n-1")
    for x, _, y in edges:
        if not 0 <= y < n:
            raise ValueError(f"edge to unknown node {y}")
    return ExecutionGraph([labels[i] for i in range(n)], edges, nesting)


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    condition: int
    witness: tuple
    message: str


def derive_nesting(g: ExecutionGraph) -> set:
    """Match each call with the end of its shortest balanced spawn-free path."""
    out = set()
    for x in range(g.n):
        if CALL not in g.moves_from(x):
            continue
        # breadth-first over (node, balance); the first layer with a hit wins
        layer, seen = {(x, 0)}, {(x, 0)}
        while layer:
            nxt = set()
            for z, bal in layer:
                for mv, y in g.out[z]:
                    if mv == SPAWN:
                        continue
                    b = bal + (1 if mv == CALL else -1 if mv == RET else 0)
                    if (y, b) not in seen and abs(b) <= g.n:
                        seen.add((y, b))
                        nxt.add((y, b))
            hits = {y for y, b in nxt if b == 0 and y != x}
            if hits:
                out |= {(x, y) for y in hits}
                break
            layer = nxt
    return out


def validate_execution_graph(g: ExecutionGraph, check_nesting: bool = True) -> list:
    """Violations of the five structural conditions; empty means valid.

    On truncated graphs, frontier nodes are exempt from the successor-shape
    check and nesting is compared only for calls whose match was explored.
    """
    bad = []
    for y in range(g.n):
        npred = len(g.inc[y])
        if y == g.root and npred:
            bad.append(Violation(1, (y,), f"root {g.node_name(y)} has a predecessor"))
        elif y != g.root and npred != 1:
            bad.append(Violation(1, (y,), f"node {g.node_name(y)} has {npred} predecessors"))
    seen, todo = {g.root}, [g.root]
    while todo:
        x = todo.pop()
        for _, y in g.out[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    for y in range(g.n):
        if y not in seen:
            bad.append(Violation(2, (y,), f"node {g.node_name(y)} is unreachable"))
    shape_ok = True
    for x in range(g.n):
        if x in g.frontier:
            continue
        mv = sorted(m for m, _ in g.out[x])
        if mv not in ([INT], [INT, SPAWN], [CALL], [RET], []):
            shape_ok = False
            bad.append(Violation(3, (x,), f"node {g.node_name(x)} has successors {mv}"))
    starts = [g.root] + [y for x, m, y in g.edges if m == SPAWN]
    for s in starts:
        z, level, path, visited = s, 0, [s], set()
        while z is not None and z not in visited:
            visited.add(z)
            nxt = [(m, y) for m, y in g.out[z] if m != SPAWN]
            if len(nxt) != 1:
                break
            m, y = nxt[0]
            level += 1 if m == CALL else -1 if m == RET else 0
            path.append(y)
            if level < 0:
                bad.append(Violation(4, tuple(path), f"more returns than calls on the thread from {g.node_name(s)}"))
                break
            z = y
    if check_nesting and shape_ok:
        derived = derive_nesting(g)
        given = set(g.nesting)
        if not g.complete:
            # unmatched calls inside a truncation cannot be judged
            given = {(x, y) for x, y in given if (x, y) in derived or y not in g.frontier}
        for x, y in sorted(derived - given):
            bad.append(Violation(5, (x, y), f"missing nesting edge {g.node_name(x)} -> {g.node_name(y)}"))
        for x, y in sorted(given - derived):
            bad.append(Violation(5, (x, y), f"spurious nesting edge {g.node_name(x)} -> {g.node_name(y)}"))
    return bad


# ---------------------------------------------------------------- DPN semantics


@dataclass
class Enumeration:
    graphs: list
    exhaustive: bool  # every branch explored and none truncated

    @property
    def complete_graphs(self) -> list:
        return [g for g in self.graphs if g.complete]

    @property
    def has_truncated(self) -> bool:
        return any(not g.complete for g in self.graphs)


def enumerate_execution_graphs(m: Dpn, max_nodes: int = 50, max_graphs: int = 1000,
                               allow_bottom_return: bool = False) -> Enumeration:
    """All graphs generated by ``m`` up to the node bound.

    Nodes are expanded in breadth-first order, so ids follow discovery
    order; alternative rules at a node are tried in canonical rule order.
    A return from the last stack frame violates the call/return balance of
    execution graphs, so such branches are dropped unless
    ``allow_bottom_return`` is set, in which case the stuck node with the
    bare bottom stack is kept (and the resulting graph does not validate).
    """
    results = []
    exhaustive = True
    # partial graph: configs, edges, next node to expand, call stack per node
    start = ([m.initial], [], 0)
    stack = [start]
    while stack:
        if len(results) >= max_graphs:
            exhaustive = False
            break
        configs, edges, k = stack.pop()
        if k == len(configs):
            results.append(_finish(m, configs, edges, complete=True))
            continue
        steps = config_steps(m, configs[k])
        if not allow_bottom_return:
            fitting = [s for s in steps if not (s.kind == RET and len(configs[k].stack) == 1)]
            if steps and not fitting:
                continue  # only bottom returns: no execution graph extends this
            steps = fitting
        if not steps:
            stack.append((configs, edges, k + 1))
            continue
        children = []
        truncated = False
        for s in steps:
            new = [s.target] + ([s.spawned] if s.spawned else [])
            if len(configs) + len(new) > max_nodes:
                truncated = True
                continue
            c2 = configs + new
            e2 = edges + [(k, INT if s.kind == SPAWN else s.kind, len(configs))]
            if s.spawned:
                e2.append((k, SPAWN, len(configs) + 1))
            children.append((c2, e2, k + 1))
        if truncated:
            exhaustive = False
            results.append(_finish(m, configs, edges, complete=False, frontier_from=k))
        stack.extend(reversed(children))
    if len(results) > max_graphs:
        results = results[:max_graphs]
    return Enumeration(results, exhaustive and all(g.complete for g in results))


def _finish(m: Dpn, configs, edges, complete: bool, frontier_from: int = 0) -> ExecutionGraph:
    labels = [label_of(m, c) for c in configs]
    frontier = frozenset() if complete else frozenset(range(frontier_from, len(configs)))
    g = ExecutionGraph(labels, list(edges), set(), configs=list(configs),
                       complete=complete, frontier=frontier)
    g.nesting = derive_nesting(g)
    g.__post_init__()
    return g


# ---------------------------------------------------------------- trees


@dataclass
class ExecutionTree:
    """Finite labelled binary tree; nodes are paths over ``"01"``."""

    labels: dict

    def children(self, t: str) -> list:
        return [t + str(d) for d in range(self.labels[t].arity)]

    def nodes(self) -> list:
        return sorted(self.labels, key=lambda s: (len(s), s))

    def __len__(self) -> int:
        return len(self.labels)

    def to_regular(self) -> "RegularTree":
        order = self.nodes()
        idx = {t: i for i, t in enumerate(order)}
        return RegularTree([self.labels[t] for t in order],
                           [tuple(idx[c] for c in self.children(t)) for t in order])

    def to_text(self) -> str:
        return self.to_regular().to_text()


@dataclass
class RegularTree:
    """Finite class graph unfolding into a (possibly infinite) tree; root is class 0."""

    labels: list
    kids: list

    def to_text(self) -> str:
        return "\n".join(f"{i} {lab.to_text()} {' '.join(map(str, ks))}".rstrip()
                         for i, (lab, ks) in enumerate(zip(self.labels, self.kids))) + "\n"

    def is_finite(self) -> bool:
        state = {}

        def cyclic(c):
            if state.get(c) == 1:
                return True
            if state.get(c) == 2:
                return False
            state[c] = 1
            if any(cyclic(k) for k in self.kids[c]):
                return True
            state[c] = 2
            return False

        return not cyclic(0)

    def unfold(self, max_nodes: int = 10_000) -> ExecutionTree:
        if not self.is_finite():
            raise ValueError("regular tree is infinite")
        labels, todo = {}, [("", 0)]
        while todo:
            t, c = todo.pop()
            labels[t] = self.labels[c]
            if len(labels) > max_nodes:
                raise ValueError("unfolding exceeds node limit")
            for d, k in enumerate(self.kids[c]):
                todo.append((t + str(d), k))
        return ExecutionTree(labels)

    def to_dot(self) -> str:
        lines = ["digraph T {"]
        for i, lab in enumerate(self.labels):
            lines.append(f'  c{i} [label="{i}\\n{lab.to_text()}"];')
            for d, k in enumerate(self.kids[i]):
                lines.append(f'  c{i} -> c{k} [label="{d}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_tree(text: str) -> RegularTree:
    """Read the ``id (props | d | p) child0 child1`` format."""
    labels, kids = {}, {}
    for ln in text.splitlines():
        ln = ln.split("#")[0].strip()
        if not ln:
            continue
        try:
            head, rest = ln.split("(", 1)
            inner, tail = rest.split(")", 1)
            i = int(head)
            ks = tuple(int(k) for k in tail.split())
        except ValueError:
            raise ValueError(f"expected 'id (props | d | p) children' in line {ln!r}") from None
        parts = [s.strip() for s in inner.split("|")]
        if len(parts) != 3:
            raise ValueError(f"bad label in line {ln!r}")
        props, d, p = parts
        if d not in SHAPES or (p != BOTTOM and p not in MOVES):
            raise ValueError(f"bad label in line {ln!r}")
        labels[i] = TreeLabel(frozenset(props.split()), d, None if p == BOTTOM else p)
        kids[i] = ks
    n = len(labels)
    if sorted(labels) != list(range(n)):
        raise ValueError("classes must be numbered 0..n-1")
    for i in range(n):
        if len(kids[i]) != labels[i].arity or any(not 0 <= k < n for k in kids[i]):
            raise ValueError(f"class {i}: children do not match the arity of {labels[i].d}")
    return RegularTree([labels[i] for i in range(n)], [kids[i] for i in range(n)])


def node_shape(g: ExecutionGraph, x: int) -> str:
    mv = g.moves_from(x)
    if mv == {INT}:
        return INT
    if mv == {INT, SPAWN}:
        return SPAWN
    if mv == {CALL}:
        return CALLRET if x in g.nest_out else CALL
    if mv == {RET}:
        return RET
    if not mv:
        return END
    raise ValueError(f"node {x} has no execution-tree shape: {sorted(mv)}")


def tree_representation(g: ExecutionGraph):
    """Return ``(tree, delta)`` with ``delta`` mapping graph nodes to tree paths."""
    if not g.complete:
        raise ValueError("tree representation needs a complete graph")
    delta = {g.root: ""}
    labels = {}
    todo = deque([g.root])
    while todo:
        x = todo.popleft()
        t = delta[x]
        preds = g.inc[x]
        p = preds[0][0] if preds else None
        d = node_shape(g, x)
        labels[t] = TreeLabel(frozenset(g.labels[x]), d, p)
        kids = []
        if d in (INT, SPAWN, CALL, CALLRET):
            kids.append(g.successor(x, INT if d in (INT, SPAWN) else CALL))
        if d == SPAWN:
            kids.append(g.successor(x, SPAWN))
        if d == CALLRET:
            kids.append(g.nest_out[x])
        for i, y in enumerate(kids):
            if y in delta:
                raise ValueError("graph is not a tree under the encoding")
            delta[y] = t + str(i)
            todo.append(y)
    if len(delta) != g.n:
        raise ValueError("some nodes are not reached by the encoding")
    return ExecutionTree(labels), delta


class TreeError(ValueError):
    pass


def graph_from_tree(t: ExecutionTree):
    """Inverse of :func:`tree_representation`; returns ``(graph, delta)``.

    Raises :class:`TreeError` when ``t`` is not the tree of an execution graph.
    """
    root = t.labels.get("")
    if root is None:
        raise TreeError("empty tree")
    if root.p is not None:
        raise TreeError(f"root has parent type {root.p}")
    order = t.nodes()
    for s in order:
        lab = t.labels[s]
        if lab.d not in SHAPES:
            raise TreeError(f"unknown shape {lab.d}")
        for i in range(2):
            if (s + str(i) in t.labels) != (i < lab.arity):
                raise TreeError(f"node {s or 'ε'} has wrong number of children")
        if s:
            par = t.labels[s[:-1]]
            want = _child_type(par.d, int(s[-1]))
            if lab.p != want:
                raise TreeError(f"node {s} has parent type {lab.p}, expected {want}")
    idx = {s: i for i, s in enumerate(order)}
    view = FiniteTreeView(t)
    edges, nesting = [], set()
    for s in order:
        lab = t.labels[s]
        x = idx[s]
        if lab.d in (INT, SPAWN):
            edges.append((x, INT, idx[s + "0"]))
        if lab.d == SPAWN:
            edges.append((x, SPAWN, idx[s + "1"]))
        if lab.d in (CALL, CALLRET):
            edges.append((x, CALL, idx[s + "0"]))
        if lab.d == CALLRET:
            nesting.add((x, idx[s + "1"]))
        if lab.d == RET:
            y = tree_successor(view, s, Succ.G)
            if y is None:
                raise TreeError(f"return at {s or 'ε'} has no matching call")
            edges.append((x, RET, idx[y]))
    g = ExecutionGraph([t.labels[s].props for s in order], edges, nesting,
                       names=[s or "ε" for s in order])
    bad = validate_execution_graph(g)
    if bad:
        raise TreeError("; ".join(v.message for v in bad))
    t2, delta = tree_representation(g)
    if t2.labels != t.labels:
        raise TreeError("tree does not encode its own graph")
    return g, delta


def _child_type(d: str, i: int) -> Optional[str]:
    if i == 0:
        return CALL if d in (CALL, CALLRET) else INT
    return SPAWN if d == SPAWN else RET


# ---------------------------------------------------------------- tree successors


class FiniteTreeView:
    def __init__(self, t: ExecutionTree):
        self.t = t

    def label(self, h: str) -> TreeLabel:
        return self.t.labels[h]


class RegularTreeView:
    """Nodes of an unfolded regular tree, addressed by their path from the root."""

    def __init__(self, t: RegularTree, max_depth: int = 1000):
        self.t = t
        self.max_depth = max_depth
        self._cls = {"": 0}

    def cls(self, h: str) -> int:
        if h in self._cls:
            return self._cls[h]
        if len(h) > self.max_depth:
            raise ValueError(f"path deeper than the cap of {self.max_depth}")
        c = self.cls(h[:-1])
        k = self.t.kids[c]
        d = int(h[-1])
        if d >= len(k):
            raise KeyError(h)
        self._cls[h] = k[d]
        return k[d]

    def label(self, h: str) -> TreeLabel:
        return self.t.labels[self.cls(h)]


def int_ret_leaf(view, h: str) -> Optional[str]:
    """The leaf reached from ``h`` through int- and ret-children only."""
    for _ in range(100_000):
        d = view.label(h).d
        if d in (INT, SPAWN):
            h += "0"
        elif d == CALLRET:
            h += "1"
        elif d in (RET, END):
            return h
        else:
            return None
    raise ValueError("no leaf below the node within the walk limit")


def tree_successor(view, h: Optional[str], f: Succ) -> Optional[str]:
    if h is None:
        return None
    lab = view.label(h)
    d, p = lab.d, lab.p
    if f is Succ.A:
        return h + "0" if d in (INT, SPAWN) else h + "1" if d == CALLRET else None
    if f is Succ.C:
        return h + "1" if d == SPAWN else None
    if f is Succ.G:
        if d in (INT, CALL, CALLRET, SPAWN):
            return h + "0"
        if d == RET:
            return tree_successor(view, tree_successor(view, h, Succ.CALLER), Succ.A)
        return None
    if f is Succ.CALLER:
        while True:
            if p == CALL:
                return h[:-1]
            if p in (INT, RET):
                h = h[:-1]
                p = view.label(h).p
                continue
            return None
    if f is Succ.P:
        while True:
            if p == SPAWN:
                return h[:-1]
            if p in (INT, CALL, RET):
                h = h[:-1]
                p = view.label(h).p
                continue
            return None
    if f is Succ.U:
        if p in (INT, CALL):
            return h[:-1]
        if p == RET:
            return int_ret_leaf(view, h[:-1] + "0")
        return None
    raise ValueError(f)


# ---------------------------------------------------------------- small-tree generation


def nested_trees(n: int, labels, _memo=None):
    """All trees with exactly ``n`` nodes as nested ``(label, kids)`` tuples.

    Each node's number of children is the arity of its label.
    """
    labels = tuple(labels)
    by_arity = {k: [lab for lab in labels if lab.arity == k] for k in (0, 1, 2)}
    memo = {} if _memo is None else _memo

    def build(m):
        if m in memo:
            return memo[m]
        out = []
        if m == 1:
            out = [(lab, ()) for lab in by_arity[0]]
        else:
            for sub in build(m - 1):
                out.extend((lab, (sub,)) for lab in by_arity[1])
            for i in range(1, m - 1):
                for left in build(i):
                    for right in build(m - 1 - i):
                        out.extend((lab, (left, right)) for lab in by_arity[2])
        memo[m] = out
        return out

    return build(n)


def tree_from_nested(nested) -> ExecutionTree:
    labels, todo = {}, [("", nested)]
    while todo:
        path, (lab, kids) = todo.pop()
        labels[path] = lab
        for i, k in enumerate(kids):
            todo.append((path + str(i), k))
    return ExecutionTree(labels)


def canonical_parent_types(nested, parent: Optional[str] = None):
    """Relabel ``p`` fields so that each matches the child position."""
    lab, kids = nested
    lab = TreeLabel(lab.props, lab.d, parent)
    return (lab, tuple(canonical_parent_types(k, _child_type(lab.d, i)) for i, k in enumerate(kids)))


def small_execution_graphs(max_nodes: int, props=()):
    """Every execution graph with at most ``max_nodes`` nodes, each node labelled by a subset of ``props``.

    Shapes come from all trees over the six node shapes; those that decode
    to a valid graph are kept and then labelled in every possible way.
    """
    from itertools import combinations, product

    props = sorted(set(props))
    subsets = [frozenset(c) for r in range(len(props) + 1) for c in combinations(props, r)]
    shapes = [TreeLabel(frozenset(), d, None) for d in SHAPES]
    for n in range(1, max_nodes + 1):
        for nested in nested_trees(n, shapes):
            t = tree_from_nested(canonical_parent_types(nested))
            try:
                g, _ = graph_from_tree(t)
            except TreeError:
                continue
            for labs in product(subsets, repeat=g.n):
                yield ExecutionGraph(list(labs), list(g.edges), set(g.nesting), names=g.names)


# ---------------------------------------------------------------- structural properties


def successor_mismatches(g: ExecutionGraph) -> list:
    """Nodes and successor types where the graph and tree successors disagree under delta."""
    t, delta = tree_representation(g)
    view = FiniteTreeView(t)
    bad = []
    for x in range(g.n):
        for f in Succ:
            y = g.succ(x, f)
            want = None if y is None else delta[y]
            got = tree_successor(view, delta[x], f)
            if got != want:
                bad.append((x, f, want, got))
    return bad


def characterization_violations(g: ExecutionGraph) -> list:
    """Check the nesting/caller/parent identities and, with configurations, the stack level of abstract steps."""
    bad = []
    ret_pred = {y: x for x, mv, y in g.edges if mv == RET}
    for y in range(g.n):
        z = g.nest_in.get(y)
        if (z is not None) != (y in ret_pred):
            bad.append(("i", y, "nesting edge without ret-predecessor or vice versa"))
        elif z is not None and g.succ(ret_pred[y], Succ.CALLER) != z:
            bad.append(("i", y, "nesting source is not the caller of the ret-predecessor"))
    for x in range(g.n):
        y = g.succ(x, Succ.A)
        if y is not None and g.succ(x, Succ.CALLER) != g.succ(y, Succ.CALLER):
            bad.append(("ii", x, "caller changes along an abstract step"))
    steps = [(x, y) for x, mv, y in g.edges if mv in (INT, CALL)] + sorted(g.nesting)
    for x, y in steps:
        if g.succ(x, Succ.P) != g.succ(y, Succ.P):
            bad.append(("iii", x, f"parent changes along {x}->{y}"))
    if g.configs is not None:
        for x in range(g.n):
            y = g.succ(x, Succ.A)
            if y is not None and g.configs[x].stack[1:] != g.configs[y].stack[1:]:
                bad.append(("stack", x, "abstract step changes the stack below the top"))
    return bad
