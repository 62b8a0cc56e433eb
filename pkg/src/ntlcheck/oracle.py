"""Direct fixpoint semantics of NTL on finite execution graphs.

Node sets are Python ints used as bitsets over the graph's node numbering.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dpn import Dpn
from .execution import ExecutionGraph, enumerate_execution_graphs
from .formula import (And, Atom, DualNext, Formula, Mu, Next, Not, Nu, Or, Var,
                      free_variables)


class TruncatedGraphError(ValueError):
    pass


def bits_of(nodes) -> int:
    out = 0
    for x in nodes:
        out |= 1 << x
    return out


def nodes_of(bits: int) -> set:
    out, x = set(), 0
    while bits:
        if bits & 1:
            out.add(x)
        bits >>= 1
        x += 1
    return out


class Evaluator:
    """Evaluates formulas on one graph, memoizing per subformula and valuation."""

    def __init__(self, g: ExecutionGraph):
        if not g.complete:
            raise TruncatedGraphError("the oracle only evaluates complete graphs")
        self.g = g
        self.full = (1 << g.n) - 1
        self.tables = {}
        self.memo = {}
        self.fv = {}
        self.prop_bits = {}
        for x, lab in enumerate(g.labels):
            for p in lab:
                self.prop_bits[p] = self.prop_bits.get(p, 0) | (1 << x)

    def _table(self, f):
        if f not in self.tables:
            self.tables[f] = [(x, y) for x, y in enumerate(self.g.successor_table(f)) if y is not None]
        return self.tables[f]

    def _free(self, phi):
        key = id(phi)
        if key not in self.fv:
            self.fv[key] = (phi, tuple(sorted(free_variables(phi))))
        return self.fv[key][1]

    def eval(self, phi: Formula, val: dict) -> int:
        free = self._free(phi)
        key = (id(phi), tuple(val.get(v, 0) for v in free))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        res = self._eval(phi, val)
        self.memo[key] = res
        return res

    def _eval(self, phi, val) -> int:
        if isinstance(phi, Atom):
            return self.prop_bits.get(phi.name, 0)
        if isinstance(phi, Var):
            if phi.name not in val:
                raise KeyError(f"free variable {phi.name} has no value")
            return val[phi.name]
        if isinstance(phi, Not):
            return self.full & ~self.eval(phi.sub, val)
        if isinstance(phi, Or):
            return self.eval(phi.left, val) | self.eval(phi.right, val)
        if isinstance(phi, And):
            return self.eval(phi.left, val) & self.eval(phi.right, val)
        if isinstance(phi, (Next, DualNext)):
            inner = self.eval(phi.sub, val)
            out = 0
            if isinstance(phi, Next):
                for x, y in self._table(phi.succ):
                    if inner >> y & 1:
                        out |= 1 << x
                return out
            out = self.full
            for x, y in self._table(phi.succ):
                if not inner >> y & 1:
                    out &= ~(1 << x)
            return out
        if isinstance(phi, (Mu, Nu)):
            cur = 0 if isinstance(phi, Mu) else self.full
            while True:
                nxt = self.eval(phi.body, {**val, phi.var: cur})
                if nxt == cur:
                    return cur
                cur = nxt
        raise TypeError(phi)


def evaluate(g: ExecutionGraph, phi: Formula, val: Optional[dict] = None) -> set:
    """The set of nodes of ``g`` satisfying ``phi`` under ``val`` (variable -> node set)."""
    ev = Evaluator(g)
    bits = {v: bits_of(s) for v, s in (val or {}).items()}
    return nodes_of(ev.eval(phi, bits))


def models(g: ExecutionGraph, phi: Formula) -> bool:
    return bool(Evaluator(g).eval(phi, {}) >> g.root & 1)


@dataclass
class OracleVerdict:
    verdict: str  # "true" | "false" | "inconclusive"
    counterexample: Optional[ExecutionGraph] = None
    graphs_checked: int = 0


def dpn_models_oracle(m: Dpn, phi: Formula, max_nodes: int = 40, max_graphs: int = 2000) -> OracleVerdict:
    en = enumerate_execution_graphs(m, max_nodes, max_graphs)
    checked = 0
    for g in en.complete_graphs:
        checked += 1
        if not models(g, phi):
            return OracleVerdict("false", g, checked)
    return OracleVerdict("true" if en.exhaustive else "inconclusive", None, checked)


def check_monotonicity(g: ExecutionGraph, phi: Formula, var: str, val: dict,
                       smaller: set, larger: set) -> bool:
    """Whether enlarging the value of ``var`` can only enlarge the result."""
    assert smaller <= larger
    lo = evaluate(g, phi, {**val, var: smaller})
    hi = evaluate(g, phi, {**val, var: larger})
    return lo <= hi
