"""NTL formulas: syntax tree, parser, printer, normal form and fixpoint priorities."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, Union


class Succ(enum.Enum):
    """Successor types. ``u`` is the global predecessor, ``-`` the caller."""

    G = "g"
    U = "u"
    A = "a"
    CALLER = "-"
    P = "p"
    C = "c"

    def __str__(self) -> str:
        return self.value


SUCC_LETTERS = {s.value: s for s in Succ}

TRUE_PROP = "__t"
RESERVED_PREFIX = "__"


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Next:
    succ: Succ
    sub: "Formula"


@dataclass(frozen=True)
class DualNext:
    succ: Succ
    sub: "Formula"


@dataclass(frozen=True)
class Mu:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Nu:
    var: str
    body: "Formula"


Formula = Union[Atom, Not, Or, And, Var, Next, DualNext, Mu, Nu]
FIXPOINTS = (Mu, Nu)

TRUE = Or(Atom(TRUE_PROP), Not(Atom(TRUE_PROP)))
FALSE = Not(TRUE)


def children(f: Formula) -> tuple:
    if isinstance(f, (Atom, Var)):
        return ()
    if isinstance(f, (Or, And)):
        return (f.left, f.right)
    if isinstance(f, (Mu, Nu)):
        return (f.body,)
    return (f.sub,)


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, repeated subtrees included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def subformulae(f: Formula) -> set:
    return set(walk(f))


def size(f: Formula) -> int:
    return len(subformulae(f))


def props(f: Formula) -> set:
    return {g.name for g in walk(f) if isinstance(g, Atom)}


def bound_variables(f: Formula) -> list:
    return [g.var for g in walk(f) if isinstance(g, FIXPOINTS)]


def free_variables(f: Formula) -> frozenset:
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, Atom):
        return frozenset()
    if isinstance(f, FIXPOINTS):
        return free_variables(f.body) - {f.var}
    out = frozenset()
    for c in children(f):
        out |= free_variables(c)
    return out


def is_closed(f: Formula) -> bool:
    return not free_variables(f)


def is_pnf(f: Formula) -> bool:
    return all(not isinstance(g, Not) or isinstance(g.sub, Atom) for g in walk(f))


def _rebuild(f: Formula, kids: list) -> Formula:
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, Or):
        return Or(kids[0], kids[1])
    if isinstance(f, And):
        return And(kids[0], kids[1])
    if isinstance(f, Next):
        return Next(f.succ, kids[0])
    if isinstance(f, DualNext):
        return DualNext(f.succ, kids[0])
    if isinstance(f, Mu):
        return Mu(f.var, kids[0])
    if isinstance(f, Nu):
        return Nu(f.var, kids[0])
    return f


def _fresh(base: str, avoid: set) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def substitute(f: Formula, replacement: Formula, var: str) -> Formula:
    """Replace free occurrences of ``var`` by ``replacement`` without capture."""
    if isinstance(f, Var):
        return replacement if f.name == var else f
    if isinstance(f, Atom):
        return f
    if isinstance(f, FIXPOINTS):
        if f.var == var or var not in free_variables(f.body):
            return f
        body, binder = f.body, f.var
        repl_free = free_variables(replacement)
        if binder in repl_free:
            avoid = repl_free | free_variables(body) | set(bound_variables(body)) | {var}
            new = _fresh(binder, avoid)
            body = substitute(body, Var(new), binder)
            binder = new
        return type(f)(binder, substitute(body, replacement, var))
    return _rebuild(f, [substitute(c, replacement, var) for c in children(f)])


def rename_apart(f: Formula) -> Formula:
    """Give every binder a distinct name; free variables are left alone."""
    taken = set(free_variables(f)) | set(bound_variables(f))
    seen = set()

    def go(g, env):
        if isinstance(g, Var):
            return Var(env.get(g.name, g.name))
        if isinstance(g, FIXPOINTS):
            name = g.var
            if name in seen:
                name = _fresh(name, taken)
                taken.add(name)
            seen.add(name)
            return type(g)(name, go(g.body, {**env, g.var: name}))
        return _rebuild(g, [go(c, env) for c in children(g)])

    return go(f, {})


# ---------------------------------------------------------------- parsing


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>\#[^\n]*)
      | (?P<arrow><->|->)
      | (?P<op>[!&|().])
      | (?P<next><\s*[^>\s]\s*>)
      | (?P<dual>\[\s*[^\]\s]\s*\])
      | (?P<indexed>(?:U|F|G)\s*\{\s*[^}\s]*\s*\})
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
    """,
    re.VERBOSE,
)

KEYWORDS = {"mu", "nu", "true", "false", "Fr", "Gr", "F", "G", "U"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            if kind == "ident" and s in KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, s, line, col))
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


def _succ_of(tok: _Tok, letter: str) -> Succ:
    if letter not in SUCC_LETTERS:
        raise FormulaSyntaxError(f"unknown successor type {letter!r}", tok.line, tok.col)
    return SUCC_LETTERS[letter]


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        used = {t.text for t in self.toks if t.kind == "ident"}
        self._fresh_avoid = used
        self._counter = 0

    def fresh(self) -> str:
        while True:
            name = f"{RESERVED_PREFIX}X{self._counter}"
            self._counter += 1
            if name not in self._fresh_avoid:
                return name

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str):
        raise FormulaSyntaxError(msg, self.tok.line, self.tok.col)

    def eat(self, text: str) -> _Tok:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Formula:
        f = self.expr()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return f

    def expr(self) -> Formula:
        left = self.disj()
        if self.tok.kind == "arrow":
            op = self.tok.text
            self.i += 1
            right = self.expr()
            if op == "->":
                return Or(Not(left), right)
            return And(Or(Not(left), right), Or(Not(right), left))
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.tok.text == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.until()
        while self.tok.text == "&":
            self.i += 1
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        left = self.unary()
        if self.tok.kind == "indexed" and self.tok.text[0] == "U":
            tok = self.tok
            succ = _succ_of(tok, _index_letter(tok.text))
            self.i += 1
            right = self.until()
            return until(left, right, succ, self.fresh())
        return left

    def unary(self) -> Formula:
        t = self.tok
        if t.text == "!":
            self.i += 1
            return Not(self.unary())
        if t.kind == "arrow" and t.text == "<->":
            # in prefix position this is the caller next operator
            self.i += 1
            return Next(Succ.CALLER, self.unary())
        if t.kind == "next":
            self.i += 1
            return Next(_succ_of(t, t.text[1:-1].strip()), self.unary())
        if t.kind == "dual":
            self.i += 1
            return DualNext(_succ_of(t, t.text[1:-1].strip()), self.unary())
        if t.kind == "indexed":
            if t.text[0] == "U":
                self.error("'U' needs a left operand")
            succ = _succ_of(t, _index_letter(t.text))
            self.i += 1
            sub = self.unary()
            if t.text[0] == "F":
                return eventually(sub, succ, self.fresh())
            return globally(sub, succ, self.fresh())
        if t.kind == "kw":
            if t.text in ("mu", "nu"):
                self.i += 1
                if self.tok.kind != "ident":
                    self.error("expected a variable name")
                var = self.tok.text
                self.i += 1
                self.eat(".")
                body = self.expr()
                return Mu(var, body) if t.text == "mu" else Nu(var, body)
            if t.text == "true":
                self.i += 1
                return TRUE
            if t.text == "false":
                self.i += 1
                return FALSE
            if t.text in ("Fr", "Gr"):
                self.i += 1
                sub = self.unary()
                if t.text == "Fr":
                    return reach_eventually(sub, self.fresh())
                return reach_globally(sub, self.fresh())
            if t.text in ("F", "G"):
                self.i += 1
                sub = self.unary()
                if t.text == "F":
                    return eventually(sub, Succ.G, self.fresh())
                return globally(sub, Succ.G, self.fresh())
            self.error(f"unexpected keyword {t.text!r}")
        if t.text == "(":
            self.i += 1
            f = self.expr()
            self.eat(")")
            return f
        if t.kind == "ident":
            self.i += 1
            return _Name(t.text)
        self.error(f"unexpected {t.text or 'end of input'!r}")


def _index_letter(text: str) -> str:
    return text[text.index("{") + 1 : text.index("}")].strip()


@dataclass(frozen=True)
class _Name:
    """Identifier whose role (atom or variable) is resolved after parsing."""

    name: str


def _resolve(f, bound: frozenset) -> Formula:
    if isinstance(f, _Name):
        return Var(f.name) if f.name in bound else Atom(f.name)
    if isinstance(f, (Atom, Var)):
        return f
    if isinstance(f, FIXPOINTS):
        return type(f)(f.var, _resolve(f.body, bound | {f.var}))
    return _rebuild(f, [_resolve(c, bound) for c in children(f)])


def until(left: Formula, right: Formula, succ: Succ, var: str) -> Formula:
    return Mu(var, Or(right, And(left, Next(succ, Var(var)))))


def eventually(sub: Formula, succ: Succ, var: str) -> Formula:
    return until(TRUE, sub, succ, var)


def globally(sub: Formula, succ: Succ, var: str) -> Formula:
    return Not(eventually(Not(sub), succ, var))


def reach_eventually(sub: Formula, var: str) -> Formula:
    return Mu(var, Or(Or(sub, Next(Succ.G, Var(var))), Next(Succ.C, Var(var))))


def reach_globally(sub: Formula, var: str) -> Formula:
    return Not(reach_eventually(Not(sub), var))


def parse_formula(text: str) -> Formula:
    """Parse concrete syntax; sugar is expanded with fresh ``__X<n>`` binders.

    Identifiers bound by an enclosing ``mu``/``nu`` become variables, all
    others atomic propositions.
    """
    return _resolve(_Parser(text).parse(), frozenset())


# ---------------------------------------------------------------- printing

_PREC = {Or: 1, And: 2, Mu: 0, Nu: 0}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 3)


def to_text(f: Formula) -> str:
    """Print in the concrete syntax accepted by :func:`parse_formula`."""
    return _show(f, 0)


def _show(f: Formula, ctx: int) -> str:
    if isinstance(f, (Atom, Var)):
        s = f.name
    elif isinstance(f, Not):
        s = "!" + _show(f.sub, 3)
    elif isinstance(f, Next):
        s = f"<{f.succ.value}> " + _show(f.sub, 3)
    elif isinstance(f, DualNext):
        s = f"[{f.succ.value}] " + _show(f.sub, 3)
    elif isinstance(f, Or):
        s = _show(f.left, 1) + " | " + _show(f.right, 2)
    elif isinstance(f, And):
        s = _show(f.left, 2) + " & " + _show(f.right, 3)
    else:
        kw = "mu" if isinstance(f, Mu) else "nu"
        s = f"{kw} {f.var}. " + _show(f.body, 0)
    if _prec(f) < ctx:
        return "(" + s + ")"
    return s


# ---------------------------------------------------------------- well-formedness


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # duplicate-binder | odd-negation | unguarded | free-variable
    variable: str
    message: str


class WellFormednessError(ValueError):
    def __init__(self, diagnostics: list):
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


def check_well_formed(f: Formula) -> list:
    """All violations; an empty list means well-formed and closed."""
    out = []
    seen = {}
    for v in bound_variables(f):
        seen[v] = seen.get(v, 0) + 1
    for v, n in sorted(seen.items()):
        if n > 1:
            out.append(Diagnostic("duplicate-binder", v, f"variable {v} is bound {n} times"))
    reported = set()

    def visit(g, scopes):
        # scopes: var -> (negations, nexts) counted since its binder
        if isinstance(g, Var):
            if g.name not in scopes:
                if ("free", g.name) not in reported:
                    reported.add(("free", g.name))
                    out.append(Diagnostic("free-variable", g.name, f"variable {g.name} is free"))
                return
            negs, nexts = scopes[g.name]
            if negs % 2 and ("neg", g.name) not in reported:
                reported.add(("neg", g.name))
                out.append(Diagnostic("odd-negation", g.name,
                                      f"variable {g.name} occurs under an odd number of negations"))
            if nexts == 0 and ("guard", g.name) not in reported:
                reported.add(("guard", g.name))
                out.append(Diagnostic("unguarded", g.name,
                                      f"variable {g.name} occurs outside any next operator"))
            return
        if isinstance(g, Not):
            visit(g.sub, {v: (n + 1, k) for v, (n, k) in scopes.items()})
        elif isinstance(g, (Next, DualNext)):
            visit(g.sub, {v: (n, k + 1) for v, (n, k) in scopes.items()})
        elif isinstance(g, FIXPOINTS):
            visit(g.body, {**scopes, g.var: (0, 0)})
        else:
            for c in children(g):
                visit(c, scopes)

    visit(f, {})
    return out


def require_well_formed(f: Formula) -> None:
    diags = check_well_formed(f)
    if diags:
        raise WellFormednessError(diags)


# ---------------------------------------------------------------- normal form


def to_pnf(f: Formula) -> Formula:
    """Push negations to the atoms using dual next operators and nu."""
    return _pnf(f, False, frozenset())


def _pnf(f: Formula, neg: bool, flipped: frozenset) -> Formula:
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Var):
        if neg != (f.name in flipped):
            raise WellFormednessError(
                [Diagnostic("odd-negation", f.name,
                            f"variable {f.name} occurs under an odd number of negations")])
        return f
    if isinstance(f, Not):
        return _pnf(f.sub, not neg, flipped)
    if isinstance(f, (Or, And)):
        left, right = _pnf(f.left, neg, flipped), _pnf(f.right, neg, flipped)
        return (And if isinstance(f, Or) == neg else Or)(left, right)
    if isinstance(f, (Next, DualNext)):
        sub = _pnf(f.sub, neg, flipped)
        return (DualNext if isinstance(f, Next) == neg else Next)(f.succ, sub)
    flips = flipped | {f.var} if neg else flipped - {f.var}
    body = _pnf(f.body, neg, flips)
    return (Nu if isinstance(f, Mu) == neg else Mu)(f.var, body)


def negate(f: Formula) -> Formula:
    return to_pnf(Not(f))


# ---------------------------------------------------------------- priorities


@dataclass(frozen=True)
class PriorityAssignment:
    """Priorities of fixpoint subformulas; everything else gets ``default``."""

    fixpoints: dict = field(hash=False)
    default: int

    def of(self, state) -> int:
        return self.fixpoints.get(state, self.default)

    @property
    def max_priority(self) -> int:
        return self.default


def fixpoint_map(f: Formula) -> dict:
    """Variable name -> binding fixpoint subformula."""
    return {g.var: g for g in walk(f) if isinstance(g, FIXPOINTS)}


def dependency_order(f: Formula) -> dict:
    """For each variable X, the variables Y with Y free in fp(X)."""
    fps = fixpoint_map(f)
    return {x: sorted(free_variables(fp) & fps.keys()) for x, fp in fps.items()}


def assign_priorities(f: Formula) -> PriorityAssignment:
    """Chain walk along the dependency order, parity matching the fixpoint type.

    Where several chains reach the same fixpoint the largest value wins.
    """
    fps = fixpoint_map(f)
    preds = dependency_order(f)
    memo = {}

    def value(x):
        if x not in memo:
            mu = isinstance(fps[x], Mu)
            best = 1 if mu else 0
            for y in preds[x]:
                vy = value(y)
                same = isinstance(fps[y], Mu) == mu
                best = max(best, vy if same else vy + 1)
            memo[x] = best
        return memo[x]

    prio = {fps[x]: value(x) for x in fps}
    return PriorityAssignment(prio, max(prio.values(), default=0))
