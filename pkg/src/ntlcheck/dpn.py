"""Dynamic pushdown networks: model, text format and configuration steps."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

BOTTOM = "⊥"

INT, CALL, RET, SPAWN = "int", "call", "ret", "spawn"
MOVES = (INT, CALL, RET, SPAWN)


@dataclass(frozen=True, order=True)
class Rule:
    """``src_loc src_sym -> dst_loc push...`` with an optional spawned head.

    ``push`` has length 1 (internal or spawn), 2 (call) or 0 (return).
    """

    src_loc: str
    src_sym: str
    dst_loc: str
    push: tuple = ()
    spawn: Optional[tuple] = None

    @property
    def kind(self) -> str:
        if self.spawn is not None:
            return SPAWN
        return {0: RET, 1: INT, 2: CALL}[len(self.push)]

    @property
    def head(self) -> tuple:
        return (self.src_loc, self.src_sym)

    def sort_key(self) -> tuple:
        return (self.src_loc, self.src_sym, self.dst_loc, self.push, self.spawn or ())

    def to_text(self) -> str:
        rhs = [self.dst_loc, *self.push]
        if self.spawn is not None:
            rhs += ["spawn", *self.spawn]
        return f"rule {self.src_loc} {self.src_sym} -> {' '.join(rhs)}"


@dataclass(frozen=True)
class Configuration:
    """Control location plus stack, top first; the bottom marker is implicit."""

    loc: str
    stack: tuple

    @property
    def top(self) -> Optional[str]:
        return self.stack[0] if self.stack else None

    def __str__(self) -> str:
        return f"({self.loc}, {' '.join(self.stack + (BOTTOM,))})"


@dataclass(frozen=True)
class Step:
    kind: str
    target: Configuration
    spawned: Optional[Configuration] = None
    rule: Optional[Rule] = field(default=None, compare=False)


@dataclass(frozen=True)
class Dpn:
    locations: tuple
    stack_symbols: tuple
    init_loc: str
    init_sym: str
    rules: tuple
    labels: dict = field(hash=False, compare=True)

    def __post_init__(self):
        by_head = {}
        for r in self.rules:
            by_head.setdefault(r.head, []).append(r)
        object.__setattr__(self, "_by_head", {h: tuple(rs) for h, rs in by_head.items()})

    def rules_for(self, loc: str, sym: str) -> tuple:
        return self._by_head.get((loc, sym), ())

    def label(self, loc: str, sym: str) -> frozenset:
        return self.labels.get((loc, sym), frozenset())

    @property
    def initial(self) -> Configuration:
        return Configuration(self.init_loc, (self.init_sym,))

    @property
    def props(self) -> set:
        out = set()
        for ls in self.labels.values():
            out |= ls
        return out

    def rules_of_kind(self, kind: str) -> list:
        return [r for r in self.rules if r.kind == kind]

    def to_text(self) -> str:
        lines = [
            "dpn {",
            f"  locations: {' '.join(self.locations)};",
            f"  stack: {' '.join(self.stack_symbols)};",
            f"  init: {self.init_loc} {self.init_sym};",
        ]
        for (s, g), ls in sorted(self.labels.items()):
            if ls:
                lines.append(f"  label {s} {g} {{ {' '.join(sorted(ls))} }}")
        lines += ["  " + r.to_text() for r in self.rules]
        lines.append("}")
        return "\n".join(lines) + "\n"


def make_dpn(locations, stack_symbols, init, rules, labels=None) -> Dpn:
    """Build a validated Dpn in canonical order."""
    locs, syms = tuple(sorted(set(locations))), tuple(sorted(set(stack_symbols)))
    rules = list(rules)
    seen = set()
    for r in rules:
        for loc in [r.src_loc, r.dst_loc] + ([r.spawn[0]] if r.spawn else []):
            if loc not in locs:
                raise DpnError(f"undeclared location {loc!r} in {r.to_text()}")
        for sym in [r.src_sym, *r.push] + ([r.spawn[1]] if r.spawn else []):
            if sym not in syms:
                raise DpnError(f"undeclared stack symbol {sym!r} in {r.to_text()}")
        if r in seen:
            raise DpnError(f"rule listed twice: {r.to_text()}")
        seen.add(r)
    if init[0] not in locs or init[1] not in syms:
        raise DpnError(f"undeclared initial head {init}")
    lab = {}
    for (s, g), ls in (labels or {}).items():
        if s not in locs or g not in syms:
            raise DpnError(f"label for undeclared head ({s}, {g})")
        lab[(s, g)] = frozenset(ls)
    return Dpn(locs, syms, init[0], init[1], tuple(sorted(rules, key=Rule.sort_key)), lab)


class DpnError(ValueError):
    pass


_DPN_TOKEN = re.compile(r"\s+|#[^\n]*|->|[{}:;]|[A-Za-z_][A-Za-z0-9_']*")
_RESERVED = {"dpn", "locations", "stack", "init", "label", "rule", "spawn"}


def _dpn_tokens(text: str) -> list:
    out, pos, line = [], 0, 1
    while pos < len(text):
        m = _DPN_TOKEN.match(text, pos)
        if not m:
            raise DpnError(f"line {line}: unexpected character {text[pos]!r}")
        tok = m.group()
        if not tok.isspace() and not tok.startswith("#"):
            out.append((tok, line))
        line += tok.count("\n")
        pos = m.end()
    return out


def parse_dpn(text: str) -> Dpn:
    toks = _dpn_tokens(text)
    i = 0

    def peek():
        return toks[i][0] if i < len(toks) else None

    def take(expected=None):
        nonlocal i
        if i >= len(toks):
            raise DpnError("unexpected end of input")
        tok, line = toks[i]
        if expected is not None and tok != expected:
            raise DpnError(f"line {line}: expected {expected!r}, found {tok!r}")
        i += 1
        return tok

    def names_until(stop):
        out = []
        while peek() not in stop:
            tok = take()
            if tok in _RESERVED or not re.match(r"[A-Za-z_]", tok):
                raise DpnError(f"line {toks[i - 1][1]}: unexpected {tok!r}")
            out.append(tok)
        return out

    take("dpn")
    take("{")
    locs, syms, init, rules, labels = None, None, None, [], {}
    while peek() != "}":
        kw = take()
        if kw == "locations":
            take(":")
            locs = names_until({";"})
            take(";")
        elif kw == "stack":
            take(":")
            syms = names_until({";"})
            take(";")
        elif kw == "init":
            if init is not None:
                raise DpnError("duplicate init declaration")
            take(":")
            parts = names_until({";"})
            take(";")
            if len(parts) != 2:
                raise DpnError("init needs a location and a stack symbol")
            init = tuple(parts)
        elif kw == "label":
            s, g = take(), take()
            take("{")
            aps = names_until({"}"})
            take("}")
            labels.setdefault((s, g), set()).update(aps)
        elif kw == "rule":
            s, g = take(), take()
            take("->")
            rhs = []
            while peek() not in ("rule", "label", "}", None):
                rhs.append(take())
            rules.append(_rule_from(s, g, rhs))
        else:
            raise DpnError(f"unexpected {kw!r}")
    take("}")
    if i != len(toks):
        raise DpnError("trailing input after dpn block")
    if locs is None or syms is None or init is None:
        raise DpnError("locations, stack and init are required")
    return make_dpn(locs, syms, init, rules, labels)


def _rule_from(s, g, rhs) -> Rule:
    if "spawn" in rhs:
        k = rhs.index("spawn")
        if k != 2 or len(rhs) != 5:
            raise DpnError(f"malformed spawn rule for {s} {g}")
        return Rule(s, g, rhs[0], (rhs[1],), (rhs[3], rhs[4]))
    if not 1 <= len(rhs) <= 3:
        raise DpnError(f"malformed rule for {s} {g}")
    return Rule(s, g, rhs[0], tuple(rhs[1:]))


def config_steps(m: Dpn, c: Configuration) -> list:
    """All successor steps of ``c`` in canonical rule order."""
    if not c.stack:
        return []
    top, rest = c.stack[0], c.stack[1:]
    out = []
    for r in m.rules_for(c.loc, top):
        target = Configuration(r.dst_loc, tuple(r.push) + rest)
        spawned = Configuration(r.spawn[0], (r.spawn[1],)) if r.spawn else None
        out.append(Step(r.kind, target, spawned, r))
    return out


def label_of(m: Dpn, c: Configuration) -> frozenset:
    if not c.stack:
        return frozenset()
    return m.label(c.loc, c.stack[0])


def step_shape_ok(c: Configuration, step: Step) -> bool:
    """The stack changes exactly as the step kind allows."""
    rest = c.stack[1:]
    t = step.target.stack
    if step.kind == INT:
        return len(t) == len(c.stack) and t[1:] == rest
    if step.kind == CALL:
        return len(t) == len(c.stack) + 1 and t[2:] == rest
    if step.kind == RET:
        return t == rest
    return (len(t) == len(c.stack) and t[1:] == rest
            and step.spawned is not None and len(step.spawned.stack) == 1)
