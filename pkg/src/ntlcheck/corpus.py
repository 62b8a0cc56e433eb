"""Hand-built graphs, DPNs and formulas used by tests and experiment scripts."""
from __future__ import annotations

import random

from .dpn import CALL, INT, RET, SPAWN, Dpn, Rule, make_dpn, parse_dpn
from .execution import ExecutionGraph


def example_graph() -> ExecutionGraph:
    """Main thread with two nested calls spawning two threads, cut off after each thread's last drawn node.

    Nodes are named ``n11..n19`` (main), ``n21..n24`` and ``n31..n34``.
    """
    names = [f"n1{i}" for i in range(1, 10)] + [f"n2{i}" for i in range(1, 5)] + \
            [f"n3{i}" for i in range(1, 5)]
    ix = {nm: i for i, nm in enumerate(names)}
    raw = [
        ("n11", INT, "n12"), ("n12", INT, "n13"), ("n12", SPAWN, "n21"),
        ("n13", CALL, "n14"), ("n14", CALL, "n15"), ("n15", RET, "n16"),
        ("n16", INT, "n17"), ("n17", INT, "n18"), ("n17", SPAWN, "n31"),
        ("n18", RET, "n19"),
        ("n21", INT, "n22"), ("n22", CALL, "n23"), ("n23", RET, "n24"),
        ("n31", INT, "n32"), ("n32", INT, "n33"), ("n33", INT, "n34"),
    ]
    nesting = {(ix["n13"], ix["n19"]), (ix["n14"], ix["n16"]), (ix["n22"], ix["n24"])}
    edges = [(ix[a], mv, ix[b]) for a, mv, b in raw]
    return ExecutionGraph([frozenset() for _ in names], edges, nesting, names=names)


def example_node(name: str) -> int:
    names = [f"n1{i}" for i in range(1, 10)] + [f"n2{i}" for i in range(1, 5)] + \
            [f"n3{i}" for i in range(1, 5)]
    return names.index(name)


# ---------------------------------------------------------------- DPNs

DPN_TEXTS = {
    "single_int": """
        dpn { locations: s0 s1; stack: g0 g1; init: s0 g0;
              label s0 g0 { p }
              rule s0 g0 -> s1 g1 }
    """,
    "two_choices": """
        dpn { locations: s0 s1 s2; stack: g0; init: s0 g0;
              label s1 g0 { p }
              rule s0 g0 -> s1 g0
              rule s0 g0 -> s2 g0 }
    """,
    "call_return": """
        dpn { locations: s0 s1 s2; stack: g0 g1 g2; init: s0 g0;
              label s0 g0 { p } label s0 g1 { q } label s2 g2 { p q }
              rule s0 g0 -> s0 g1 g2
              rule s0 g1 -> s1 g1
              rule s1 g1 -> s2
              rule s2 g2 -> s1 g0 }
    """,
    "spawner": """
        dpn { locations: m w; stack: a b; init: m a;
              label m a { main } label w a { worker } label m b { main accept }
              rule m a -> m b spawn w a
              rule w a -> w b }
    """,
    "nested_spawn": """
        dpn { locations: s t; stack: a b c; init: s a;
              label s a { p } label t a { q } label s c { p q }
              rule s a -> s b c
              rule s b -> s b spawn t a
              rule s b -> s
              rule t a -> t c
              rule s c -> s a spawn t c }
    """,
    "looping": """
        dpn { locations: s0; stack: g0; init: s0 g0;
              label s0 g0 { p }
              rule s0 g0 -> s0 g0 }
    """,
    "bottom_return": """
        dpn { locations: s0; stack: g0; init: s0 g0;
              rule s0 g0 -> s0 }
    """,
    "int_chain": """
        dpn { locations: s; stack: a b c d; init: s a;
              label s a { p } label s b { q } label s c { p q }
              rule s a -> s b
              rule s b -> s c
              rule s c -> s d }
    """,
    "nested_calls": """
        dpn { locations: s; stack: main f g r1 r2 done; init: s main;
              label s f { p } label s g { q } label s r2 { p } label s done { q }
              rule s main -> s f r1
              rule s f -> s g r2
              rule s g -> s
              rule s r2 -> s
              rule s r1 -> s done }
    """,
    "call_spawn": """
        dpn { locations: s t; stack: main f f2 r w v r2 fin; init: s main;
              label s f { p } label t w { q } label t v { p q }
              rule s main -> s f r
              rule s f -> s f2 spawn t w
              rule s f2 -> s
              rule s r -> s fin
              rule t w -> t v r2
              rule t v -> t }
    """,
    "choice_spawn": """
        dpn { locations: s t; stack: a b c d f; init: s a;
              label s b { p } label t c { q } label s f { q }
              rule s a -> s b spawn t c
              rule s a -> s f b
              rule s f -> s
              rule t c -> t d }
    """,
    "choice_in_call": """
        dpn { locations: s; stack: a f g h r; init: s a;
              label s g { p } label s h { q } label s r { p }
              rule s a -> s f r
              rule s f -> s g
              rule s f -> s h
              rule s g -> s
              rule s h -> s }
    """,
    "workers": """
        dpn { locations: m w; stack: main m1 m2 req serve done; init: m main;
              label m main { main } label m m1 { main } label m m2 { main accept }
              label w req { worker req } label w serve { worker serve } label w done { worker }
              rule m main -> m m1 spawn w req
              rule m m1 -> m m2 spawn w req
              rule m m1 -> m m2
              rule w req -> w serve done
              rule w serve -> w }
    """,
    "recursion": """
        dpn { locations: s; stack: a b e; init: s a;
              label s a { p } label s b { q }
              rule s a -> s b e
              rule s b -> s a e
              rule s b -> s
              rule s e -> s
              rule s a -> s e }
    """,
}


def lock_dpn(wrong_order: bool) -> Dpn:
    """Main takes lock 1 then lock 2 by calls; a spawned thread does the same, or the reverse.

    A lock is held while its stack symbol (labelled ``l1``/``l2``) is below
    the top, so "holding l" reads as ``F{-} l`` from inside the nested call.
    """
    first, second = ("K2", "K1") if wrong_order else ("K1", "K2")
    return parse_dpn(f"""
        dpn {{ locations: m t; stack: main main1 main2 K1 K2 R1 R2 w T0 T1 T2 U1 U2; init: m main;
              label m K1 {{ l1 }} label m K2 {{ l2 }} label t K1 {{ l1 }} label t K2 {{ l2 }}
              rule m main -> m main1 spawn t T0
              rule m main1 -> m K1 main2
              rule m K1 -> m K2 R1
              rule m K2 -> m w R2
              rule m w -> m
              rule m R2 -> m
              rule m R1 -> m
              rule t T0 -> t {first} T1
              rule t {first} -> t {second} U1
              rule t {second} -> t w U2
              rule t w -> t
              rule t U2 -> t
              rule t U1 -> t }}
    """)


def corpus_dpn(name: str) -> Dpn:
    if name == "lock_ok":
        return lock_dpn(False)
    if name == "lock_bad":
        return lock_dpn(True)
    return parse_dpn(DPN_TEXTS[name])


# DPNs whose execution graphs are finite and few enough to enumerate
TERMINATING = ("single_int", "two_choices", "call_return", "spawner", "int_chain",
               "nested_calls", "call_spawn", "choice_spawn", "choice_in_call", "workers",
               "lock_ok", "lock_bad")

# proposition family of each DPN; formulas are paired with DPNs of their family
DPN_FAMILY = {name: "pq" for name in DPN_TEXTS}
DPN_FAMILY.update({"spawner": "mw", "workers": "mw", "lock_ok": "lock", "lock_bad": "lock"})

# name -> (formula text, family)
FORMULAS = {
    "atom": ("p", "pq"),
    "not_atom": ("!p", "pq"),
    "next_g": ("<g> q", "pq"),
    "dual_g": ("[g] q", "pq"),
    "next_u": ("<g> <u> p", "pq"),
    "dual_u": ("[u] p & <g> [u] !q", "pq"),
    "next_a": ("<a> p", "pq"),
    "dual_a": ("[a] q", "pq"),
    "next_caller": ("<g> <-> p", "pq"),
    "dual_caller": ("Gr [-] !q", "pq"),
    "next_parent": ("Fr (q & <p> true)", "pq"),
    "dual_parent": ("Gr (q -> [p] p)", "pq"),
    "next_child": ("<c> q", "pq"),
    "dual_child": ("Gr [c] q", "pq"),
    "eventually_g": ("F{g} q", "pq"),
    "always_g": ("G{g} (p -> <g> true)", "pq"),
    "until_a": ("p U{a} q", "pq"),
    "eventually_a": ("F{a} !p", "pq"),
    "always_caller": ("Gr (q -> F{-} p)", "pq"),
    "reach_end": ("Fr ([g] false & [c] false)", "pq"),
    "child_start": ("Gr (<c> true -> [c] q)", "pq"),
    "step_back": ("Fr (p & <g> <u> p)", "pq"),
    "nu_plain": ("nu X. (p | <g> X)", "pq"),
    "alt_nu_mu": ("nu X. mu Y. ((p & [g] X) | (!p & [g] Y))", "pq"),
    "alt_mu_nu": ("mu X. nu Y. ((q & [g] Y) | <c> X | <a> X)", "pq"),
    "alt_caller": ("nu X. mu Y. ((q & [-] X) | (!q & [-] Y)) & Gr (p | q | [g] false)", "pq"),
    "thread_local": ("mu X. (q | <a> X | <c> X)", "pq"),
    "callers_two": ("Fr (<-> p & <-> <-> q)", "pq"),
    "lock_order": ("Gr ((F{-} l1 & F{-} l2) -> F{-} (l1 & G{-} !l2))", "lock"),
    "lock_nested": ("Gr (F{-} l2 -> F{-} l1)", "lock"),
    "lock_held": ("Fr (F{-} l1 & F{-} l2)", "lock"),
    "worker_parent": ("Gr (worker -> F{p} main)", "mw"),
    "main_spawns": ("Gr (main & <c> true -> <c> worker)", "mw"),
    "main_accepts": ("F{g} accept", "mw"),
    "worker_returns": ("Gr (serve -> [-] req)", "mw"),
    "req_abstract": ("Gr (req -> <a> !serve)", "mw"),
}

# known-satisfiable formulas: the pipeline must find a witness that round-trips
SAT_FORMULAS = ("<c> true", "nu X. <g> X", "F{g} p", "Gr (p -> <g> q)", "p U{a} q",
                "<g> <-> p", "Fr (q & <p> p)", "nu X. mu Y. ((p & [g] X) | (!p & [g] Y))",
                "mu X. nu Y. ((q & [g] Y) | <c> X)", "Gr [c] q & <c> true",
                "<g> (<u> p & q)", "Fr (<-> p & <-> <-> q)", "nu X. (p & <g> X) & Fr !q",
                "F{a} (!p & <c> q)", "Gr (q -> F{-} p) & Fr q", "<a> <a> p & [g] !p")

# formulas with no model; certified by an oracle sweep over small graphs
UNSAT_FORMULAS = ("p & !p", "mu X. <g> X", "<u> p", "<-> p", "<p> q", "mu X. <a> X",
                  "<g> p & [g] !p", "Fr (<c> true & [c] false)", "nu X. (p & !p & <g> X)",
                  "<c> <u> true", "Gr p & Fr !p", "<g> <-> q & [g] [-] !q")


def corpus_pairs():
    """(dpn name, formula name) for every terminating DPN and formula of the same family."""
    return [(d, f) for d in TERMINATING for f, (_, fam) in FORMULAS.items()
            if DPN_FAMILY[d] == fam]


def embedding_components(worker_formula: str = "G{g} (busy -> <g> !busy)"):
    """Two components: main spawns one worker; the worker does a call while busy.

    Main satisfies ``F{g} done``; with the default worker formula every local
    run is fine, with ``G{g} !busy`` the worker's run is not.
    """
    from .checker import Component
    from .formula import parse_formula
    main = Component(("m",), ("a", "b", "c"), ("m", "a"),
                     (Rule("m", "a", "m", ("b",), ("w", "x")), Rule("m", "b", "m", ("c",))),
                     {("m", "c"): {"done"}})
    worker = Component(("w",), ("x", "y", "r", "z"), ("w", "x"),
                       (Rule("w", "x", "w", ("y", "r")), Rule("w", "y", "w"),
                        Rule("w", "r", "w", ("z",))),
                       {("w", "y"): {"busy"}})
    return [(main, parse_formula("F{g} done")), (worker, parse_formula(worker_formula))]


def random_dpn(rng: random.Random, n_locs: int = 2, n_syms: int = 3, n_rules: int = 5,
               props=("p", "q")) -> Dpn:
    """Small random DPN; kinds are drawn uniformly, heads and targets at random."""
    locs = [f"s{i}" for i in range(n_locs)]
    syms = [f"g{i}" for i in range(n_syms)]
    rules = set()
    for _ in range(n_rules):
        s, g = rng.choice(locs), rng.choice(syms)
        kind = rng.choice((INT, CALL, RET, SPAWN))
        t = rng.choice(locs)
        if kind == INT:
            r = Rule(s, g, t, (rng.choice(syms),))
        elif kind == CALL:
            r = Rule(s, g, t, (rng.choice(syms), rng.choice(syms)))
        elif kind == RET:
            r = Rule(s, g, t)
        else:
            r = Rule(s, g, t, (rng.choice(syms),), (rng.choice(locs), rng.choice(syms)))
        rules.add(r)
    labels = {}
    for s in locs:
        for g in syms:
            labels[(s, g)] = {p for p in props if rng.random() < 0.4}
    return make_dpn(locs, syms, (locs[0], syms[0]), sorted(rules, key=Rule.sort_key), labels)


def random_terminating_dpn(rng: random.Random, n_locs: int = 2, n_syms: int = 6,
                           branching: float = 0.3, props=("p", "q")) -> Dpn:
    """Random DPN that terminates because every rule rewrites ``g_i`` into higher-indexed symbols.

    Every head except the last symbol gets one rule, and a second one with
    probability ``branching``.
    """
    locs = [f"s{i}" for i in range(n_locs)]
    syms = [f"g{i}" for i in range(n_syms)]
    rules = set()
    for s in locs:
        for i in range(n_syms - 1):
            above = syms[i + 1:]
            for _ in range(1 + (rng.random() < branching)):
                kind = rng.choice((INT, CALL, CALL, RET, SPAWN))
                t = rng.choice(locs)
                if kind == INT:
                    rules.add(Rule(s, syms[i], t, (rng.choice(above),)))
                elif kind == CALL:
                    rules.add(Rule(s, syms[i], t, (rng.choice(above), rng.choice(above))))
                elif kind == RET:
                    rules.add(Rule(s, syms[i], t))
                else:
                    rules.add(Rule(s, syms[i], t, (rng.choice(above),),
                                   (rng.choice(locs), rng.choice(above))))
    labels = {(s, g): {p for p in props if rng.random() < 0.4} for s in locs for g in syms}
    return make_dpn(locs, syms, (locs[0], syms[0]), sorted(rules, key=Rule.sort_key), labels)


def random_formula(rng: random.Random, depth: int = 4, props=("p", "q"), free=("Z",),
                   pnf: bool = False):
    """Random well-formed formula; the ``free`` variables occur only positively.

    Bound variables are guarded by a next operator.  Negation is applied to
    closed subformulas unless ``pnf`` is set, in which case only atoms are
    negated.
    """
    from .formula import And, Atom, DualNext, Mu, Next, Not, Nu, Or, Succ, Var

    counter = [0]

    def gen(d, guarded, waiting, open_vars):
        # guarded: usable bound variables; waiting: bound but not yet below a next
        if d == 0 or rng.random() < 0.2:
            choices = [Atom(rng.choice(props)), Not(Atom(rng.choice(props)))]
            choices += [Var(v) for v in guarded + open_vars]
            return rng.choice(choices)
        k = rng.randrange(7 if pnf else 8)
        if k in (0, 1):
            op = Or if k == 0 else And
            return op(gen(d - 1, guarded, waiting, open_vars), gen(d - 1, guarded, waiting, open_vars))
        if k in (2, 3):
            op = Next if k == 2 else DualNext
            return op(rng.choice(list(Succ)), gen(d - 1, guarded + waiting, [], open_vars))
        if k in (4, 5, 6):
            name = f"Y{counter[0]}"
            counter[0] += 1
            body = gen(d - 1, guarded, waiting + [name], open_vars)
            return (Mu if k == 4 else Nu)(name, body)
        return Not(gen(d - 1, [], [], []))

    return gen(depth, [], [], list(free))


def random_tree(rng: random.Random, alphabet, n: int):
    """Random finite tree with ``n`` nodes over arbitrary alphabet labels.

    Only arities are respected, so most results are not execution trees.
    """
    from .execution import tree_from_nested
    by_arity = {}
    for lab in alphabet:
        by_arity.setdefault(lab.arity, []).append(lab)

    def build(k):
        if k <= 1:
            return (rng.choice(by_arity[0]), ())
        ar = rng.choice((1, 2)) if k > 2 else 1
        lab = rng.choice(by_arity[ar])
        if ar == 1:
            return (lab, (build(k - 1),))
        i = rng.randint(1, k - 2)
        return (lab, (build(i), build(k - 1 - i)))

    return tree_from_nested(build(n))
