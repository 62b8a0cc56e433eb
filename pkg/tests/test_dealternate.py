import random

from hypothesis import given, settings
from hypothesis import strategies as st

from ntlcheck.automata import Alphabet, ata2_membership_finite, npta_membership_finite
from ntlcheck.constructions import build_formula_automaton, build_formula_npta
from ntlcheck.corpus import example_graph, random_tree
from ntlcheck.dealternate import dealternate, pf_better, pf_key, safra_step
from ntlcheck.execution import small_execution_graphs, tree_representation
from ntlcheck.formula import parse_formula, props, to_pnf
from ntlcheck.oracle import models


def test_pathfinder_order():
    # odd beats even; among odd, small is better; among even, large is better
    assert pf_better(1, 3) and pf_better(3, 0) and pf_better(2, 0)
    assert pf_better(0, None)
    assert sorted([0, 1, 2, 3, None], key=pf_key) == [None, 0, 2, 3, 1]


def test_safra_empty_tree_stays_empty():
    assert safra_step(None, lambda q: [q], lambda q: True, 2) == (None, 5)


def test_safra_accepting_self_loop_signals_progress():
    tree = (1, frozenset({0}), ())
    tree, prio = safra_step(tree, lambda q: [0], lambda q: True, 1)
    assert prio % 2 == 0


# ---- Safra against Buechi acceptance of lasso words


def buchi_accepts(delta, acc, prefix, loop):
    """Run the NBA over prefix . loop^omega by a cycle search on (state, position)."""
    word = list(prefix) + list(loop)
    start = len(prefix)

    def nxt(node):
        q, i = node
        j = i + 1 if i + 1 < len(word) else start
        return [(r, j) for r in delta[q][word[i]]]

    seen, todo = {(0, 0)}, [(0, 0)]
    while todo:
        for w in nxt(todo.pop()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    # an accepting node on a cycle inside the loop part
    for node in seen:
        if node[0] in acc and node[1] >= start:
            stack, vis = list(nxt(node)), set()
            while stack:
                w = stack.pop()
                if w == node:
                    return True
                if w not in vis:
                    vis.add(w)
                    stack.extend(nxt(w))
    return False


def safra_accepts(delta, acc, n, prefix, loop):
    tree = (1, frozenset({0}), ())
    word = list(prefix) + list(loop)
    start = len(prefix)
    i, history, prios = 0, {}, []
    while (tree, i) not in history:
        history[(tree, i)] = len(prios)
        a = word[i]
        tree, p = safra_step(tree, lambda q: delta[q][a], lambda q: q in acc, n)
        prios.append(p)
        i = i + 1 if i + 1 < len(word) else start
    return min(prios[history[(tree, i)]:]) % 2 == 0


@st.composite
def nba_and_lasso(draw):
    n = draw(st.integers(1, 3))
    delta = [[draw(st.sets(st.integers(0, n - 1), max_size=2)) for _ in range(2)] for _ in range(n)]
    acc = draw(st.sets(st.integers(0, n - 1)))
    prefix = draw(st.lists(st.integers(0, 1), max_size=3))
    loop = draw(st.lists(st.integers(0, 1), min_size=1, max_size=3))
    return delta, acc, n, prefix, loop


@settings(max_examples=400, deadline=None)
@given(nba_and_lasso())
def test_safra_matches_buchi_on_lassos(case):
    delta, acc, n, prefix, loop = case
    assert safra_accepts(delta, acc, n, prefix, loop) == buchi_accepts(delta, acc, prefix, loop)


# ---- dealternation of formula automata


FORMULAS = ["<u> p", "F{g} p", "<-> p", "Gr (p -> <g> true)", "nu X. p & [a] X",
            "<c> <p> p", "mu X. p | <-> X"]


def test_generic_dealternation_agrees_on_random_trees():
    rng = random.Random(11)
    for text in FORMULAS:
        phi = to_pnf(parse_formula(text))
        alpha = Alphabet(props(phi))
        ata = build_formula_automaton(phi, alpha)
        npta = dealternate(ata)
        for _ in range(40):
            t = random_tree(rng, alpha, rng.randint(1, 7))
            assert npta_membership_finite(npta, t) == ata2_membership_finite(ata, t), (text, t)


def test_formula_npta_agrees_with_oracle_on_small_graphs():
    graphs = list(small_execution_graphs(4, ("p",)))
    for text in FORMULAS[:4]:
        phi = to_pnf(parse_formula(text))
        npta = build_formula_npta(phi, Alphabet({"p"}))
        for g in graphs:
            t, _ = tree_representation(g)
            assert npta_membership_finite(npta, t) == models(g, phi), (text, g.to_text())


def test_example_graph_eventually_reaches_child():
    phi = to_pnf(parse_formula("Fr <p> true"))
    g = example_graph()
    t, _ = tree_representation(g)
    npta = build_formula_npta(phi, Alphabet(()))
    assert npta_membership_finite(npta, t) == models(g, phi) is True
