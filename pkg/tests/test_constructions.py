import pytest

from ntlcheck.automata import Alphabet, npta_membership_finite, npta_membership_regular
from ntlcheck.constructions import (FormulaError, SynthesisError, build_dpn_automaton,
                                    build_exec_tree_automaton, build_formula_automaton,
                                    synthesize_dpn)
from ntlcheck.corpus import corpus_dpn
from ntlcheck.dpn import INT, SPAWN
from ntlcheck.execution import (END, RegularTree, TreeLabel, enumerate_execution_graphs,
                                small_execution_graphs, tree_representation)
from ntlcheck.formula import Next, Succ, Var, parse_formula


def tree_key(t):
    return tuple(sorted(t.labels.items()))


@pytest.mark.parametrize("name,size,props", [("single_int", 3, ("p",)),
                                             ("two_choices", 3, ("p",)),
                                             ("int_chain", 4, ("p", "q")),
                                             ("spawner", 4, ("main", "accept", "worker"))])
def test_dpn_automaton_accepts_exactly_its_trees(name, size, props):
    m = corpus_dpn(name)
    alpha = Alphabet(m.props)
    am = build_dpn_automaton(m, alpha)
    mine = {tree_key(tree_representation(g)[0])
            for g in enumerate_execution_graphs(m).complete_graphs}
    assert mine
    seen = set()
    for g in small_execution_graphs(size, props):
        t, _ = tree_representation(g)
        k = tree_key(t)
        assert npta_membership_finite(am, t) == (k in mine), g.to_text()
        seen.add(k)
    assert mine <= seen


def test_dpn_automaton_checks_labels():
    m = corpus_dpn("single_int")
    am = build_dpn_automaton(m, Alphabet(m.props))
    (g,) = enumerate_execution_graphs(m).complete_graphs
    t, _ = tree_representation(g)
    assert npta_membership_finite(am, t)
    t.labels[""] = TreeLabel(frozenset(), t.labels[""].d, None)
    assert not npta_membership_finite(am, t)


def test_dpn_automaton_rejects_stopping_early():
    m = corpus_dpn("single_int")
    am = build_dpn_automaton(m, Alphabet(m.props))
    root_only = RegularTree([TreeLabel(frozenset({"p"}), END, None)], [()])
    assert not npta_membership_regular(am, root_only)


def test_formula_automaton_needs_closed_pnf():
    with pytest.raises(FormulaError):
        build_formula_automaton(parse_formula("!<g> p"), Alphabet({"p"}))
    with pytest.raises(FormulaError):
        build_formula_automaton(Next(Succ.G, Var("X")), Alphabet(()))


def test_synthesis_round_trip():
    m = corpus_dpn("call_spawn")
    for g in enumerate_execution_graphs(m).complete_graphs:
        t = tree_representation(g)[0].to_regular()
        m2 = synthesize_dpn(t)
        (g2,) = enumerate_execution_graphs(m2).complete_graphs
        assert tree_key(tree_representation(g2)[0]) == tree_key(tree_representation(g)[0])


def test_synthesis_of_infinite_tree():
    loop = RegularTree([TreeLabel(frozenset(), INT, None), TreeLabel(frozenset({"p"}), INT, INT)],
                       [(1,), (1,)])
    m = synthesize_dpn(loop)
    alpha = Alphabet({"p"})
    assert npta_membership_regular(build_dpn_automaton(m, alpha), loop)
    en = enumerate_execution_graphs(m, max_nodes=6)
    assert not en.exhaustive


def test_synthesis_rejects_non_execution_tree():
    bad = RegularTree([TreeLabel(frozenset(), SPAWN, None), TreeLabel(frozenset(), END, INT)],
                      [(1, 1), ()])
    with pytest.raises(SynthesisError):
        synthesize_dpn(bad)


def test_exec_tree_automaton_accepts_all_small_graphs():
    et = build_exec_tree_automaton(Alphabet(()))
    for g in small_execution_graphs(5):
        assert npta_membership_finite(et, tree_representation(g)[0])
