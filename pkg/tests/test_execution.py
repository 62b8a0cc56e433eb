import random

import pytest

from ntlcheck.corpus import corpus_dpn, example_graph, example_node, random_terminating_dpn
from ntlcheck.dpn import CALL, INT, RET, SPAWN, parse_dpn
from ntlcheck.execution import (CALLRET, END, ExecutionGraph, FiniteTreeView, RegularTree,
                                TreeError, TreeLabel, characterization_violations,
                                derive_nesting, enumerate_execution_graphs, graph_from_tree,
                                parse_graph, parse_tree, small_execution_graphs,
                                successor_mismatches, tree_representation, tree_successor,
                                validate_execution_graph)
from ntlcheck.formula import Succ

N = example_node


def chain(moves, labels=None):
    edges = [(i, mv, i + 1) for i, mv in enumerate(moves)]
    n = len(moves) + 1
    g = ExecutionGraph(labels or [frozenset()] * n, edges, set())
    g.nesting = derive_nesting(g)
    g.__post_init__()
    return g


def test_example_graph_is_valid():
    assert validate_execution_graph(example_graph()) == []


def test_missing_nesting_edge_is_reported():
    g = example_graph()
    g.nesting = set(g.nesting) - {(N("n14"), N("n16"))}
    g.__post_init__()
    bad = validate_execution_graph(g)
    assert [v.condition for v in bad] == [5]


def test_two_int_successors_are_reported():
    g = ExecutionGraph([frozenset()] * 3, [(0, INT, 1), (0, INT, 2)], set())
    assert 3 in {v.condition for v in validate_execution_graph(g)}


def test_more_returns_than_calls_reported():
    g = ExecutionGraph([frozenset()] * 2, [(0, RET, 1)], set())
    assert 4 in {v.condition for v in validate_execution_graph(g)}


def test_nesting_of_call_ret_chain():
    assert chain([CALL, RET]).nesting == {(0, 2)}


def test_unmatched_call_gets_no_nesting():
    assert chain([INT, CALL, INT]).nesting == set()


def test_example_nesting_matches_figure():
    g = example_graph()
    main = {(x, y) for x, y in g.nesting if g.node_name(x).startswith("n1")}
    assert main == {(N("n13"), N("n19")), (N("n14"), N("n16"))}


def test_example_successors():
    g = example_graph()
    assert g.succ(N("n13"), Succ.A) == N("n19")
    assert g.succ(N("n15"), Succ.CALLER) == N("n14")
    assert g.succ(N("n17"), Succ.CALLER) == N("n13")
    assert g.succ(N("n21"), Succ.P) == N("n12")
    assert g.succ(N("n12"), Succ.C) == N("n21")
    assert g.succ(N("n16"), Succ.U) == N("n15")
    assert g.succ(N("n11"), Succ.U) is None


def test_example_tree_labels():
    t, delta = tree_representation(example_graph())
    assert t.labels["0"] == TreeLabel(frozenset(), SPAWN, INT)
    assert t.labels["00"] == TreeLabel(frozenset(), CALLRET, INT)
    assert t.labels["0000"] == TreeLabel(frozenset(), RET, CALL)
    assert delta[N("n12")] == "0"


def test_single_node_tree():
    g = ExecutionGraph([frozenset({"p"})], [], set())
    t, _ = tree_representation(g)
    assert t.labels == {"": TreeLabel(frozenset({"p"}), END, None)}


def test_int_run_is_a_path():
    g = chain([INT, INT])
    t, _ = tree_representation(g)
    assert [t.labels[k].d for k in ("", "0", "00")] == [INT, INT, END]


def test_tree_successor_callret_abstract_is_right_child():
    t, _ = tree_representation(example_graph())
    assert tree_successor(FiniteTreeView(t), "00", Succ.A) == "001"


def test_root_has_no_upward_successors():
    t, _ = tree_representation(example_graph())
    view = FiniteTreeView(t)
    for f in (Succ.U, Succ.CALLER, Succ.P):
        assert tree_successor(view, "", f) is None


def test_ret_predecessor_walks_to_leaf():
    g = example_graph()
    t, delta = tree_representation(g)
    x = N("n16")
    got = tree_successor(FiniteTreeView(t), delta[x], Succ.U)
    assert got == delta[g.succ(x, Succ.U)] == delta[N("n15")]


def test_example_successor_equivalence():
    assert successor_mismatches(example_graph()) == []
    assert characterization_violations(example_graph()) == []


def test_graph_from_tree_inverts_representation():
    g = example_graph()
    t, _ = tree_representation(g)
    g2, _ = graph_from_tree(t)
    assert tree_representation(g2)[0].labels == t.labels


def test_graph_from_tree_rejects_wrong_parent_type():
    t, _ = tree_representation(example_graph())
    t.labels["0"] = TreeLabel(frozenset(), SPAWN, CALL)
    with pytest.raises(TreeError):
        graph_from_tree(t)


def test_graph_text_round_trip():
    g = example_graph()
    g2 = parse_graph(g.to_text())
    assert g2.edges == g.edges and g2.nesting == g.nesting and g2.labels == g.labels


def test_tree_text_round_trip():
    t = tree_representation(example_graph())[0].to_regular()
    t2 = parse_tree(t.to_text())
    assert t2 == t


def test_parse_tree_checks_arity():
    with pytest.raises(ValueError):
        parse_tree("0 ( | int | ⊥)\n")


def test_regular_tree_finiteness():
    loop = RegularTree([TreeLabel(frozenset(), INT, None), TreeLabel(frozenset(), INT, INT)],
                       [(1,), (1,)])
    assert not loop.is_finite()
    with pytest.raises(ValueError):
        loop.unfold()


def test_bottom_return_is_dropped_by_default():
    m = parse_dpn("dpn { locations: s0; stack: g0; init: s0 g0; rule s0 g0 -> s0 }")
    assert enumerate_execution_graphs(m).graphs == []
    en = enumerate_execution_graphs(m, allow_bottom_return=True)
    (g,) = en.graphs
    assert g.edges == [(0, RET, 1)]
    assert validate_execution_graph(g) != []


def test_looping_dpn_only_truncates():
    en = enumerate_execution_graphs(corpus_dpn("looping"), max_nodes=10)
    assert not en.exhaustive and en.complete_graphs == []
    assert all(not g.complete for g in en.graphs)


def test_two_alternatives_give_two_graphs():
    en = enumerate_execution_graphs(corpus_dpn("two_choices"))
    assert en.exhaustive and len(en.complete_graphs) == 2


def test_spawn_edges_have_int_continuation():
    (g,) = enumerate_execution_graphs(corpus_dpn("spawner")).graphs
    assert sorted(mv for x, mv, _ in g.edges if x == 0) == [INT, SPAWN]
    assert validate_execution_graph(g) == []


def test_enumerated_graphs_validate():
    rng = random.Random(3)
    for _ in range(30):
        m = random_terminating_dpn(rng, n_syms=8, branching=0.5)
        for g in enumerate_execution_graphs(m, 60, 20).complete_graphs:
            assert validate_execution_graph(g) == []
            assert successor_mismatches(g) == []
            assert characterization_violations(g) == []


def test_small_graphs_are_valid_and_distinct():
    gs = list(small_execution_graphs(4))
    assert all(validate_execution_graph(g) == [] for g in gs)
    shapes = {tuple(sorted(g.edges)) for g in gs}
    assert len(shapes) == len(gs)
    assert min(g.n for g in gs) == 1
