import pytest

from ntlcheck.checker import (HOLDS, SAT, UNSAT, VIOLATED, LIMIT, EmbeddingError,
                              counterexample_is_valid, embed_single_indexed, model_check,
                              satisfiable)
from ntlcheck.corpus import FORMULAS, corpus_dpn, embedding_components
from ntlcheck.execution import enumerate_execution_graphs, graph_from_tree
from ntlcheck.formula import WellFormednessError, parse_formula
from ntlcheck.oracle import models


def test_trivial_formula_holds():
    assert model_check(corpus_dpn("call_return"), parse_formula("Gr true")).verdict == HOLDS


def test_violation_comes_with_valid_counterexample():
    m, phi = corpus_dpn("two_choices"), parse_formula("<g> p")
    r = model_check(m, phi)
    assert r.verdict == VIOLATED
    assert counterexample_is_valid(m, phi, r.counterexample)
    g, _ = graph_from_tree(r.counterexample.unfold())
    assert not models(g, phi)
    assert any(g.labels == h.labels and sorted(g.edges) == sorted(h.edges)
               for h in enumerate_execution_graphs(m).complete_graphs)


def test_call_return_properties():
    m = corpus_dpn("call_return")
    assert model_check(m, parse_formula("<a> <g> true")).verdict == HOLDS
    assert model_check(m, parse_formula("<g> <-> p")).verdict == HOLDS
    assert model_check(m, parse_formula("F{g} (p & q)")).verdict == HOLDS
    assert model_check(m, parse_formula("G{g} !q")).verdict == VIOLATED


def test_nonterminating_dpn_is_decided():
    m = corpus_dpn("looping")
    assert model_check(m, parse_formula("Gr true")).verdict == HOLDS


def test_lock_pair():
    ok, bad = corpus_dpn("lock_ok"), corpus_dpn("lock_bad")
    phi = parse_formula(FORMULAS["lock_order"][0])
    assert model_check(ok, phi).verdict == HOLDS
    r = model_check(bad, phi)
    assert r.verdict == VIOLATED and counterexample_is_valid(bad, phi, r.counterexample)


def test_ill_formed_formula_is_rejected():
    with pytest.raises(WellFormednessError):
        model_check(corpus_dpn("single_int"), parse_formula("mu X. X"))


def test_state_cap_gives_limit():
    r = model_check(corpus_dpn("call_return"), parse_formula("F{g} (p & q)"), cap=5)
    assert r.verdict == LIMIT


@pytest.mark.parametrize("text", ["F{g} p", "<c> true", "Gr (p -> <g> q)", "<a> <a> p & [g] !p"])
def test_satisfiable_with_round_trip(text):
    phi = parse_formula(text)
    r = satisfiable(phi)
    assert r.verdict == SAT and r.stats["round_trip"] == HOLDS
    t = r.witness
    if t.is_finite():
        g, _ = graph_from_tree(t.unfold())
        assert models(g, phi)


@pytest.mark.parametrize("text", ["p & !p", "mu X. <g> X", "<u> p", "<-> p", "<c> <u> true"])
def test_unsatisfiable(text):
    assert satisfiable(parse_formula(text)).verdict == UNSAT


def test_embedding_both_ways():
    # violated: some graph has every local run satisfying its formula
    m, phi = embed_single_indexed(embedding_components())
    assert model_check(m, phi).verdict == VIOLATED
    m, phi = embed_single_indexed(embedding_components("G{g} !busy"))
    assert model_check(m, phi).verdict == HOLDS


def test_embedding_rejects_tag_clash():
    comps = embedding_components()
    with pytest.raises(EmbeddingError):
        embed_single_indexed(comps, tags=["done", "t2"])
    with pytest.raises(EmbeddingError):
        embed_single_indexed(comps, tags=["t", "t"])
