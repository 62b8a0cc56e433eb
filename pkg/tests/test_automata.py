import pytest

from ntlcheck.automata import (EPS, FALSE_F, TRUE_F, UP, Alphabet, AlphabetMismatch, Npta,
                               ResourceLimit, TwoWayAta, ata2_membership_finite, atom,
                               check_emptiness, conj, disj, extract_witness, intersect, is_empty,
                               minimal_models, npta_membership_finite, npta_membership_regular)
from ntlcheck.constructions import build_dpn_automaton, build_exec_tree_automaton
from ntlcheck.corpus import corpus_dpn, example_graph
from ntlcheck.dpn import CALL, INT, RET, SPAWN
from ntlcheck.execution import (CALLRET, END, ExecutionTree, RegularTree, TreeLabel,
                                tree_representation)
from ntlcheck.formula import TRUE_PROP

E = frozenset()
P = frozenset({"p"})


def lab(d, p=None, props=E):
    return TreeLabel(props, d, p)


def line(*props_per_node):
    """A finite int path, one label per node."""
    labels = {}
    n = len(props_per_node)
    for i, ps in enumerate(props_per_node):
        d = INT if i < n - 1 else END
        labels["0" * i] = lab(d, None if i == 0 else INT, frozenset(ps))
    return ExecutionTree(labels)


def eventually_p(alpha):
    """Reads one branch; state 'wait' has odd priority, so p must show up."""

    def delta(q, lb):
        if q == "done" or "p" in lb.props:
            return [("done",) * lb.arity]
        return [("wait",) * lb.arity] if lb.arity else []

    return Npta("wait", delta, lambda q: 1 if q == "wait" else 0, alpha, 1, name="Fp")


def test_formula_simplification():
    a = atom(0, "q")
    assert conj(TRUE_F, a) == a
    assert conj(a, FALSE_F) == FALSE_F
    assert disj(FALSE_F) == FALSE_F
    assert disj(a, TRUE_F) == TRUE_F


def test_minimal_models_drop_supersets():
    a, b = atom(0, "q"), atom(UP, "r")
    f = disj(conj(a, b), a)
    assert minimal_models(f) == [frozenset({(0, "q")})]
    assert minimal_models(conj(disj(a, b), b)) == [frozenset({(UP, "r")})]


def test_alphabet_excludes_reserved_proposition_from_labels():
    alpha = Alphabet({"p"})
    assert TRUE_PROP in alpha.props
    assert all(TRUE_PROP not in lb.props for lb in alpha)
    # 2 subsets x shapes x (parents + root)
    assert len(alpha) == 2 * 6 * 5


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        Alphabet(()).check_tree(line(["p"]))


def test_npta_membership_on_paths():
    a = eventually_p(Alphabet({"p"}))
    assert npta_membership_finite(a, line([], [], ["p"]))
    assert not npta_membership_finite(a, line([], []))


def test_npta_regular_loop_needs_accepting_cycle():
    alpha = Alphabet({"p"})
    loop = RegularTree([lab(INT), lab(INT, INT)], [(1,), (1,)])
    assert not npta_membership_regular(eventually_p(alpha), loop)
    loop_p = RegularTree([lab(INT), lab(INT, INT, P)], [(1,), (1,)])
    assert npta_membership_regular(eventually_p(alpha), loop_p)


def test_emptiness_and_witness():
    alpha = Alphabet({"p"})
    a = eventually_p(alpha)
    res = check_emptiness(a)
    assert not res.empty
    assert npta_membership_regular(a, res.witness)
    never = Npta(0, lambda q, lb: [], lambda q: 0, alpha, 0)
    assert is_empty(never)
    with pytest.raises(ValueError):
        extract_witness(never)


def test_emptiness_respects_cap():
    counter = Npta(0, lambda q, lb: [(q + 1,)] if lb.arity == 1 else [],
                   lambda q: 1, Alphabet(()), 1)
    with pytest.raises(ResourceLimit):
        check_emptiness(counter, cap=200)


def test_intersection_is_conjunction():
    alpha = Alphabet({"p"})
    et = build_exec_tree_automaton(alpha)
    both = intersect(eventually_p(alpha), et)
    for t in (line([], ["p"]), line([], [])):
        want = npta_membership_finite(eventually_p(alpha), t) and npta_membership_finite(et, t)
        assert npta_membership_finite(both, t) == want
    w = extract_witness(both)
    assert npta_membership_regular(et, w) and npta_membership_regular(eventually_p(alpha), w)


def test_intersection_with_empty_is_empty():
    alpha = Alphabet({"p"})
    never = Npta(0, lambda q, lb: [], lambda q: 0, alpha, 0)
    assert is_empty(intersect(build_exec_tree_automaton(alpha), never))


def test_exec_tree_automaton_accepts_example():
    t, _ = tree_representation(example_graph())
    alpha = Alphabet(set().union(*(lb.props for lb in t.labels.values())))
    assert npta_membership_finite(build_exec_tree_automaton(alpha), t)


def test_exec_tree_automaton_rejects_bad_shapes():
    et = build_exec_tree_automaton(Alphabet(()))
    # a return without a pending call
    assert not npta_membership_finite(et, ExecutionTree({"": lab(RET)}))
    # wrong parent type on the spawned child
    bad = ExecutionTree({"": lab(SPAWN), "0": lab(END, INT), "1": lab(END, INT)})
    assert not npta_membership_finite(et, bad)
    good = ExecutionTree({"": lab(SPAWN), "0": lab(END, INT), "1": lab(END, SPAWN)})
    assert npta_membership_finite(et, good)


def test_call_that_never_returns_is_rejected():
    et = build_exec_tree_automaton(Alphabet(()))
    # callee loops forever although the call is abstracted by a callRet node
    stuck = RegularTree([lab(CALLRET), lab(INT, CALL), lab(END, RET), lab(INT, INT)],
                        [(1, 2), (3,), (), (3,)])
    assert not npta_membership_regular(et, stuck)
    # an unmatched call may loop forever
    pending = RegularTree([lab(CALL), lab(INT, CALL), lab(INT, INT)], [(1,), (2,), (2,)])
    assert npta_membership_regular(et, pending)


def test_dpn_automaton_finds_both_choices():
    m = corpus_dpn("two_choices")
    alpha = Alphabet(m.props)
    both = intersect(build_dpn_automaton(m, alpha), build_exec_tree_automaton(alpha))
    w = extract_witness(both)
    assert npta_membership_regular(build_dpn_automaton(m, alpha), w)


def test_two_way_automaton_can_walk_up():
    alpha = Alphabet({"p"})

    def delta(q, lb):
        if q == "down":
            return atom(0, "back") if lb.arity else FALSE_F
        if q == "back":
            return atom(UP, "check")
        return TRUE_F if "p" in lb.props else FALSE_F

    a = TwoWayAta("down", delta, lambda q: 0, alpha, 0)
    assert ata2_membership_finite(a, line(["p"], []))
    assert not ata2_membership_finite(a, line([], ["p"]))
    stay = TwoWayAta("s", lambda q, lb: atom(EPS, "s"), lambda q: 1, alpha, 1)
    assert not ata2_membership_finite(stay, line([]))
