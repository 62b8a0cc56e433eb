import pytest

from ntlcheck.dpn import (CALL, INT, RET, SPAWN, Configuration, DpnError, Rule, config_steps,
                          label_of, make_dpn, parse_dpn)


def one_rule(rule_text, extra_syms="g2"):
    return parse_dpn(f"dpn {{ locations: s0 s1; stack: g0 g1 {extra_syms}; init: s0 g0; {rule_text} }}")


def test_single_internal_rule():
    m = one_rule("rule s0 g0 -> s1 g1")
    assert len(m.rules) == 1 and m.rules[0].kind == INT
    assert m.rules_of_kind(INT) == list(m.rules)


def test_spawn_rule():
    m = one_rule("rule s0 g0 -> s0 g0 spawn s1 g1")
    assert [r.kind for r in m.rules] == [SPAWN]
    assert m.rules[0].spawn == ("s1", "g1")


def test_call_and_return_kinds():
    m = one_rule("rule s0 g0 -> s1 g1 g2 rule s1 g1 -> s0")
    assert sorted(r.kind for r in m.rules) == sorted([CALL, RET])


def test_undeclared_location_rejected():
    with pytest.raises(DpnError):
        one_rule("rule s9 g0 -> s1 g1")


def test_undeclared_symbol_rejected():
    with pytest.raises(DpnError):
        one_rule("rule s0 g0 -> s1 g7")


def test_duplicate_rule_rejected():
    with pytest.raises(DpnError):
        one_rule("rule s0 g0 -> s1 g1 rule s0 g0 -> s1 g1")


def test_labels_default_to_empty():
    m = parse_dpn("dpn { locations: s; stack: a b; init: s a; label s a { p q } }")
    assert m.label("s", "a") == {"p", "q"}
    assert m.label("s", "b") == frozenset()
    assert m.props == {"p", "q"}


def test_text_round_trip():
    m = one_rule("rule s0 g0 -> s1 g1 g2 rule s1 g1 -> s0 rule s0 g2 -> s0 g1 spawn s1 g0")
    assert parse_dpn(m.to_text()) == m


def test_spawn_and_internal_rules_with_same_target_sort():
    rules = [Rule("s", "a", "s", ("b",)), Rule("s", "a", "s", ("b",), ("s", "a"))]
    m = make_dpn(["s"], ["a", "b"], ("s", "a"), rules)
    assert len(m.rules) == 2


def test_return_pops_top():
    m = one_rule("rule s0 g0 -> s1")
    steps = config_steps(m, Configuration("s0", ("g0", "g1")))
    assert [(s.kind, s.target) for s in steps] == [(RET, Configuration("s1", ("g1",)))]


def test_empty_stack_has_no_steps():
    m = one_rule("rule s0 g0 -> s1")
    assert config_steps(m, Configuration("s0", ())) == []


def test_call_pushes_two():
    m = one_rule("rule s0 g0 -> s1 g1 g2")
    steps = config_steps(m, Configuration("s0", ("g0",)))
    assert [(s.kind, s.target) for s in steps] == [(CALL, Configuration("s1", ("g1", "g2")))]


def test_spawn_step_creates_thread():
    m = one_rule("rule s0 g0 -> s0 g1 spawn s1 g2")
    (step,) = config_steps(m, Configuration("s0", ("g0", "g1")))
    assert step.kind == SPAWN
    assert step.target == Configuration("s0", ("g1", "g1"))
    assert step.spawned == Configuration("s1", ("g2",))


def test_label_of_uses_top_of_stack():
    m = parse_dpn("dpn { locations: s; stack: a b; init: s a; label s b { p } }")
    assert label_of(m, Configuration("s", ("b", "a"))) == {"p"}
    assert label_of(m, Configuration("s", ())) == frozenset()
