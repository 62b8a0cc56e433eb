from hypothesis import given, settings

from ntlcheck.parity import (PATHFINDER, VERIFIER, ParityGame, brute_force_winner, solve_parity,
                             strategy_is_closed, strategy_wins)

from strategies import parity_games


def test_even_self_loop_is_won_by_verifier():
    g = ParityGame([1], [0], [[0]])
    assert solve_parity(g).winner == [VERIFIER]


def test_odd_self_loop_is_lost():
    g = ParityGame([0], [1], [[0]])
    assert solve_parity(g).winner == [PATHFINDER]


def test_stuck_owner_loses():
    g = ParityGame([0, 1], [0, 0], [[], []])
    assert solve_parity(g).winner == [PATHFINDER, VERIFIER]


def test_verifier_picks_the_even_cycle():
    # 0 -> 1 (odd loop) or 0 -> 2 (even loop)
    g = ParityGame([0, 0, 0], [2, 1, 2], [[1, 2], [1], [2]])
    sol = solve_parity(g)
    assert sol.winner == [VERIFIER, PATHFINDER, VERIFIER]
    assert sol.strategy[0] == 2


def test_lowest_recurring_priority_decides():
    # a cycle through priorities 1 and 2 is odd
    g = ParityGame([0, 0], [1, 2], [[1], [0]])
    assert solve_parity(g).winner == [PATHFINDER, PATHFINDER]


def test_text_format():
    g = ParityGame([0, 1], [3, 0], [[1], [0, 1]])
    assert g.to_text() == "parity 2\n0 3 0 1;\n1 0 1 0,1;\n"


@settings(max_examples=400, deadline=None)
@given(parity_games())
def test_zielonka_agrees_with_brute_force(g):
    assert solve_parity(g).winner == brute_force_winner(g)


@settings(max_examples=200, deadline=None)
@given(parity_games())
def test_strategies_are_winning(g):
    sol = solve_parity(g)
    assert strategy_is_closed(g, sol)
    assert strategy_wins(g, sol, VERIFIER)
    assert strategy_wins(g, sol, PATHFINDER)
