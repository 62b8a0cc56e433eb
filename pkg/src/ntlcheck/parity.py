"""Min-parity games: Zielonka's recursive algorithm and a brute-force oracle.

Player 0 (Verifier) wins an infinite play when the least priority seen
infinitely often is even.  A player who cannot move loses.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field

VERIFIER, PATHFINDER = 0, 1


@dataclass
class ParityGame:
    owner: list
    priority: list
    moves: list  # successor lists

    @property
    def n(self) -> int:
        return len(self.owner)

    def to_text(self) -> str:
        lines = [f"parity {self.n}"]
        for v in range(self.n):
            succ = ",".join(map(str, self.moves[v]))
            lines.append(f"{v} {self.priority[v]} {self.owner[v]} {succ};")
        return "\n".join(lines) + "\n"


@dataclass
class ParitySolution:
    winner: list  # per position, 0 or 1
    strategy: dict = field(default_factory=dict)  # position -> chosen successor (for its owner)

    def region(self, player: int) -> set:
        return {v for v, w in enumerate(self.winner) if w == player}


class _Solver:
    def __init__(self, game: ParityGame):
        n = game.n
        # two sinks make the game total: a stuck owner moves to the opponent's sink
        self.win_sink = {VERIFIER: n, PATHFINDER: n + 1}
        self.owner = list(game.owner) + [VERIFIER, VERIFIER]
        self.prio = list(game.priority) + [0, 1]
        self.succ = [list(dict.fromkeys(m)) for m in game.moves] + [[n], [n + 1]]
        for v in range(n):
            if not self.succ[v]:
                self.succ[v] = [self.win_sink[1 - self.owner[v]]]
        self.pred = [[] for _ in range(n + 2)]
        for v, ms in enumerate(self.succ):
            for w in ms:
                self.pred[w].append(v)
        self.strategy = {}

    def attractor(self, player, target, sub):
        attr = set(target)
        count = {}
        queue = list(target)
        while queue:
            w = queue.pop()
            for v in self.pred[w]:
                if v not in sub or v in attr:
                    continue
                if self.owner[v] == player:
                    attr.add(v)
                    self.strategy[v] = w
                    queue.append(v)
                else:
                    if v not in count:
                        count[v] = sum(1 for u in self.succ[v] if u in sub)
                    count[v] -= 1
                    if count[v] == 0:
                        attr.add(v)
                        queue.append(v)
        return attr

    def solve(self, sub: set):
        won = {0: set(), 1: set()}
        sub = set(sub)
        while sub:
            p = min(self.prio[v] for v in sub)
            i = p % 2
            top = {v for v in sub if self.prio[v] == p}
            attr = self.attractor(i, top, sub)
            for v in top:
                if self.owner[v] == i:
                    self.strategy[v] = next(u for u in self.succ[v] if u in sub)
            w_sub = self.solve(sub - attr)
            if not w_sub[1 - i]:
                won[i] |= sub
                break
            b = self.attractor(1 - i, w_sub[1 - i], sub)
            won[1 - i] |= b
            sub -= b
        return won


def solve_parity(game: ParityGame) -> ParitySolution:
    """Winning regions and positional strategies for both players."""
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        s = _Solver(game)
        won = s.solve(set(range(game.n + 2)))
    finally:
        sys.setrecursionlimit(limit)
    winner = [0 if v in won[0] else 1 for v in range(game.n)]
    strategy = {}
    for v in range(game.n):
        if game.moves[v] and s.owner[v] == winner[v]:
            strategy[v] = s.strategy[v]
    return ParitySolution(winner, strategy)


# ---------------------------------------------------------------- brute force


def _sccs(nodes, succ):
    index, low, onstack, stack, out = {}, {}, set(), [], []
    counter = [0]

    def visit(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        onstack.add(v)
        for w in succ[v]:
            if w not in nodes:
                continue
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in onstack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                onstack.discard(w)
                comp.add(w)
                if w == v:
                    break
            out.append(comp)

    for v in nodes:
        if v not in index:
            visit(v)
    return out


def _pathfinder_wins(game: ParityGame, succ: list) -> set:
    """Positions from which Pathfinder wins when it controls every choice in ``succ``."""
    n = game.n
    good = {v for v in range(n) if game.owner[v] == VERIFIER and not succ[v]}
    for p in sorted(set(game.priority)):
        if p % 2 == 0:
            continue
        nodes = {v for v in range(n) if game.priority[v] >= p}
        for comp in _sccs(nodes, succ):
            nontrivial = len(comp) > 1 or any(v in succ[v] for v in comp)
            if nontrivial and any(game.priority[v] == p for v in comp):
                good |= comp
    pred = [[] for _ in range(n)]
    for v in range(n):
        for w in succ[v]:
            pred[w].append(v)
    reach, todo = set(good), list(good)
    while todo:
        w = todo.pop()
        for v in pred[w]:
            if v not in reach:
                reach.add(v)
                todo.append(v)
    return reach


def brute_force_winner(game: ParityGame) -> list:
    """Verifier wins a position iff some positional Verifier strategy wins it.

    Exponential in the number of Verifier positions; meant for tiny games.
    """
    n = game.n
    mine = [v for v in range(n) if game.owner[v] == VERIFIER and game.moves[v]]
    won = set()
    for choice in itertools.product(*[sorted(set(game.moves[v])) for v in mine]):
        succ = [list(set(m)) for m in game.moves]
        for v, w in zip(mine, choice):
            succ[v] = [w]
        won |= set(range(n)) - _pathfinder_wins(game, succ)
    return [0 if v in won else 1 for v in range(n)]


def strategy_is_closed(game: ParityGame, sol: ParitySolution) -> bool:
    """Following the winner's strategy never leaves its region, and the loser cannot leave either."""
    for v in range(game.n):
        w = sol.winner[v]
        if game.owner[v] == w:
            if game.moves[v] and sol.winner[sol.strategy[v]] != w:
                return False
        elif any(sol.winner[u] != w for u in game.moves[v]):
            return False
    return True


def strategy_wins(game: ParityGame, sol: ParitySolution, player: int) -> bool:
    """Fixing ``player``'s strategy, the opponent cannot win from that player's region."""
    region = sol.region(player)
    succ = []
    for v in range(game.n):
        if game.owner[v] == player and game.moves[v] and v in region:
            succ.append([sol.strategy[v]])
        else:
            succ.append(list(set(game.moves[v])))
    if player == VERIFIER:
        return not (region & _pathfinder_wins(game, succ))
    mirrored = ParityGame([1 - o for o in game.owner], [p + 1 for p in game.priority], game.moves)
    return not (region & _pathfinder_wins(mirrored, succ))
