"""Exact game solving by memoized minimax.

The game is finite and draw-free, so plain minimax on (coloring, player to
move) is exact. Two things keep the search tractable at desk scale:

* Transposition memoization. The winner is a function of the coloring and
  the player to move (the variant is fixed per solve), so results are cached.
* Color canonicalization. In free and connected mode the rules never mention
  a specific color, so colors are relabeled by order of first appearance over
  ascending vertex id before hashing. In greedy mode the forced least-color
  rule is *not* symmetric under color relabeling, so greedy states are keyed
  on their raw colors.

There is no alpha-beta window: outcomes are boolean and a node stops at its
first winning child. Children are ordered to try high-degree vertices first,
which surfaces blocked vertices sooner.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .engine import (
    PASS,
    GameState,
    Mode,
    Move,
    Player,
    Status,
    Variant,
    apply_move,
    greedy_color,
    initial_state,
    legal_moves,
    status,
)
from .graphs import Graph, GraphError, is_connected


class BudgetExceeded(Exception):
    """The node budget ran out before the search finished."""

    def __init__(self, budget: int):
        super().__init__(f"search exceeded the node budget of {budget}")
        self.budget = budget


@dataclass(frozen=True)
class SolveResult:
    winner: Player
    winning_root_moves: tuple[Move, ...]
    nodes_explored: int
    k: int


def resolve_prefix(g: Graph, variant: Variant, prefix: Sequence[Move]) -> list[Move]:
    """Fill in forced colors for greedy-mode prefix moves given as Move(v, 0)."""
    out: list[Move] = []
    state = initial_state(g, variant)
    for move in prefix:
        if variant.mode is Mode.GREEDY and not move.is_pass and move.color == 0:
            move = Move(move.vertex, greedy_color(g, state, move.vertex))
        out.append(move)
        state = apply_move(g, state, variant, move)
    return out


class Solver:
    """Reusable exact solver; the memo table persists across calls."""

    def __init__(self, g: Graph, variant: Variant, budget: int | None = None):
        if variant.mode is Mode.CONNECTED and not is_connected(g):
            raise GraphError("connected-mode games require a connected graph")
        self.g = g
        self.variant = variant
        self.budget = budget
        self.nodes = 0
        self._memo: dict[tuple, Player] = {}
        # High-degree-first move ordering, precomputed once.
        self._vertex_rank = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
        self._rank_of = {v: i for i, v in enumerate(self._vertex_rank)}

    def _key(self, state: GameState) -> tuple:
        colors = state.colors
        if self.variant.mode is Mode.GREEDY:
            return (colors, state.to_move)
        relabel: dict[int, int] = {}
        canon = []
        for c in colors:
            if c == 0:
                canon.append(0)
            else:
                if c not in relabel:
                    relabel[c] = len(relabel) + 1
                canon.append(relabel[c])
        return (tuple(canon), state.to_move)

    def _ordered_moves(self, state: GameState) -> list[Move]:
        moves = legal_moves(self.g, state, self.variant)
        rank = self._rank_of
        moves.sort(key=lambda m: (0, 0, 1) if m.is_pass else (-1, rank[m.vertex], m.color))
        return moves

    def winner(self, state: GameState) -> Player:
        st = status(self.g, state, self.variant)
        if st is Status.ALICE_WIN:
            return Player.ALICE
        if st is Status.BOB_WIN:
            return Player.BOB
        key = self._key(state)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(self.budget)
        mover = state.to_move
        result = mover.opponent
        for move in self._ordered_moves(state):
            if self.winner(apply_move(self.g, state, self.variant, move)) is mover:
                result = mover
                break
        self._memo[key] = result
        return result

    def solve(self, prefix: Sequence[Move] = ()) -> SolveResult:
        prefix = resolve_prefix(self.g, self.variant, prefix)
        state = initial_state(self.g, self.variant)
        for move in prefix:
            state = apply_move(self.g, state, self.variant, move)
        st = status(self.g, state, self.variant)
        if st is not Status.ONGOING:
            w = Player.ALICE if st is Status.ALICE_WIN else Player.BOB
            return SolveResult(w, (), self.nodes, self.variant.k)
        mover = state.to_move
        winning = []
        for move in sorted(legal_moves(self.g, state, self.variant)):
            if self.winner(apply_move(self.g, state, self.variant, move)) is mover:
                winning.append(move)
        w = mover if winning else mover.opponent
        return SolveResult(w, tuple(winning), self.nodes, self.variant.k)

    def best_move(self, state: GameState) -> Move:
        """A deterministic optimal move: lowest winning move, else lowest legal."""
        moves = sorted(legal_moves(self.g, state, self.variant))
        mover = state.to_move
        for move in moves:
            if self.winner(apply_move(self.g, state, self.variant, move)) is mover:
                return move
        return moves[0]


def solve(g: Graph, variant: Variant, prefix: Sequence[Move] = (),
          budget: int | None = None) -> SolveResult:
    """Exact winner under optimal play after the forced prefix, plus the
    mover's winning moves at that point (empty when the mover loses)."""
    return Solver(g, variant, budget).solve(prefix)


def winning_first_moves(g: Graph, variant: Variant, prefix: Sequence[Move] = (),
                        budget: int | None = None) -> set[Move]:
    """Exactly the moves after which the player to move still wins."""
    return set(solve(g, variant, prefix, budget).winning_root_moves)


class GreedyMonotonicityError(AssertionError):
    """Greedy-mode winners failed upward closure in k; indicates an engine bug."""


def game_number(g: Graph, starter: Player, mode: Mode, k_range: Iterable[int],
                passer: Player | None = None,
                budget: int | None = None) -> dict[int, Player]:
    """Winner for every k in the range, each solved independently.

    Free and connected games are not known to be monotone in k, so no value
    is inferred from another. Greedy winners must be upward closed for Alice
    (a winning greedy strategy never needs the extra color); that closure is
    asserted and a violation raises, since it would mean the engine is wrong.
    """
    ks = sorted(set(k_range))
    out: dict[int, Player] = {}
    for k in ks:
        variant = Variant(starter=starter, mode=mode, k=k, passer=passer)
        out[k] = solve(g, variant, budget=budget).winner
    if mode is Mode.GREEDY:
        for lo, hi in zip(ks, ks[1:]):
            if hi == lo + 1 and out[lo] is Player.ALICE and out[hi] is not Player.ALICE:
                raise GreedyMonotonicityError(
                    f"Alice wins greedy with k={lo} but not k={hi}")
    return out


def minimal_winning_k(numbers: dict[int, Player]) -> int | None:
    """Least k Alice wins in a game_number map, or None."""
    wins = [k for k, w in numbers.items() if w is Player.ALICE]
    return min(wins) if wins else None


def play_vs_optimal(strategy, side: Player, g: Graph, variant: Variant,
                    prefix: Sequence[Move] = (), budget: int | None = None,
                    ) -> tuple[Status, list[tuple[Player, Move]]]:
    """Play `strategy` for `side` against exact optimal replies.

    Returns the final status and the full move trace (prefix included).
    The strategy must produce legal moves; an illegal one raises
    StrategyFault naming the strategy and the move.
    """
    from .engine import check_move  # local import keeps module load light

    solver = Solver(g, variant, budget)
    prefix = resolve_prefix(g, variant, prefix)
    state = initial_state(g, variant)
    trace: list[tuple[Player, Move]] = []
    for move in prefix:
        trace.append((state.to_move, move))
        state = apply_move(g, state, variant, move)
    strategy.reset()
    while status(g, state, variant) is Status.ONGOING:
        if state.to_move is side:
            move = strategy.choose(g, state, variant, tuple(trace))
            try:
                check_move(g, state, variant, move)
            except Exception as exc:
                raise StrategyFault(getattr(strategy, "name", repr(strategy)), move, str(exc)) from exc
        else:
            move = solver.best_move(state)
        trace.append((state.to_move, move))
        state = apply_move(g, state, variant, move)
    return status(g, state, variant), trace


class StrategyFault(Exception):
    """A strategy emitted an illegal move."""

    def __init__(self, name: str, move: Move, reason: str):
        super().__init__(f"strategy {name!r} emitted illegal move {move}: {reason}")
        self.strategy_name = name
        self.move = move


def format_result(result: SolveResult, g: Graph | None = None) -> str:
    """CLI rendering: winner=..., k=..., first_moves=..., nodes=..."""
    from .engine import format_move

    moves = ",".join(format_move(m, g) for m in result.winning_root_moves)
    return (f"winner={result.winner} k={result.k} "
            f"first_moves={moves} nodes={result.nodes_explored}")
