"""Exact solver: oracle agreement, invariances, budgets, optimal-play harness."""

import itertools
import random

import pytest

from colorgame.engine import (
    Mode,
    Move,
    PASS,
    Player,
    Status,
    Variant,
    apply_move,
    initial_state,
    legal_moves,
)
from colorgame.graphs import GraphError
from colorgame.solver import (
    BudgetExceeded,
    GreedyMonotonicityError,
    Solver,
    format_result,
    game_number,
    minimal_winning_k,
    play_vs_optimal,
    resolve_prefix,
    solve,
    winning_first_moves,
)
from colorgame.strategies import LowestLegalStrategy

from conftest import all_graphs, graph_from_edges, plain_minimax


def freev(k, starter=Player.ALICE, passer=None, mode=Mode.FREE):
    return Variant(starter=starter, mode=mode, k=k, passer=passer)


def test_single_vertex_alice_wins():
    g = graph_from_edges(1, [])
    res = solve(g, freev(1))
    assert res.winner is Player.ALICE
    assert res.winning_root_moves == (Move(0, 1),)


def test_triangle_with_two_colors_is_bob_win():
    g = graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])
    res = solve(g, freev(2))
    assert res.winner is Player.BOB
    assert res.winning_root_moves == ()


def test_k_at_least_n_is_always_alice_win(small_connected_graphs):
    for g in small_connected_graphs:
        assert solve(g, freev(g.n)).winner is Player.ALICE


def test_p2_every_first_move_wins():
    g = graph_from_edges(2, [(0, 1)])
    assert winning_first_moves(g, freev(2)) == {Move(0, 1), Move(0, 2),
                                                Move(1, 1), Move(1, 2)}


def test_prefix_must_be_legal():
    g = graph_from_edges(2, [(0, 1)])
    with pytest.raises(Exception, match="already colored"):
        solve(g, freev(2), prefix=[Move(0, 1), Move(0, 2)])


def test_greedy_prefix_color_resolution():
    g = graph_from_edges(2, [(0, 1)])
    gv = freev(2, mode=Mode.GREEDY)
    assert resolve_prefix(g, gv, [Move(0, 0), Move(1, 0)]) == [Move(0, 1), Move(1, 2)]


def test_connected_solver_rejects_disconnected_graph():
    g = graph_from_edges(3, [(0, 1)])
    with pytest.raises(GraphError, match="connected"):
        solve(g, freev(2, mode=Mode.CONNECTED))


def test_budget_exceeded():
    g = graph_from_edges(6, [e for e in itertools.combinations(range(6), 2)])
    with pytest.raises(BudgetExceeded):
        solve(g, freev(4), budget=3)


def test_determinism():
    g = graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    a = solve(g, freev(2, starter=Player.BOB, passer=Player.ALICE))
    b = solve(g, freev(2, starter=Player.BOB, passer=Player.ALICE))
    assert a == b


VARIANT_GRID = [
    (starter, passer, mode)
    for starter in (Player.ALICE, Player.BOB)
    for passer in (None, Player.ALICE, Player.BOB)
    for mode in (Mode.FREE, Mode.GREEDY, Mode.CONNECTED)
]


def test_solver_matches_plain_minimax_on_n4(small_connected_graphs):
    # The n<=5 sweep is the acceptance suite's; a fast n<=4 slice lives here.
    for g in small_connected_graphs:
        if g.n > 4:
            continue
        for k in (1, 2, 3):
            for starter, passer, mode in VARIANT_GRID:
                variant = Variant(starter=starter, mode=mode, k=k, passer=passer)
                assert solve(g, variant).winner == plain_minimax(g, variant), \
                    (g.adj, variant)


def test_color_permutation_of_prefix_preserves_winner():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randrange(2, 6)
        edges = sorted(set((u, v) for u, v in itertools.combinations(range(n), 2)
                           if rng.random() < 0.5) | {(i, i + 1) for i in range(n - 1)})
        g = graph_from_edges(n, edges)
        k = rng.randrange(2, 4)
        mode = rng.choice([Mode.FREE, Mode.CONNECTED])
        variant = Variant(starter=rng.choice([Player.ALICE, Player.BOB]),
                          mode=mode, k=k)
        state = initial_state(g, variant)
        prefix = []
        for _ in range(rng.randrange(1, 3)):
            moves = [m for m in legal_moves(g, state, variant) if not m.is_pass]
            if not moves:
                break
            m = rng.choice(moves)
            prefix.append(m)
            state = apply_move(g, state, variant, m)
        perm = list(range(1, k + 1))
        rng.shuffle(perm)
        mapped = [Move(m.vertex, perm[m.color - 1]) for m in prefix]
        base = solve(g, variant, prefix)
        permuted = solve(g, variant, mapped)
        assert base.winner == permuted.winner
        want = {Move(m.vertex, perm[m.color - 1]) for m in base.winning_root_moves}
        assert set(permuted.winning_root_moves) == want


def test_pass_power_is_monotone(small_connected_graphs):
    # Winning without pass rights implies winning with them.
    for g in small_connected_graphs:
        if g.n > 4:
            continue
        for k in (1, 2):
            for mode in Mode:
                for starter in (Player.ALICE, Player.BOB):
                    base = solve(g, Variant(starter=starter, mode=mode, k=k)).winner
                    boosted = solve(g, Variant(starter=starter, mode=mode, k=k,
                                               passer=base)).winner
                    assert boosted == base, (g.adj, mode, starter, k)


def test_greedy_upward_closure_small(small_connected_graphs):
    for g in small_connected_graphs:
        for starter in (Player.ALICE, Player.BOB):
            numbers = game_number(g, starter, Mode.GREEDY, range(1, g.n + 2))
            wins = [k for k, w in numbers.items() if w is Player.ALICE]
            if wins:
                lo = min(wins)
                assert all(numbers[k] is Player.ALICE
                           for k in numbers if k >= lo), (g.adj, numbers)


def test_game_number_full_map_and_minimum():
    p4 = graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])
    numbers = game_number(p4, Player.ALICE, Mode.FREE, range(1, 5))
    assert set(numbers) == {1, 2, 3, 4}
    assert numbers[4] is Player.ALICE  # forests are Alice wins at four colors
    least = minimal_winning_k(numbers)
    assert least is not None and least <= 4
    assert minimal_winning_k({1: Player.BOB}) is None


def test_connected_bipartite_two_colors_c4():
    c4 = graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    variant = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=2)
    assert solve(c4, variant).winner is Player.ALICE


def test_play_vs_optimal_reports_trace_and_result():
    g = graph_from_edges(1, [])
    st, trace = play_vs_optimal(LowestLegalStrategy(), Player.ALICE, g, freev(1))
    assert st is Status.ALICE_WIN
    assert trace == [(Player.ALICE, Move(0, 1))]


def test_play_vs_optimal_flags_illegal_strategy_move():
    class Broken(LowestLegalStrategy):
        name = "broken"

        def pick(self, g, state, variant):
            return Move(0, 99)

    g = graph_from_edges(2, [(0, 1)])
    with pytest.raises(Exception, match="broken"):
        play_vs_optimal(Broken(), Player.ALICE, g, freev(2))


def test_format_result():
    g = graph_from_edges(2, [(0, 1)])
    res = solve(g, freev(2))
    text = format_result(res, g)
    assert text.startswith("winner=Alice k=2 first_moves=0:1,0:2,1:1,1:2 nodes=")


def test_memo_reuse_is_consistent():
    g = graph_from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])
    variant = freev(3, starter=Player.BOB)
    s = Solver(g, variant)
    first = s.solve()
    again = s.solve()
    assert first.winner == again.winner
    assert first.winning_root_moves == again.winning_root_moves
