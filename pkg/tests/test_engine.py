"""Game rules: legal moves, application, termination, and rule properties."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from colorgame.engine import (
    PASS,
    GameState,
    Mode,
    Move,
    Player,
    RuleViolation,
    Status,
    Variant,
    apply_move,
    greedy_color,
    initial_state,
    legal_moves,
    parse_move_token,
    replay,
    sees,
    status,
)
from colorgame.graphs import colored_set_connected

from conftest import all_graphs, graph_from_edges


def triangle():
    return graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])


def path(n):
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def freev(k, starter=Player.ALICE, passer=None):
    return Variant(starter=starter, mode=Mode.FREE, k=k, passer=passer)


def test_sees():
    g = graph_from_edges(4, [(0, 1), (0, 2), (0, 3)])
    state = GameState(colors=(0, 1, 1, 3), to_move=Player.ALICE)
    assert sees(g, state, 0) == {1, 3}
    assert sees(g, state, 1) == set()


def test_greedy_color_is_least_absent():
    g = graph_from_edges(4, [(0, 1), (0, 2), (0, 3)])
    state = GameState(colors=(0, 1, 2, 4), to_move=Player.ALICE)
    assert greedy_color(g, state, 0) == 3
    empty = initial_state(g, freev(3))
    assert greedy_color(g, empty, 0) == 1
    full_seen = GameState(colors=(0, 1, 2, 3), to_move=Player.ALICE)
    assert greedy_color(g, full_seen, 0) == 4  # may exceed k; caller decides
    with pytest.raises(RuleViolation):
        greedy_color(g, state, 1)


def test_legal_moves_free_triangle():
    g = triangle()
    moves = legal_moves(g, initial_state(g, freev(3)), freev(3))
    assert len(moves) == 9
    assert moves == sorted(moves)


def test_legal_moves_greedy_forces_least_color():
    g = triangle()
    variant = Variant(starter=Player.ALICE, mode=Mode.GREEDY, k=3)
    moves = legal_moves(g, initial_state(g, variant), variant)
    assert moves == [Move(0, 1), Move(1, 1), Move(2, 1)]


def test_legal_moves_connected_restricts_to_frontier():
    g = path(3)
    variant = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=2)
    state = GameState(colors=(1, 0, 0), to_move=Player.BOB)
    moves = legal_moves(g, state, variant)
    assert {m.vertex for m in moves} == {1}


def test_connected_first_move_unrestricted():
    g = path(3)
    variant = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=2)
    moves = legal_moves(g, initial_state(g, variant), variant)
    assert {m.vertex for m in moves} == {0, 1, 2}


def test_pass_move_only_for_passer():
    g = path(2)
    with_pass = freev(2, passer=Player.ALICE)
    state = initial_state(g, with_pass)
    assert PASS in legal_moves(g, state, with_pass)
    bob_turn = GameState(colors=(0, 0), to_move=Player.BOB)
    assert PASS not in legal_moves(g, bob_turn, with_pass)
    without = freev(2)
    assert PASS not in legal_moves(g, state, without)


def test_apply_move_flips_turn_and_is_pure():
    g = path(2)
    variant = freev(2)
    state = initial_state(g, variant)
    nxt = apply_move(g, state, variant, Move(0, 2))
    assert state.colors == (0, 0)
    assert nxt.colors == (2, 0)
    assert nxt.to_move is Player.BOB


def test_apply_pass_keeps_coloring():
    g = path(2)
    variant = freev(2, passer=Player.ALICE)
    state = initial_state(g, variant)
    nxt = apply_move(g, state, variant, PASS)
    assert nxt.colors == state.colors
    assert nxt.to_move is Player.BOB


def test_apply_move_rejects_illegal_with_reason():
    g = triangle()
    variant = freev(2)
    state = GameState(colors=(1, 0, 0), to_move=Player.BOB)
    with pytest.raises(RuleViolation, match="already colored"):
        apply_move(g, state, variant, Move(0, 2))
    with pytest.raises(RuleViolation, match="on a neighbor"):
        apply_move(g, state, variant, Move(1, 1))
    with pytest.raises(RuleViolation, match="outside 1"):
        apply_move(g, state, variant, Move(1, 3))
    with pytest.raises(RuleViolation, match="pass rights"):
        apply_move(g, state, variant, PASS)
    gv = Variant(starter=Player.ALICE, mode=Mode.GREEDY, k=3)
    with pytest.raises(RuleViolation, match="greedy rule forces"):
        apply_move(g, state, gv, Move(1, 3))
    cv = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=3)
    far = GameState(colors=(1, 0, 0, 0), to_move=Player.BOB)
    with pytest.raises(RuleViolation, match="not adjacent to the colored set"):
        apply_move(path(4), far, cv, Move(3, 1))


def test_status_all_colored_is_alice_win():
    g = triangle()
    state = GameState(colors=(1, 2, 3), to_move=Player.BOB)
    assert status(g, state, freev(3)) is Status.ALICE_WIN


def test_status_blocked_vertex_is_bob_win():
    g = triangle()
    state = GameState(colors=(1, 2, 0), to_move=Player.ALICE)
    assert status(g, state, freev(2)) is Status.BOB_WIN
    gv = Variant(starter=Player.ALICE, mode=Mode.GREEDY, k=2)
    assert status(g, state, gv) is Status.BOB_WIN


def test_status_connected_stalemate_is_bob_win():
    # On a connected board a starved frontier always coincides with a blocked
    # vertex, so the no-move rule only ever fires on a disconnected one
    # (which the solver refuses but the rules layer still has to judge).
    g = graph_from_edges(4, [(0, 1), (2, 3)])
    cv = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=2)
    state = GameState(colors=(1, 2, 0, 0), to_move=Player.BOB)
    assert status(g, state, cv) is Status.BOB_WIN
    # A pass right postpones the loss.
    cvp = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=2, passer=Player.BOB)
    assert status(g, state, cvp) is Status.ONGOING


def test_replay_validates_and_rejects_after_game_over():
    g = path(2)
    variant = freev(2)
    state = replay(g, variant, [Move(0, 1), Move(1, 2)])
    assert status(g, state, variant) is Status.ALICE_WIN
    with pytest.raises(RuleViolation, match="game already over"):
        replay(g, variant, [Move(0, 1), Move(1, 2), PASS])


def test_parse_move_token():
    g = graph_from_edges(2, [(0, 1)])
    g = type(g)(n=2, adj=g.adj, labels={"a": (0,), "b": (1,)})
    assert parse_move_token("a:2", g) == Move(0, 2)
    assert parse_move_token("pass", g) == PASS
    assert parse_move_token("1:1", g) == Move(1, 1)
    gv = Variant(starter=Player.ALICE, mode=Mode.GREEDY, k=2)
    assert parse_move_token("b", g, gv) == Move(1, 0)
    with pytest.raises(RuleViolation):
        parse_move_token("a", g)


# --- rule properties over random playouts -----------------------------------


VARIANTS = [
    Variant(starter=s, mode=m, k=k, passer=p)
    for s in (Player.ALICE, Player.BOB)
    for m in Mode
    for p in (None, Player.ALICE, Player.BOB)
    for k in (1, 2, 3)
]


def random_playout(g, variant, seed):
    rng = random.Random(seed)
    state = initial_state(g, variant)
    trace = []
    while status(g, state, variant) is Status.ONGOING:
        moves = legal_moves(g, state, variant)
        move = rng.choice(moves)
        trace.append((state, move))
        state = apply_move(g, state, variant, move)
    return trace, state


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_playout_properties(seed):
    rng = random.Random(seed)
    n = rng.randrange(2, 6)
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5]
    # connected mode needs a connected board: chain the vertices
    edges = sorted(set(edges) | {(i, i + 1) for i in range(n - 1)})
    g = graph_from_edges(n, edges)
    variant = rng.choice(VARIANTS)
    trace, final = random_playout(g, variant, rng.random())

    assert len(trace) <= 2 * g.n + 1  # game length bound
    colored = 0
    for state, move in trace:
        if variant.mode is Mode.FREE:
            expect = sum(
                max(0, variant.k - len(sees(g, state, v)))
                for v in range(g.n) if not state.colors[v])
            if state.to_move is variant.passer:
                expect += 1
            assert len(legal_moves(g, state, variant)) == expect
        if not move.is_pass:
            colored += 1
            assert state.colors[move.vertex] == 0
            if variant.mode is Mode.GREEDY:
                assert move.color == greedy_color(g, state, move.vertex)
            else:
                assert move.color not in sees(g, state, move.vertex)
        nxt = apply_move(g, state, variant, move)
        if variant.mode is Mode.CONNECTED:
            assert colored_set_connected(g, nxt.as_coloring())
        # colored part stays proper throughout
        assert all(nxt.colors[u] != nxt.colors[v] or not nxt.colors[u]
                   for u, v in g.edges())
    if status(g, final, variant) is Status.ALICE_WIN:
        assert all(final.colors)


def exhaustive_no_alice_win(g, variant, state):
    """Search every continuation, ignoring the early Bob-win call, and check
    Alice can never finish the coloring."""
    if all(state.colors):
        return False
    k = variant.k
    first = not any(state.colors)
    found_move = False
    for v in range(g.n):
        if state.colors[v]:
            continue
        if variant.mode is Mode.CONNECTED and not first \
                and not any(state.colors[u] for u in g.adj[v]):
            continue
        seen = sees(g, state, v)
        if variant.mode is Mode.GREEDY:
            c = greedy_color(g, state, v)
            options = [c] if c <= k else []
        else:
            options = [c for c in range(1, k + 1) if c not in seen]
        for c in options:
            found_move = True
            colors = list(state.colors)
            colors[v] = c
            nxt = GameState(colors=tuple(colors), to_move=state.to_move.opponent)
            if not exhaustive_no_alice_win(g, variant, nxt):
                return False
    if not found_move:
        return True  # stuck with vertices left: never an Alice win
    return True


def test_early_block_call_is_sound():
    # Wherever status says Bob already won, no continuation reaches AliceWin.
    rng = random.Random(7)
    checked = 0
    for n in (3, 4, 5, 6):
        for _ in range(200):
            edges = [e for e in itertools.combinations(range(n), 2)
                     if rng.random() < 0.6]
            g = graph_from_edges(n, sorted(set(edges) | {(i, i + 1) for i in range(n - 1)}))
            variant = rng.choice(VARIANTS)
            state = initial_state(g, variant)
            while True:
                stt = status(g, state, variant)
                if stt is Status.BOB_WIN:
                    assert exhaustive_no_alice_win(g, variant, state)
                    checked += 1
                    break
                if stt is not Status.ONGOING:
                    break
                state = apply_move(g, state, variant,
                                   rng.choice(legal_moves(g, state, variant)))
    assert checked > 50
