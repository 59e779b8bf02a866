"""Shared test helpers: tiny-graph corpora and independent game oracles."""

from __future__ import annotations

import itertools
import random

import pytest

from colorgame.engine import (
    Player,
    Status,
    apply_move,
    initial_state,
    legal_moves,
    status,
)
from colorgame.graphs import Graph, is_connected


def graph_from_edges(n: int, edges) -> Graph:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n=n, adj=tuple(tuple(sorted(a)) for a in adj), labels={})


def canonical_edge_form(n: int, edges) -> tuple:
    """Minimum edge list over all vertex relabelings (fine for n <= 6)."""
    return min(
        tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges))
        for p in itertools.permutations(range(n)))


def all_graphs(n: int, connected_only: bool = False, up_to_iso: bool = True):
    """Every graph on exactly n vertices (n <= 6)."""
    pairs = list(itertools.combinations(range(n), 2))
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if bits >> i & 1]
        g = graph_from_edges(n, edges)
        if connected_only and not is_connected(g):
            continue
        if up_to_iso:
            canon = canonical_edge_form(n, edges)
            if canon in seen:
                continue
            seen.add(canon)
        out.append(g)
    return out


def plain_minimax(g: Graph, variant, state=None) -> Player:
    """Exhaustive minimax with no memoization and no canonicalization."""
    if state is None:
        state = initial_state(g, variant)
    st = status(g, state, variant)
    if st is Status.ALICE_WIN:
        return Player.ALICE
    if st is Status.BOB_WIN:
        return Player.BOB
    mover = state.to_move
    for move in legal_moves(g, state, variant):
        if plain_minimax(g, variant, apply_move(g, state, variant, move)) is mover:
            return mover
    return mover.opponent


def random_tree(n: int, rng: random.Random) -> Graph:
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return graph_from_edges(n, edges)


def random_forest(n: int, rng: random.Random) -> Graph:
    edges = []
    for i in range(1, n):
        if rng.random() < 0.75:
            edges.append((rng.randrange(i), i))
    return graph_from_edges(n, edges)


def random_connected_bipartite(n: int, rng: random.Random) -> Graph:
    side = [rng.randrange(2) for _ in range(n)]
    if all(s == side[0] for s in side) and n > 1:
        side[0] = 1 - side[0]
    cross = [(u, v) for u, v in itertools.combinations(range(n), 2)
             if side[u] != side[v]]
    edges = set()
    # Random spanning tree over the bipartition, then extra cross edges.
    joined = {0}
    while len(joined) < n:
        options = [(u, v) for u, v in cross
                   if (u in joined) != (v in joined)]
        e = rng.choice(options)
        edges.add(e)
        joined.update(e)
    for e in cross:
        if rng.random() < 0.3:
            edges.add(e)
    return graph_from_edges(n, sorted(edges))


@pytest.fixture(scope="session")
def small_connected_graphs():
    out = []
    for n in range(1, 6):
        out.extend(all_graphs(n, connected_only=True))
    return out
