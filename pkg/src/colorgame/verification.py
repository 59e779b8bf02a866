"""Named desk-scale verification checks behind the `verify` CLI subcommand.

Each check returns (ok, detail). They re-derive the claims behind the
scripted strategies: forced gadget replies, construction size constants,
certificate validity, and blocking playouts on the demo instances.
"""

from __future__ import annotations

from .engine import Mode, Move, Player, Status, Variant, apply_move, initial_state, legal_moves
from .graphs import GraphBuilder
from .reductions import (
    DEMO_CNF,
    DEMO_DNF,
    build_connected_instance,
    build_gadget,
    build_gb_instance,
    build_greedy_instance,
    certify,
    conjunction_clique,
    witness_clique,
)
from .solver import play_vs_optimal, solve
from .strategies import LowestLegalStrategy, arena, connected_strategy, gadget_strategy, reduction_strategy


def verify_f1(budget: int | None = None) -> tuple[bool, str]:
    """k=2 gadget: the winning reply to the opener is pairing y, exactly."""
    g = build_gadget("f1", 2)
    variant = Variant(starter=Player.BOB, mode=Mode.FREE, k=4)
    prefix = [Move(g.vertex("s"), 1)]
    result = solve(g, variant, prefix, budget=budget)
    replies = {(m.vertex, m.color) for m in result.winning_root_moves}
    want = {(g.vertex("y"), 1)}
    if replies != want:
        return False, f"winning replies {replies} != {want}"
    st, _ = play_vs_optimal(gadget_strategy("alice-f1", g), Player.ALICE,
                            g, variant, prefix, budget=budget)
    if st is not Status.ALICE_WIN:
        return False, f"alice-f1 script scored {st} from the forced opening"
    state = apply_move(g, initial_state(g, variant), variant, prefix[0])
    for m in legal_moves(g, state, variant):
        if (m.vertex, m.color) in want:
            continue
        st, _ = play_vs_optimal(gadget_strategy("bob-f1", g), Player.BOB,
                                g, variant, prefix + [m], budget=budget)
        if st is not Status.BOB_WIN:
            return False, f"bob-f1 script failed to punish reply {m}"
    return True, "forced reply {(y,1)} confirmed; both scripts optimal at k=2"


def verify_f3(budget: int | None = None) -> tuple[bool, str]:
    """Greedy gadget for k=1..4: the only winning reply is y."""
    for k in range(1, 5):
        g = build_gadget("f3", k)
        variant = Variant(starter=Player.BOB, mode=Mode.GREEDY, k=k + 1)
        prefix = [Move(g.vertex("s"), 1)]
        result = solve(g, variant, prefix, budget=budget)
        replies = {m.vertex for m in result.winning_root_moves}
        if replies != {g.vertex("y")}:
            return False, f"k={k}: winning replies {replies} != y only"
        state = apply_move(g, initial_state(g, variant), variant, prefix[0])
        for m in legal_moves(g, state, variant):
            if m.vertex == g.vertex("y"):
                continue
            st, _ = play_vs_optimal(gadget_strategy("bob-f3", g), Player.BOB,
                                    g, variant, prefix + [m], budget=budget)
            if st is not Status.BOB_WIN:
                return False, f"k={k}: bob-f3 failed to punish reply {m}"
    return True, "only y wins the reply for k=1..4; bob-f3 punishes the rest"


def _check_gb_sizes(inst) -> str | None:
    f = inst.source_formula
    g = inst.graph
    chi = inst.chi
    if len(g.group("K")) != chi - 2:
        return f"|K| = {len(g.group('K'))}, wanted {chi - 2}"
    if len(g.group("Q")) != chi + 1:
        return f"|Q| = {len(g.group('Q'))}, wanted {chi + 1}"
    for j, clause in enumerate(f.clauses, start=1):
        want_pad = chi - 2 * (len(clause) + 1)
        if len(g.group(f"L{j}")) != want_pad:
            return f"|L{j}| = {len(g.group(f'L{j}'))}, wanted {want_pad}"
        clique = conjunction_clique(inst, j)
        if len(clique) != chi:
            return f"clause clique {j} has {len(clique)} vertices, wanted {chi}"
        for v in clique:
            if g.degree(v) != chi:
                return f"clause-clique vertex {v} has degree {g.degree(v)}, wanted {chi}"
    return None


def verify_gb_playout(budget: int | None = None) -> tuple[bool, str]:
    """Demo DNF instance: size constants, certificate, and a blocking playout."""
    inst = build_gb_instance(DEMO_DNF)
    if inst.chi != 44 or inst.graph.n != 271:
        return False, f"chi={inst.chi} n={inst.graph.n}, wanted 44/271"
    bad = _check_gb_sizes(inst)
    if bad:
        return False, bad
    certify(inst)
    variant = Variant(starter=Player.BOB, mode=Mode.FREE, k=inst.chi)
    bob = reduction_strategy("bob-gb", inst)
    st, trace = arena(LowestLegalStrategy(), bob, inst.graph, variant)
    if st is not Status.BOB_WIN:
        return False, f"blocking playout ended {st}"
    return True, f"sizes and certificate hold; playout blocked after {len(trace)} turns"


def verify_greedy_playout(budget: int | None = None) -> tuple[bool, str]:
    """Demo CNF instance: size constants, certificate, and a blocking playout."""
    inst = build_greedy_instance(DEMO_CNF)
    if inst.chi != 41 or len(inst.graph.group("K")) != 40:
        return False, f"chi={inst.chi} |K|={len(inst.graph.group('K'))}, wanted 41/40"
    for j in range(1, DEMO_CNF.n_clauses + 1):
        if len(inst.graph.group(f"L{j}")) != 35:
            return False, f"|L{j}| != 35"
    for xb in inst.graph.group("xbar"):
        if inst.graph.degree(xb) != 1:
            return False, f"companion vertex {xb} has degree {inst.graph.degree(xb)}"
    certify(inst)
    variant = Variant(starter=Player.BOB, mode=Mode.GREEDY, k=inst.chi)
    bob = reduction_strategy("bob-greedy", inst)
    st, trace = arena(LowestLegalStrategy(), bob, inst.graph, variant)
    if st is not Status.BOB_WIN:
        return False, f"blocking playout ended {st}"
    return True, f"sizes and certificate hold; playout blocked after {len(trace)} turns"


def verify_connected(budget: int | None = None) -> tuple[bool, str]:
    """Triangle-based connected instance: certificate plus solver outcomes."""
    b = GraphBuilder()
    b.add_clique(3)
    inst = build_connected_instance(b.finish(), 3, {0: 1, 1: 2, 2: 3})
    if inst.chi != 4 or inst.graph.n != 10:
        return False, f"chi={inst.chi} n={inst.graph.n}, wanted 4/10"
    certify(inst)
    if len(witness_clique(inst)) != 4:
        return False, "witness clique size != 4"
    for k, want in ((4, Player.ALICE), (3, Player.BOB)):
        variant = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=k)
        got = solve(inst.graph, variant, budget=budget).winner
        if got is not want:
            return False, f"k={k}: winner {got}, wanted {want}"
    alice = connected_strategy("alice-conn", inst)
    variant = Variant(starter=Player.ALICE, mode=Mode.CONNECTED, k=4)
    st, _ = play_vs_optimal(alice, Player.ALICE, inst.graph, variant, budget=budget)
    if st is not Status.ALICE_WIN:
        return False, f"alice-conn scored {st} with 4 colors"
    return True, "certificate, solver outcomes, and the scripted defense all hold"
