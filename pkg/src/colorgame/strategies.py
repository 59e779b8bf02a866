"""Scripted strategies and the arena that pits them against each other.

Each strategy is a small state machine fed the move history; it must always
return a move that is legal in the current state. Where a script's case
analysis runs out, the strategy falls back to the lowest legal move and logs
the event (see .fallbacks), so scripts are total without ever hiding a rule
violation.

The formula-driven strategies translate graph moves into claims in a
positional formula game and back. Their inner formula strategy is always
wrapped by the pass-absorbing adapter, because opponent graph moves without
formula meaning are treated as passes.
"""

from __future__ import annotations

import logging
import random

from .engine import (
    PASS,
    GameState,
    Mode,
    Move,
    Player,
    Variant,
    greedy_color,
    legal_moves,
    sees,
)
from .formulas import (
    FormulaError,
    FormulaKind,
    FormulaStrategy,
    PassLiftedStrategy,
    PosFormula,
    Side,
    SolverFormulaStrategy,
    pass_lift,
)
from .graphs import Graph
from .reductions import (
    Instance,
    InstanceKind,
    clause_pair_labels,
    twin_partner_map,
)
from .solver import Solver, StrategyFault

log = logging.getLogger("colorgame.strategies")


class ArenaError(Exception):
    """The arena detected a broken game (never a legal-rules outcome)."""


class Strategy:
    """Base: consumes new history entries, then picks a move."""

    name = "strategy"
    player: Player | None = None

    def __init__(self):
        self._seen = 0
        self.fallbacks: list[tuple[str, tuple]] = []

    def reset(self) -> None:
        self._seen = 0
        self.fallbacks = []

    def choose(self, g: Graph, state: GameState, variant: Variant,
               history: tuple[tuple[Player, Move], ...]) -> Move:
        for player, move in history[self._seen:]:
            self.observe(g, player, move)
        self._seen = len(history)
        return self.pick(g, state, variant)

    def observe(self, g: Graph, player: Player, move: Move) -> None:
        pass

    def pick(self, g: Graph, state: GameState, variant: Variant) -> Move:
        raise NotImplementedError

    def fallback(self, g: Graph, state: GameState, variant: Variant, why: str) -> Move:
        move = lowest_legal(g, state, variant)
        self.fallbacks.append((why, (move.vertex, move.color)))
        log.debug("%s fell back (%s) -> %s", self.name, why, move)
        return move


def lowest_legal(g: Graph, state: GameState, variant: Variant) -> Move:
    """Lowest (vertex, color) coloring move; a pass only when nothing else."""
    moves = legal_moves(g, state, variant)
    colorings = [m for m in moves if not m.is_pass]
    if colorings:
        return min(colorings)
    if moves:
        return moves[0]
    raise ArenaError("no legal move available")


class LowestLegalStrategy(Strategy):
    name = "lowest-legal"

    def pick(self, g, state, variant):
        return lowest_legal(g, state, variant)


class RandomLegalStrategy(Strategy):
    """Seeded random legal mover (rejection sampling, then full enumeration)."""

    def __init__(self, seed: int):
        super().__init__()
        self.seed = seed
        self.name = f"random-legal(seed={seed})"
        self.rng = random.Random(seed)

    def reset(self):
        super().reset()
        self.rng = random.Random(self.seed)

    def pick(self, g, state, variant):
        uncolored = [v for v in range(g.n) if not state.colors[v]]
        first = len(uncolored) == g.n
        for _ in range(4 * len(uncolored) + 8):
            v = self.rng.choice(uncolored)
            if variant.mode is Mode.CONNECTED and not first \
                    and not any(state.colors[u] for u in g.adj[v]):
                continue
            seen = sees(g, state, v)
            if variant.mode is Mode.GREEDY:
                c = 1
                while c in seen:
                    c += 1
                if c <= variant.k:
                    return Move(v, c)
                continue
            free = [c for c in range(1, variant.k + 1) if c not in seen]
            if free:
                return Move(v, self.rng.choice(free))
        moves = legal_moves(g, state, variant)
        if not moves:
            raise ArenaError("no legal move available")
        return self.rng.choice(moves)


class OptimalStrategy(Strategy):
    """Solver-backed exact play: lowest winning move, else lowest legal."""

    def __init__(self, g: Graph, variant: Variant, budget: int | None = None):
        super().__init__()
        self.name = "optimal"
        self.solver = Solver(g, variant, budget)

    def pick(self, g, state, variant):
        return self.solver.best_move(state)


# ---------------------------------------------------------------------------
# Opening-trap gadget scripts
# ---------------------------------------------------------------------------


def _lowest_color(k: int, banned: set[int]) -> int | None:
    for c in range(1, k + 1):
        if c not in banned:
            return c
    return None


class AliceF1(Strategy):
    """On the f1 gadget, answer the opener on s by giving y the same color;
    after that nothing can ever be blocked, so any legal move keeps the win."""

    name = "alice-f1"
    player = Player.ALICE

    def __init__(self, g: Graph):
        super().__init__()
        self.sv = g.vertex("s")
        self.yv = g.vertex("y")

    def pick(self, g, state, variant):
        scol = state.colors[self.sv]
        if scol and not state.colors[self.yv] and scol not in sees(g, state, self.yv):
            return Move(self.yv, scol)
        return self.fallback(g, state, variant, "outside scripted cases")


class BobF1(Strategy):
    """Attack script on the f1 gadget (also embedded in the DNF instances).

    Goal: y, w and s must end with three distinct colors. Priorities:
    counter a mismatched y immediately through w (and vice versa), otherwise
    feed the opener color into Q so y can never take it, then alternate the
    color threats that force the opponent to spend the clique.
    """

    name = "bob-f1"
    player = Player.BOB

    def __init__(self, g: Graph):
        super().__init__()
        self.sv = g.vertex("s")
        self.wv = g.vertex("w")
        self.yv = g.vertex("y")
        self.K = g.group("K")
        self.Q = g.group("Q")

    def pick(self, g, state, variant):
        k = variant.k
        colors = state.colors
        if not colors[self.sv]:
            seen = sees(g, state, self.sv)
            c = 1 if 1 not in seen else _lowest_color(k, seen)
            if c is not None:
                return Move(self.sv, c)
            return self.fallback(g, state, variant, "opener vertex blocked")
        scol = colors[self.sv]
        ycol = colors[self.yv]
        wcol = colors[self.wv]

        if ycol and ycol != scol and not wcol:
            # y broke the pairing: pin w to a third color.
            c = _lowest_color(k, sees(g, state, self.wv) | {scol, ycol})
            if c is not None:
                return Move(self.wv, c)
        if wcol and not ycol:
            # w is fixed: give y a color of its own.
            c = _lowest_color(k, sees(g, state, self.yv) | {scol, wcol})
            if c is not None:
                return Move(self.yv, c)
        if not ycol and not wcol:
            move = self._press(g, state, variant, scol)
            if move is not None:
                return move
        return self.fallback(g, state, variant, "outside scripted cases")

    def _press(self, g, state, variant, scol: int) -> Move | None:
        k = variant.k
        colors = state.colors
        ysees = sees(g, state, self.yv)
        # Deny y the opener color by planting it in Q.
        if scol not in ysees:
            for q in self.Q:
                if not colors[q] and scol not in sees(g, state, q):
                    return Move(q, scol)
        qcols = {colors[q] for q in self.Q if colors[q]}
        kcols = {colors[v] for v in self.K if colors[v]}
        # A Q color missing from K can be locked onto w.
        cand = sorted(c for c in qcols if c != scol and c not in kcols)
        for c in cand:
            if c not in sees(g, state, self.wv):
                return Move(self.wv, c)
        # Stall move: put a fresh-to-y color in Q (then K, if Q ran out).
        for v in list(self.Q) + list(self.K):
            if colors[v]:
                continue
            c = _lowest_color(k, ysees | sees(g, state, v))
            if c is not None:
                return Move(v, c)
        return None


class BobF3(Strategy):
    """Attack script on the f3 gadget (greedy rules): open on s; if the
    reply skipped y, take w (which greedily receives the opener color) and
    the clique-plus-y pigeonhole does the rest."""

    name = "bob-f3"
    player = Player.BOB

    def __init__(self, g: Graph):
        super().__init__()
        self.sv = g.vertex("s")
        self.wv = g.vertex("w")
        self.yv = g.vertex("y")

    def pick(self, g, state, variant):
        colors = state.colors
        if not colors[self.sv]:
            c = greedy_color(g, state, self.sv)
            if c <= variant.k:
                return Move(self.sv, c)
            return self.fallback(g, state, variant, "opener vertex blocked")
        if not colors[self.yv] and not colors[self.wv]:
            c = greedy_color(g, state, self.wv)
            if c <= variant.k:
                return Move(self.wv, c)
        return self.fallback(g, state, variant, "outside scripted cases")


def gadget_strategy(kind: str, g: Graph) -> Strategy:
    if kind == "alice-f1":
        return AliceF1(g)
    if kind == "bob-f1":
        return BobF1(g)
    if kind == "bob-f3":
        return BobF3(g)
    raise ValueError(f"unknown gadget strategy {kind!r}")


# ---------------------------------------------------------------------------
# Formula-driven scripts for the reduction instances
# ---------------------------------------------------------------------------


class _FormulaBridge:
    """Bookkeeping shared by the reduction scripts: which graph vertices carry
    formula meaning, and which variables have been claimed for real."""

    def __init__(self, inst: Instance, inner: FormulaStrategy):
        f = inst.source_formula
        g = inst.graph
        self.f = f
        self.lifted: PassLiftedStrategy = pass_lift(inner, f.n_vars)
        self.xs = list(g.group("x"))
        self.var_of_x = {x: i for i, x in enumerate(self.xs, start=1)}
        # Closed variable neighborhood: x_i plus its literal twins (plus the
        # degree-1 companion in the greedy build).
        self.var_of_nbhd: dict[int, int] = {}
        for i, x in enumerate(self.xs, start=1):
            self.var_of_nbhd[x] = i
            for u in g.adj[x]:
                self.var_of_nbhd[u] = i
        self.claimed: set[int] = set()
        self.done = False

    def reset(self, inst: Instance, inner_factory) -> None:
        self.lifted = pass_lift(inner_factory(), self.f.n_vars)
        self.claimed = set()
        self.done = False

    def feed_opponent_var(self, var: int) -> None:
        if var in self.claimed:
            self.lifted.opponent_passed()
            return
        self.claimed.add(var)
        self.lifted.opponent_set(var)

    def feed_own_var(self, var: int) -> None:
        if var in self.claimed:
            return
        self.claimed.add(var)
        try:
            self.lifted.own_set(var)
        except FormulaError:
            self.done = True

    def feed_pass(self) -> None:
        if not self.done:
            self.lifted.opponent_passed()

    def peek_next_var(self) -> int | None:
        if self.done or len(self.claimed) >= self.f.n_vars:
            self.done = True
            return None
        try:
            return self.lifted.clone().next_var()
        except FormulaError:
            self.done = True
            return None

    def commit_next_var(self) -> int:
        var = self.lifted.next_var()
        self.claimed.add(var)
        return var


class BobGb(Strategy):
    """Blocking script for a DNF instance: open s with color 1, secure the
    same color on y, then claim clause variables by coloring their vertices
    with the opener color as the inner formula strategy dictates. A filled
    clause then has every outside neighbor on the opener color and its clique
    dies by pigeonhole. If y escapes the opener color, switch to the gadget
    attack instead."""

    name = "bob-gb"
    player = Player.BOB

    def __init__(self, inst: Instance, inner: FormulaStrategy | None = None):
        super().__init__()
        if inst.kind is not InstanceKind.GB:
            raise ValueError("bob-gb plays GB instances")
        self.inst = inst
        g = inst.graph
        if inner is None:
            inner = SolverFormulaStrategy(inst.source_formula, Side.TRUE_SETTER)
        self._inner_factory = lambda: inner.clone()
        self.bridge = _FormulaBridge(inst, inner.clone())
        self.fight = BobF1(g)
        self.sv = g.vertex("s")
        self.yv = g.vertex("y")
        self.pending: list[Move] = []
        self.mode = "open"

    def reset(self):
        super().reset()
        self.bridge.reset(self.inst, self._inner_factory)
        self.fight.reset()
        self.pending = []
        self.mode = "open"

    def observe(self, g, player, move):
        if player is Player.ALICE:
            self.pending.append(move)

    def _consume_pending_for_formula(self, g) -> None:
        for move in self.pending:
            var = None if move.is_pass else self.bridge.var_of_nbhd.get(move.vertex)
            if var is None:
                self.bridge.feed_pass()
            else:
                self.bridge.feed_opponent_var(var)
        self.pending = []

    def pick(self, g, state, variant):
        colors = state.colors
        if not colors[self.sv]:
            if 1 not in sees(g, state, self.sv):
                return Move(self.sv, 1)
            return self.fallback(g, state, variant, "opener vertex blocked")
        scol = colors[self.sv]
        if self.mode == "open":
            ycol = colors[self.yv]
            if not ycol:
                if scol not in sees(g, state, self.yv):
                    self.pending = []  # the opening replies carry no formula meaning
                    return Move(self.yv, scol)
                self.mode = "fight"
            else:
                self.mode = "formula" if ycol == scol else "fight"
            self.pending = self.pending if self.mode == "formula" else []
        if self.mode == "fight":
            return self.fight.pick(g, state, variant)
        self._consume_pending_for_formula(g)
        var = self.bridge.peek_next_var()
        if var is not None:
            xv = self.bridge.xs[var - 1]
            if not colors[xv] and scol not in sees(g, state, xv):
                self.bridge.commit_next_var()
                return Move(xv, scol)
            self.bridge.done = True  # desync guard; should be unreachable
        return self._tail_move(g, state, variant, scol)

    def _tail_move(self, g, state, variant, scol):
        # Avoid poisoning unclaimed variable neighborhoods with the opener
        # color while mopping up.
        best = None
        for move in legal_moves(g, state, variant):
            if move.is_pass:
                continue
            var = self.bridge.var_of_nbhd.get(move.vertex)
            risky = var is not None and var not in self.bridge.claimed and move.color == scol
            key = (risky, move.vertex, move.color)
            if best is None or key < best[0]:
                best = (key, move)
        if best is None:
            return self.fallback(g, state, variant, "no coloring move")
        return best[1]


class AliceGb(Strategy):
    """Defense script for a DNF instance. Pair y (or s) with the opener's
    color, then: answer a claimed variable vertex through the inner formula
    strategy with a non-opener color on its chosen variable, mirror any twin
    by completing its partner with the least color, and treat everything
    else as a formula pass."""

    name = "alice-gb"
    player = Player.ALICE

    def __init__(self, inst: Instance, inner: FormulaStrategy | None = None):
        super().__init__()
        if inst.kind is not InstanceKind.GB:
            raise ValueError("alice-gb plays GB instances")
        self.inst = inst
        g = inst.graph
        f = inst.source_formula
        if inner is None:
            inner = SolverFormulaStrategy(f, Side.FALSE_SETTER)
        self._inner_factory = lambda: inner.clone()
        self.bridge = _FormulaBridge(inst, inner.clone())
        self.sv = g.vertex("s")
        self.wv = g.vertex("w")
        self.yv = g.vertex("y")
        self.twin_partner = twin_partner_map(inst)
        self.anchor_clique: dict[int, int] = {}
        for j in range(1, f.n_clauses + 1):
            a_name, b_name = clause_pair_labels(j, 0)
            self.anchor_clique[g.vertex(a_name)] = j
            self.anchor_clique[g.vertex(b_name)] = j
        self.pending: list[Move] = []
        self.mode = "open"
        self.true_color: int | None = None
        self.w_done = False
        self.poked_cliques: list[int] = []

    def reset(self):
        super().reset()
        self.bridge.reset(self.inst, self._inner_factory)
        self.pending = []
        self.mode = "open"
        self.true_color = None
        self.w_done = False
        self.poked_cliques = []

    def observe(self, g, player, move):
        if player is Player.BOB:
            self.pending.append(move)
        if not move.is_pass:
            j = self.anchor_clique.get(move.vertex)
            if j is not None and j not in self.poked_cliques:
                self.poked_cliques.append(j)

    def pick(self, g, state, variant):
        if self.mode == "open":
            move = self._opening(g, state, variant)
            if move is not None:
                return move
        if self.mode == "formula":
            return self._formula_move(g, state, variant)
        return self._caseb_move(g, state, variant)

    def _opening(self, g, state, variant) -> Move | None:
        colors = state.colors
        first = self.pending[0] if self.pending else None
        if first is None or first.is_pass:
            self.pending = []
            self.mode = "formula"
            self.true_color = 1
            return None
        v, c = first.vertex, first.color
        if v in (self.sv, self.yv):
            other = self.yv if v == self.sv else self.sv
            self.pending = []
            self.mode = "formula"
            self.true_color = c
            if not colors[other] and c not in sees(g, state, other):
                return Move(other, c)
            return None
        # The opener ignored the gadget: fix y on a different color, then w.
        if not colors[self.yv]:
            cc = _lowest_color(variant.k, sees(g, state, self.yv) | {c})
            if cc is not None:
                self.pending = []
                self.mode = "caseb"
                self.true_color = None
                return Move(self.yv, cc)
        self.mode = "caseb"
        self.pending = []
        return None

    def _formula_move(self, g, state, variant) -> Move:
        colors = state.colors
        tc = self.true_color or 1
        twin_reply: int | None = None
        for move in self.pending:
            if move.is_pass:
                self.bridge.feed_pass()
                continue
            v = move.vertex
            partner = self.twin_partner.get(v)
            if partner is not None:
                if not colors[partner]:
                    twin_reply = partner
                self.bridge.feed_pass()
                continue
            var = self.bridge.var_of_x.get(v)
            if var is not None:
                self.bridge.feed_opponent_var(var)
            else:
                self.bridge.feed_pass()
        self.pending = []
        if twin_reply is not None and not colors[twin_reply]:
            c = _lowest_color(variant.k, sees(g, state, twin_reply))
            if c is not None:
                return Move(twin_reply, c)
        var = self.bridge.peek_next_var()
        if var is not None:
            xv = self.bridge.xs[var - 1]
            if not colors[xv]:
                c = _lowest_color(variant.k, sees(g, state, xv) | {tc})
                if c is not None:
                    self.bridge.commit_next_var()
                    return Move(xv, c)
            self.bridge.done = True
        return self.fallback(g, state, variant, "formula phase exhausted")

    def _clique_vertices(self, j: int) -> list[int]:
        # Literal pairs first, then the anchor pair, then the padding clique:
        # the reference color should land where no outside constraint blocks it.
        f = self.inst.source_formula
        g = self.inst.graph
        p = len(f.clauses[j - 1])
        order: list[int] = []
        for pos in list(range(1, p + 1)) + [0]:
            a, b = clause_pair_labels(j, pos)
            order.append(g.vertex(a))
            order.append(g.vertex(b))
        order.extend(g.group(f"L{j}"))
        return order

    def _caseb_move(self, g, state, variant) -> Move:
        colors = state.colors
        scol = colors[self.sv]
        ycol = colors[self.yv]
        if scol and ycol and scol == ycol:
            # The opener joined s to y's color after all; play the main line.
            self.mode = "formula"
            self.true_color = scol
            return self._formula_move(g, state, variant)
        self.pending = []
        # Reference color: s's color once fixed, else the least color w's
        # pairing move below leaves available to s.
        rs = scol or (1 if ycol != 1 else 2)
        if not self.w_done:
            if colors[self.wv]:
                self.w_done = True
            elif ycol and ycol not in sees(g, state, self.wv):
                self.w_done = True
                return Move(self.wv, ycol)
        for j in list(self.poked_cliques):
            verts = self._clique_vertices(j)
            if any(colors[v] == rs for v in verts):
                self.poked_cliques.remove(j)
                continue
            for v in verts:
                if not colors[v] and rs not in sees(g, state, v):
                    return Move(v, rs)
        for x in self.bridge.xs:
            if not colors[x]:
                c = _lowest_color(variant.k, sees(g, state, x) | {rs})
                if c is not None:
                    return Move(x, c)
        return self.fallback(g, state, variant, "caseb exhausted")


class BobGreedy(Strategy):
    """Blocking script for a CNF instance under greedy rules: open s (forced
    to color 1), take w if the reply skipped y (the opener-gadget pigeonhole
    then wins on its own), otherwise falsify clause variables by coloring
    their vertices while their forced color is still 1."""

    name = "bob-greedy"
    player = Player.BOB

    def __init__(self, inst: Instance, inner: FormulaStrategy | None = None):
        super().__init__()
        if inst.kind is not InstanceKind.GREEDY:
            raise ValueError("bob-greedy plays GREEDY instances")
        self.inst = inst
        g = inst.graph
        if inner is None:
            inner = SolverFormulaStrategy(inst.source_formula, Side.FALSE_SETTER)
        self._inner_factory = lambda: inner.clone()
        self.bridge = _FormulaBridge(inst, inner.clone())
        self.sv = g.vertex("s")
        self.wv = g.vertex("w")
        self.yv = g.vertex("y")
        self.pending: list[Move] = []
        self.mode = "open"

    def reset(self):
        super().reset()
        self.bridge.reset(self.inst, self._inner_factory)
        self.pending = []
        self.mode = "open"

    def observe(self, g, player, move):
        if player is Player.ALICE:
            self.pending.append(move)

    def pick(self, g, state, variant):
        colors = state.colors
        if not colors[self.sv]:
            c = greedy_color(g, state, self.sv)
            if c <= variant.k:
                return Move(self.sv, c)
            return self.fallback(g, state, variant, "opener vertex blocked")
        scol = colors[self.sv]
        if self.mode == "open":
            ycol = colors[self.yv]
            if not ycol:
                self.mode = "fight"
                self.pending = []
                if not colors[self.wv]:
                    c = greedy_color(g, state, self.wv)
                    if c <= variant.k:
                        return Move(self.wv, c)
            else:
                self.mode = "formula" if ycol == scol else "fight"
                if self.mode == "fight":
                    self.pending = []
        if self.mode == "fight":
            return self._tail_move(g, state, variant, scol)
        for move in self.pending:
            self._feed(g, state, move, scol)
        self.pending = []
        var = self.bridge.peek_next_var()
        if var is not None:
            xv = self.bridge.xs[var - 1]
            if not state.colors[xv] and greedy_color(g, state, xv) == scol:
                self.bridge.commit_next_var()
                return Move(xv, scol)
            self.bridge.done = True  # desync guard; should be unreachable
        return self._tail_move(g, state, variant, scol)

    def _feed(self, g, state, move: Move, scol: int) -> None:
        if move.is_pass:
            self.bridge.feed_pass()
            return
        v = move.vertex
        var = self.bridge.var_of_nbhd.get(v)
        if var is None:
            self.bridge.feed_pass()
        elif v == self.bridge.xs[var - 1] and move.color == scol:
            # The opponent handed us the falsification outright.
            self.bridge.feed_own_var(var)
        else:
            self.bridge.feed_opponent_var(var)

    def _tail_move(self, g, state, variant, scol):
        best = None
        for move in legal_moves(g, state, variant):
            if move.is_pass:
                continue
            var = self.bridge.var_of_nbhd.get(move.vertex)
            risky = var is not None and var not in self.bridge.claimed
            key = (risky, move.vertex)
            if best is None or key < best[0]:
                best = (key, move)
        if best is None:
            return self.fallback(g, state, variant, "no coloring move")
        return best[1]


class AliceGreedy(Strategy):
    """Defense script for a CNF instance under greedy rules: answer the
    opener on y, then satisfy clauses by coloring the degree-1 companion of
    each variable the inner formula strategy picks (pinning that variable
    vertex away from color 1), mirroring twin moves along the way."""

    name = "alice-greedy"
    player = Player.ALICE

    def __init__(self, inst: Instance, inner: FormulaStrategy | None = None):
        super().__init__()
        if inst.kind is not InstanceKind.GREEDY:
            raise ValueError("alice-greedy plays GREEDY instances")
        self.inst = inst
        g = inst.graph
        if inner is None:
            inner = SolverFormulaStrategy(inst.source_formula, Side.TRUE_SETTER)
        self._inner_factory = lambda: inner.clone()
        self.bridge = _FormulaBridge(inst, inner.clone())
        self.xbars = list(g.group("xbar"))
        self.var_of_xbar = {xb: i for i, xb in enumerate(self.xbars, start=1)}
        self.twin_partner = twin_partner_map(inst)
        self.sv = g.vertex("s")
        self.yv = g.vertex("y")
        self.pending: list[Move] = []

    def reset(self):
        super().reset()
        self.bridge.reset(self.inst, self._inner_factory)
        self.pending = []

    def observe(self, g, player, move):
        if player is Player.BOB:
            self.pending.append(move)

    def pick(self, g, state, variant):
        colors = state.colors
        scol = colors[self.sv] or 1
        if not colors[self.yv]:
            c = greedy_color(g, state, self.yv)
            if c <= variant.k:
                self.pending = []  # the opening replies carry no formula meaning
                return Move(self.yv, c)
            return self.fallback(g, state, variant, "reply vertex blocked")
        twin_reply: int | None = None
        for move in self.pending:
            got = self._feed(g, state, move, scol)
            if got is not None and not colors[got]:
                twin_reply = got
        self.pending = []
        if twin_reply is not None and not colors[twin_reply]:
            c = greedy_color(g, state, twin_reply)
            if c <= variant.k:
                return Move(twin_reply, c)
        var = self.bridge.peek_next_var()
        if var is not None:
            xbv = self.xbars[var - 1]
            if not colors[xbv] and greedy_color(g, state, xbv) == scol:
                self.bridge.commit_next_var()
                return Move(xbv, scol)
            self.bridge.done = True  # desync guard; should be unreachable
        return self._tail_move(g, state, variant)

    def _feed(self, g, state, move: Move, scol: int) -> int | None:
        """Update the bridge; returns a twin partner to answer, if any."""
        if move.is_pass:
            self.bridge.feed_pass()
            return None
        v = move.vertex
        partner = self.twin_partner.get(v)
        if partner is not None:
            self.bridge.feed_pass()
            return partner
        var = self.bridge.var_of_x.get(v)
        if var is not None:
            if move.color == scol:
                self.bridge.feed_opponent_var(var)  # a genuine falsification
            else:
                self.bridge.feed_own_var(var)  # pinned away from the opener color
            return None
        var = self.var_of_xbar.get(v)
        if var is not None:
            if move.color == scol:
                # The companion took color 1, so the variable never will.
                self.bridge.feed_own_var(var)
            else:
                self.bridge.feed_pass()
            return None
        self.bridge.feed_pass()
        return None

    def _tail_move(self, g, state, variant):
        best = None
        for move in legal_moves(g, state, variant):
            if move.is_pass:
                continue
            var = self.bridge.var_of_nbhd.get(move.vertex)
            risky = var is not None and var not in self.bridge.claimed
            key = (risky, move.vertex)
            if best is None or key < best[0]:
                best = (key, move)
        if best is None:
            return self.fallback(g, state, variant, "no coloring move")
        return best[1]


# ---------------------------------------------------------------------------
# Connected-game scripts
# ---------------------------------------------------------------------------


def _lowest_legal_in(g, state, variant, vertices) -> Move | None:
    allowed = set(vertices)
    best = None
    for move in legal_moves(g, state, variant):
        if move.is_pass or move.vertex not in allowed:
            continue
        if best is None or move < best:
            best = move
    return best


class AliceConn(Strategy):
    """Defense script on a connected-mode instance: open y1, pair y2 to it,
    then answer gadget moves inside the gadget and base-graph moves through
    the inner base-graph strategy."""

    name = "alice-conn"
    player = Player.ALICE

    def __init__(self, inst: Instance, inner: Strategy | None = None):
        super().__init__()
        if inst.kind is not InstanceKind.CONNECTED:
            raise ValueError("alice-conn plays CONNECTED instances")
        self.inst = inst
        g = inst.graph
        self.base_n = inst.source_graph.n
        self.gadget = [v for v in range(g.n) if v >= self.base_n]
        self.y1 = g.vertex("y1")
        self.y2 = g.vertex("y2")
        self.inner = inner if inner is not None else OptimalInBase(inst)
        self.last_opponent: Move | None = None
        self._history: tuple = ()

    def reset(self):
        super().reset()
        self.inner.reset()
        self.last_opponent = None
        self._history = ()

    def choose(self, g, state, variant, history):
        self._history = history
        return super().choose(g, state, variant, history)

    def observe(self, g, player, move):
        if player is Player.BOB:
            self.last_opponent = move

    def pick(self, g, state, variant):
        colors = state.colors
        if not colors[self.y1]:
            if all(c == 0 for c in colors) and 1 <= variant.k:
                return Move(self.y1, 1)
            c = _lowest_color(variant.k, sees(g, state, self.y1))
            if c is not None and any(colors[u] for u in g.adj[self.y1]):
                return Move(self.y1, c)
            return self.fallback(g, state, variant, "cannot open on y1")
        if not colors[self.y2]:
            c = colors[self.y1]
            if c not in sees(g, state, self.y2) \
                    and any(colors[u] for u in g.adj[self.y2]):
                return Move(self.y2, c)
            return self.fallback(g, state, variant, "cannot pair y2")
        last = self.last_opponent
        if last is not None and not last.is_pass and last.vertex < self.base_n:
            move = self.inner.choose(g, state, variant, self._history)
            if move.vertex < self.base_n:
                return move
            self.fallbacks.append(("inner strayed off the base graph",
                                   (move.vertex, move.color)))
            return move
        move = _lowest_legal_in(g, state, variant, self.gadget)
        if move is not None:
            return move
        move = self.inner.choose(g, state, variant, self._history)
        return move


class BobConn(Strategy):
    """Attack script on a connected-mode instance: split y1 and y2 onto
    different colors whenever possible (taking s after an opening on either),
    and otherwise mirror regions so the base graph is entered first."""

    name = "bob-conn"
    player = Player.BOB

    def __init__(self, inst: Instance, inner: Strategy | None = None):
        super().__init__()
        if inst.kind is not InstanceKind.CONNECTED:
            raise ValueError("bob-conn plays CONNECTED instances")
        self.inst = inst
        g = inst.graph
        self.base_n = inst.source_graph.n
        self.gadget = [v for v in range(g.n) if v >= self.base_n]
        self.y1 = g.vertex("y1")
        self.y2 = g.vertex("y2")
        self.sv = g.vertex("s")
        self.K = list(g.group("K"))
        self.inner = inner if inner is not None else OptimalInBase(inst)
        self.last_opponent: Move | None = None
        self._history: tuple = ()

    def reset(self):
        super().reset()
        self.inner.reset()
        self.last_opponent = None
        self._history = ()

    def choose(self, g, state, variant, history):
        self._history = history
        return super().choose(g, state, variant, history)

    def observe(self, g, player, move):
        if player is Player.ALICE:
            self.last_opponent = move

    def pick(self, g, state, variant):
        colors = state.colors
        c1, c2 = colors[self.y1], colors[self.y2]
        if c1 and c2:
            if c1 != c2:
                return self.fallback(g, state, variant, "pair already split")
            return self._mirror(g, state, variant)
        if bool(c1) != bool(c2):
            colored, other = (self.y1, self.y2) if c1 else (self.y2, self.y1)
            cc = colors[colored]
            split = _lowest_color(variant.k, sees(g, state, other) | {cc})
            if split is not None and any(colors[u] for u in g.adj[other]):
                return Move(other, split)
            if not colors[self.sv]:
                move = _lowest_legal_in(g, state, variant, [self.sv])
                if move is not None:
                    return move
            return self._mirror(g, state, variant)
        # Neither endpoint colored yet.
        if any(colors[v] for v in self.K) and not colors[self.y1]:
            move = _lowest_legal_in(g, state, variant, [self.y1])
            if move is not None:
                return move
        return self._region_wait(g, state, variant)

    def _region_wait(self, g, state, variant):
        last = self.last_opponent
        base_region = list(range(self.base_n)) + [self.sv]
        if last is not None and not last.is_pass:
            if last.vertex in base_region:
                move = _lowest_legal_in(g, state, variant, base_region)
                if move is not None:
                    return move
            else:
                rest = [v for v in self.gadget
                        if v not in (self.y1, self.y2, self.sv)]
                move = _lowest_legal_in(g, state, variant, rest)
                if move is not None:
                    return move
        return self.fallback(g, state, variant, "waiting region exhausted")

    def _mirror(self, g, state, variant):
        colors = state.colors
        if not colors[self.sv]:
            move = _lowest_legal_in(g, state, variant, [self.sv])
            if move is not None:
                return move
        last = self.last_opponent
        if last is not None and not last.is_pass and last.vertex < self.base_n:
            move = self.inner.choose(g, state, variant, self._history)
            if move is not None:
                return move
        gadget_left = [v for v in self.gadget if not colors[v]]
        if last is not None and not last.is_pass and last.vertex >= self.base_n \
                and gadget_left:
            move = _lowest_legal_in(g, state, variant, gadget_left)
            if move is not None:
                return move
        move = self.inner.choose(g, state, variant, self._history)
        if move is not None:
            return move
        return self.fallback(g, state, variant, "mirror exhausted")


class OptimalInBase(Strategy):
    """Exact play restricted toward the base graph of a connected instance:
    lowest winning base move, else any winning move, else lowest legal base
    move, else lowest legal."""

    name = "optimal-in-base"

    def __init__(self, inst: Instance, budget: int | None = None):
        super().__init__()
        self.base_n = inst.source_graph.n
        self.budget = budget
        self._solver: Solver | None = None
        self._variant: Variant | None = None

    def reset(self):
        super().reset()

    def pick(self, g, state, variant):
        from .engine import apply_move

        if self._solver is None or self._variant != variant:
            self._solver = Solver(g, variant, self.budget)
            self._variant = variant
        solver = self._solver
        mover = state.to_move
        moves = sorted(m for m in legal_moves(g, state, variant) if not m.is_pass)
        winning = [m for m in moves
                   if solver.winner(apply_move(g, state, variant, m)) is mover]
        for pool in (winning, moves):
            for m in pool:
                if m.vertex < self.base_n:
                    return m
            if pool is winning and winning:
                return winning[0]
        if moves:
            return moves[0]
        return self.fallback(g, state, variant, "no coloring move")


# ---------------------------------------------------------------------------
# Factories and the arena
# ---------------------------------------------------------------------------


def reduction_strategy(kind: str, inst: Instance,
                       inner: FormulaStrategy | None = None) -> Strategy:
    if kind == "bob-gb":
        return BobGb(inst, inner)
    if kind == "alice-gb":
        return AliceGb(inst, inner)
    if kind == "bob-greedy":
        return BobGreedy(inst, inner)
    if kind == "alice-greedy":
        return AliceGreedy(inst, inner)
    raise ValueError(f"unknown reduction strategy {kind!r}")


def connected_strategy(kind: str, inst: Instance,
                       inner: Strategy | None = None) -> Strategy:
    if kind == "alice-conn":
        return AliceConn(inst, inner)
    if kind == "bob-conn":
        return BobConn(inst, inner)
    raise ValueError(f"unknown connected strategy {kind!r}")


def arena(alice: Strategy, bob: Strategy, g: Graph, variant: Variant,
          prefix=()) -> tuple:
    """Play two strategies against each other; returns (status, trace).

    Raises StrategyFault on an illegal strategy move and ArenaError if the
    game somehow exceeds its 2n+1 turn bound.
    """
    from .engine import Status, apply_move, check_move, initial_state, status
    from .solver import resolve_prefix

    alice.reset()
    bob.reset()
    state = initial_state(g, variant)
    trace: list[tuple[Player, Move]] = []
    for move in resolve_prefix(g, variant, prefix):
        trace.append((state.to_move, move))
        state = apply_move(g, state, variant, move)
    limit = 2 * g.n + 1
    while status(g, state, variant) is Status.ONGOING:
        if len(trace) > limit:
            raise ArenaError(f"game exceeded {limit} turns")
        strategy = alice if state.to_move is Player.ALICE else bob
        move = strategy.choose(g, state, variant, tuple(trace))
        try:
            check_move(g, state, variant, move)
        except Exception as exc:
            raise StrategyFault(strategy.name, move, str(exc)) from exc
        trace.append((state.to_move, move))
        state = apply_move(g, state, variant, move)
    return status(g, state, variant), trace
