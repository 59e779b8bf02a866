"""Rules of the coloring game variants: moves, application, termination.

Three modes share one engine. Free: any absent color may be placed on any
uncolored vertex. Greedy: a chosen vertex always receives the least color
absent from its neighborhood, and the move is illegal when that exceeds k.
Connected: free rule, but after the first move the chosen vertex must be
adjacent to an already colored vertex.

Alice wins exactly when every vertex ends up colored. A game that can no
longer complete is awarded to Bob as soon as that becomes permanent: either
some uncolored vertex already sees every color (its least free color exceeds
k in greedy mode), or the player to move has no move at all and no pass
right. Seen-color sets only grow, so both conditions are irrevocable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .graphs import Graph, colored_set_connected


class RuleViolation(Exception):
    """An illegal move; the message names the violated rule."""


class Player(Enum):
    ALICE = "Alice"
    BOB = "Bob"

    @property
    def opponent(self) -> "Player":
        return Player.BOB if self is Player.ALICE else Player.ALICE

    def __str__(self) -> str:
        return self.value


class Mode(Enum):
    FREE = "free"
    GREEDY = "greedy"
    CONNECTED = "connected"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Variant:
    """Rule triple plus color count: who starts, who may pass, which mode."""

    starter: Player
    mode: Mode
    k: int
    passer: Player | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"color count k={self.k} must be at least 1")

    def describe(self) -> str:
        s = f"{self.starter.value.lower()}-start,{self.mode.value}"
        if self.passer is not None:
            s += f",pass={self.passer.value.lower()}"
        return s


@dataclass(frozen=True, order=True)
class Move:
    """Either color a vertex or pass (vertex < 0 encodes the pass)."""

    vertex: int
    color: int

    @property
    def is_pass(self) -> bool:
        return self.vertex < 0

    def __str__(self) -> str:
        return "pass" if self.is_pass else f"move {self.vertex} {self.color}"


PASS = Move(-1, 0)


@dataclass(frozen=True)
class GameState:
    """Partial coloring (0 = uncolored) plus the player to move."""

    colors: tuple[int, ...]
    to_move: Player

    def colored_count(self) -> int:
        return sum(1 for c in self.colors if c)

    def uncolored(self) -> Iterator[int]:
        return (v for v, c in enumerate(self.colors) if c == 0)

    def as_coloring(self) -> dict[int, int]:
        return {v: c for v, c in enumerate(self.colors) if c}


class Status(Enum):
    ONGOING = "ongoing"
    ALICE_WIN = "AliceWin"
    BOB_WIN = "BobWin"

    def __str__(self) -> str:
        return self.value


def initial_state(g: Graph, variant: Variant) -> GameState:
    return GameState(colors=(0,) * g.n, to_move=variant.starter)


def sees(g: Graph, state: GameState, v: int) -> set[int]:
    """The set of colors on v's colored neighbors."""
    colors = state.colors
    return {colors[u] for u in g.adj[v] if colors[u]}


def greedy_color(g: Graph, state: GameState, v: int) -> int:
    """Least positive integer absent from v's neighborhood (may exceed k)."""
    if state.colors[v]:
        raise RuleViolation(f"vertex {v} is already colored")
    seen = sees(g, state, v)
    c = 1
    while c in seen:
        c += 1
    return c


def _frontier_ok(g: Graph, state: GameState, v: int, first_move: bool) -> bool:
    if first_move:
        return True
    colors = state.colors
    return any(colors[u] for u in g.adj[v])


def legal_moves(g: Graph, state: GameState, variant: Variant) -> list[Move]:
    """All legal moves, ascending (vertex, color); a pass, if available, last."""
    k = variant.k
    moves: list[Move] = []
    colors = state.colors
    first = all(c == 0 for c in colors)
    for v in range(g.n):
        if colors[v]:
            continue
        if variant.mode is Mode.CONNECTED and not _frontier_ok(g, state, v, first):
            continue
        seen = {colors[u] for u in g.adj[v] if colors[u]}
        if variant.mode is Mode.GREEDY:
            c = 1
            while c in seen:
                c += 1
            if c <= k:
                moves.append(Move(v, c))
        else:
            moves.extend(Move(v, c) for c in range(1, k + 1) if c not in seen)
    if state.to_move is variant.passer and any(c == 0 for c in colors):
        moves.append(PASS)
    return moves


def check_move(g: Graph, state: GameState, variant: Variant, move: Move) -> None:
    """Raise RuleViolation unless the move is legal in this state."""
    if move.is_pass:
        if state.to_move is not variant.passer:
            raise RuleViolation(f"{state.to_move} holds no pass rights")
        if all(state.colors):
            raise RuleViolation("cannot pass once every vertex is colored")
        return
    v, c = move.vertex, move.color
    if not 0 <= v < g.n:
        raise RuleViolation(f"vertex {v} does not exist")
    if state.colors[v]:
        raise RuleViolation(f"vertex {v} is already colored")
    if not 1 <= c <= variant.k:
        raise RuleViolation(f"color {c} outside 1..{variant.k}")
    if variant.mode is Mode.GREEDY:
        forced = greedy_color(g, state, v)
        if c != forced:
            raise RuleViolation(f"greedy rule forces color {forced} on vertex {v}, not {c}")
    else:
        if c in sees(g, state, v):
            raise RuleViolation(f"color {c} already on a neighbor of vertex {v}")
        if variant.mode is Mode.CONNECTED:
            first = all(col == 0 for col in state.colors)
            if not _frontier_ok(g, state, v, first):
                raise RuleViolation(f"vertex {v} is not adjacent to the colored set")


def apply_move(g: Graph, state: GameState, variant: Variant, move: Move) -> GameState:
    """Apply a legal move; pure, the input state is unchanged."""
    check_move(g, state, variant, move)
    if move.is_pass:
        return GameState(colors=state.colors, to_move=state.to_move.opponent)
    colors = list(state.colors)
    colors[move.vertex] = move.color
    return GameState(colors=tuple(colors), to_move=state.to_move.opponent)


def status(g: Graph, state: GameState, variant: Variant) -> Status:
    """Ongoing, AliceWin (all colored), or BobWin (completion impossible)."""
    k = variant.k
    colors = state.colors
    all_colored = True
    any_move = False
    first = True
    for c in colors:
        if c:
            first = False
        else:
            all_colored = False
    if all_colored:
        return Status.ALICE_WIN

    for v in range(g.n):
        if colors[v]:
            continue
        seen = {colors[u] for u in g.adj[v] if colors[u]}
        if variant.mode is Mode.GREEDY:
            c = 1
            while c in seen:
                c += 1
            if c > k:
                return Status.BOB_WIN
            any_move = True
        else:
            if len(seen) >= k:
                # Colors are 1..k, so k distinct seen colors block v for good.
                return Status.BOB_WIN
            if variant.mode is Mode.FREE or _frontier_ok(g, state, v, first):
                any_move = True
    if not any_move and state.to_move is not variant.passer:
        return Status.BOB_WIN
    return Status.ONGOING


def replay(g: Graph, variant: Variant, moves: list[Move] | tuple[Move, ...]) -> GameState:
    """Apply a move sequence from the empty board, validating each move."""
    state = initial_state(g, variant)
    for i, move in enumerate(moves):
        if status(g, state, variant) is not Status.ONGOING:
            raise RuleViolation(f"move {i} ({move}): game already over")
        state = apply_move(g, state, variant, move)
    return state


def winner_if_over(g: Graph, state: GameState, variant: Variant) -> Player | None:
    st = status(g, state, variant)
    if st is Status.ALICE_WIN:
        return Player.ALICE
    if st is Status.BOB_WIN:
        return Player.BOB
    return None


def coloring_is_legal_history(g: Graph, state: GameState, variant: Variant) -> bool:
    """Sanity check: no monochromatic edge among colored vertices, and in
    connected mode the colored set induces a connected subgraph."""
    colors = state.colors
    for v in range(g.n):
        if not colors[v]:
            continue
        seen = {colors[u] for u in g.adj[v] if colors[u]}
        if colors[v] in seen:
            return False
    if variant.mode is Mode.CONNECTED and not colored_set_connected(g, state.as_coloring()):
        return False
    return True


def format_move(move: Move, g: Graph | None = None) -> str:
    """Compact 'name:color' rendering used in solver output and traces."""
    if move.is_pass:
        return "pass"
    name = g.vertex_name(move.vertex) if g is not None else str(move.vertex)
    return f"{name}:{move.color}"


def parse_move_token(token: str, g: Graph, variant: Variant | None = None) -> Move:
    """Parse 'pass', 'v:c', or a bare vertex reference (greedy mode only)."""
    token = token.strip()
    if token == "pass":
        return PASS
    if ":" in token:
        ref, _, c = token.rpartition(":")
        try:
            color = int(c)
        except ValueError:
            raise RuleViolation(f"bad color in move token {token!r}") from None
        return Move(g.vertex(ref), color)
    if variant is not None and variant.mode is Mode.GREEDY:
        return Move(g.vertex(token), 0)  # color resolved against the live state
    raise RuleViolation(f"move token {token!r} needs a color ('name:color')")
