"""Positional games on monotone (negation-free) CNF/DNF formulas.

Player I and Player II alternately claim an unset variable, Player I starting.
Because no negations exist, Player I never benefits from setting a variable
False nor Player II from setting one True, so Player I always sets True and
Player II always sets False. Once every variable is set, Player I wins iff
the formula evaluates True.

Which player is "Alice" depends on the formula kind: for CNF formulas Alice
is the true-setter (she wants every clause hit), for DNF formulas Bob is the
true-setter (he wants some clause filled). solve_formula_game works purely in
terms of the setter sides; alice_side() gives the mapping.

pass_lift turns a winning strategy for the ordinary game into one for the
variant where the opponent may pass: each pass is absorbed by pretending the
opponent claimed some fresh variable, and the pretend claims are repaired if
the opponent later actually takes one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .engine import Player


class FormulaError(Exception):
    """Malformed formula or formula-game input."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormulaKind(Enum):
    CNF = "cnf"
    DNF = "dnf"

    def __str__(self) -> str:
        return self.value


class Side(Enum):
    """Player I claims variables True; Player II claims them False."""

    TRUE_SETTER = "PlayerI"
    FALSE_SETTER = "PlayerII"

    @property
    def opponent(self) -> "Side":
        return Side.FALSE_SETTER if self is Side.TRUE_SETTER else Side.TRUE_SETTER

    def __str__(self) -> str:
        return self.value


def alice_side(kind: FormulaKind) -> Side:
    """Alice's setter side: True for CNF games, False for DNF games."""
    return Side.TRUE_SETTER if kind is FormulaKind.CNF else Side.FALSE_SETTER


def side_of(kind: FormulaKind, player: Player) -> Side:
    a = alice_side(kind)
    return a if player is Player.ALICE else a.opponent


def player_of(kind: FormulaKind, side: Side) -> Player:
    return Player.ALICE if alice_side(kind) is side else Player.BOB


@dataclass(frozen=True)
class PosFormula:
    """Monotone formula: clauses are sets of 1-based variable indices."""

    kind: FormulaKind
    n_vars: int
    clauses: tuple[frozenset[int], ...]
    width_cap: int | None = None

    def __post_init__(self):
        if self.n_vars < 1:
            raise FormulaError(f"variable count {self.n_vars} must be positive")
        if not self.clauses:
            raise FormulaError("formula has no clauses")
        for i, clause in enumerate(self.clauses):
            if not clause:
                raise FormulaError(f"clause {i + 1} is empty")
            for x in clause:
                if not 1 <= x <= self.n_vars:
                    raise FormulaError(f"clause {i + 1} references variable {x} outside 1..{self.n_vars}")
            if self.width_cap is not None and len(clause) > self.width_cap:
                raise FormulaError(
                    f"clause {i + 1} has {len(clause)} variables, over the cap of {self.width_cap}")

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    def clause_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.clauses)


def parse_formula(text: str) -> PosFormula:
    """Parse 'cnf|dnf|cnf11|dnf11 <N> <M>' followed by M index lines."""
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise FormulaError("empty formula file")
    headno, head = lines[0]
    parts = head.split()
    if len(parts) != 3:
        raise FormulaError("expected '<kind> <N> <M>' header", headno)
    kind_token = parts[0].lower()
    cap = None
    if kind_token.endswith("11"):
        cap = 11
        kind_token = kind_token[:-2]
    if kind_token not in ("cnf", "dnf"):
        raise FormulaError(f"unknown formula kind {parts[0]!r}", headno)
    try:
        n_vars, n_clauses = int(parts[1]), int(parts[2])
    except ValueError:
        raise FormulaError("N and M must be integers", headno) from None
    body = lines[1:]
    if len(body) != n_clauses:
        raise FormulaError(f"expected {n_clauses} clause lines, found {len(body)}", headno)
    clauses = []
    for no, ln in body:
        try:
            idxs = [int(tok) for tok in ln.split()]
        except ValueError:
            raise FormulaError("clause indices must be integers", no) from None
        if not idxs:
            raise FormulaError("empty clause", no)
        for x in idxs:
            if not 1 <= x <= n_vars:
                raise FormulaError(f"variable {x} outside 1..{n_vars}", no)
        clause = frozenset(idxs)
        if cap is not None and len(clause) > cap:
            raise FormulaError(f"clause width {len(clause)} over the cap of {cap}", no)
        clauses.append(clause)
    return PosFormula(kind=FormulaKind(kind_token), n_vars=n_vars,
                      clauses=tuple(clauses), width_cap=cap)


def format_formula(f: PosFormula) -> str:
    kind = f.kind.value + ("11" if f.width_cap == 11 else "")
    lines = [f"{kind} {f.n_vars} {f.n_clauses}"]
    lines.extend(" ".join(str(x) for x in sorted(c)) for c in f.clauses)
    return "\n".join(lines) + "\n"


def evaluate(f: PosFormula, trues: set[int] | frozenset[int]) -> bool:
    """Truth value with every unset variable False (the monotone completion)."""
    if f.kind is FormulaKind.CNF:
        return all(clause & trues for clause in f.clauses)
    return any(clause <= trues for clause in f.clauses)


PASS_VAR = 0  # formula-game pass move

FORMULA_GAME_GUARD = 24


@dataclass(frozen=True)
class FormulaSolveResult:
    winner: Side
    winning_first_moves: tuple[int, ...]  # variables; PASS_VAR encodes a pass


def _decided(f: PosFormula, trues: frozenset[int], falses: frozenset[int]) -> Side | None:
    # Monotone early exits: a CNF clause gone all-False can never be hit,
    # and a hit clause (all-True conjunction for DNF) can never be unhit.
    if f.kind is FormulaKind.CNF:
        if any(clause <= falses for clause in f.clauses):
            return Side.FALSE_SETTER
        if all(clause & trues for clause in f.clauses):
            return Side.TRUE_SETTER
    else:
        if any(clause <= trues for clause in f.clauses):
            return Side.TRUE_SETTER
        if all(clause & falses for clause in f.clauses):
            return Side.FALSE_SETTER
    return None


class FormulaGameSolver:
    """Memoized exact solver for one formula and one pass-rights setting."""

    def __init__(self, f: PosFormula, passer: Side | None = None):
        if f.n_vars > FORMULA_GAME_GUARD:
            raise FormulaError(
                f"{f.n_vars} variables exceed the search guard of {FORMULA_GAME_GUARD}")
        self.f = f
        self.passer = passer
        self._memo: dict[tuple, Side] = {}

    def winner(self, trues: frozenset[int], falses: frozenset[int], to_move: Side) -> Side:
        n_set = len(trues) + len(falses)
        if n_set == self.f.n_vars:
            return Side.TRUE_SETTER if evaluate(self.f, trues) else Side.FALSE_SETTER
        early = _decided(self.f, trues, falses)
        if early is not None:
            return early
        key = (trues, falses, to_move)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        result = to_move.opponent
        for var in self.moves(trues, falses, to_move):
            if var == PASS_VAR:
                w = self.winner(trues, falses, to_move.opponent)
            elif to_move is Side.TRUE_SETTER:
                w = self.winner(trues | {var}, falses, to_move.opponent)
            else:
                w = self.winner(trues, falses | {var}, to_move.opponent)
            if w is to_move:
                result = to_move
                break
        self._memo[key] = result
        return result

    def moves(self, trues: frozenset[int], falses: frozenset[int], to_move: Side) -> list[int]:
        out = [x for x in range(1, self.f.n_vars + 1) if x not in trues and x not in falses]
        if to_move is self.passer and out:
            out.append(PASS_VAR)
        return out

    def solve(self) -> FormulaSolveResult:
        root = frozenset()
        first = Side.TRUE_SETTER
        winning = []
        for var in self.moves(root, root, first):
            if var == PASS_VAR:
                w = self.winner(root, root, first.opponent)
            else:
                w = self.winner(root | {var}, root, first.opponent)
            if w is first:
                winning.append(var)
        winner = first if winning else first.opponent
        return FormulaSolveResult(winner=winner, winning_first_moves=tuple(winning))


def solve_formula_game(f: PosFormula, passer: Side | None = None) -> FormulaSolveResult:
    """Exact winner (Player I moves first) and Player I's winning first moves."""
    return FormulaGameSolver(f, passer).solve()


class FormulaStrategy:
    """One side of the no-pass game: notified of opponent claims, asked for own."""

    side: Side
    name = "formula-strategy"

    def reset(self) -> None:
        raise NotImplementedError

    def opponent_set(self, var: int) -> None:
        raise NotImplementedError

    def next_var(self) -> int:
        raise NotImplementedError

    def own_set(self, var: int) -> None:
        """Record a variable that fell to our side without us choosing it
        (some outer games can hand a player their own claim)."""
        raise NotImplementedError

    def clone(self) -> "FormulaStrategy":
        raise NotImplementedError


class SolverFormulaStrategy(FormulaStrategy):
    """Plays perfectly via the memoized game solver: the lowest winning
    variable, or the lowest unset variable once the position is lost."""

    def __init__(self, f: PosFormula, side: Side, _solver: FormulaGameSolver | None = None):
        self.f = f
        self.side = side
        self.name = f"optimal-{side.value.lower()}"
        self._solver = _solver or FormulaGameSolver(f, passer=None)
        self.trues: frozenset[int] = frozenset()
        self.falses: frozenset[int] = frozenset()

    def reset(self) -> None:
        self.trues = frozenset()
        self.falses = frozenset()

    def clone(self) -> "SolverFormulaStrategy":
        c = SolverFormulaStrategy(self.f, self.side, self._solver)
        c.trues, c.falses = self.trues, self.falses
        return c

    def _claim(self, side: Side, var: int) -> None:
        if var in self.trues or var in self.falses:
            raise FormulaError(f"variable {var} is already set")
        if side is Side.TRUE_SETTER:
            self.trues |= {var}
        else:
            self.falses |= {var}

    def opponent_set(self, var: int) -> None:
        self._claim(self.side.opponent, var)

    def own_set(self, var: int) -> None:
        self._claim(self.side, var)

    def next_var(self) -> int:
        best = None
        for var in self._solver.moves(self.trues, self.falses, self.side):
            if var == PASS_VAR:
                continue
            after = (self.trues | {var}, self.falses) if self.side is Side.TRUE_SETTER \
                else (self.trues, self.falses | {var})
            if self._solver.winner(after[0], after[1], self.side.opponent) is self.side:
                best = var
                break
        if best is None:
            unset = [x for x in range(1, self.f.n_vars + 1)
                     if x not in self.trues and x not in self.falses]
            best = unset[0]
        self._claim(self.side, best)
        return best


class PassLiftedStrategy:
    """Adapter making a no-pass strategy tolerate opponent passes.

    A pass is absorbed by pretending the opponent claimed the lowest variable
    the inner strategy has not seen. If the opponent later actually claims a
    pretend variable, the pretense moves to a fresh one. Once the inner game
    is complete, the remaining (pretend) variables are claimed in index order.
    """

    def __init__(self, base: FormulaStrategy, n_vars: int):
        self.base = base
        self.side = base.side
        self.n_vars = n_vars
        self.name = f"pass-lifted({getattr(base, 'name', 'base')})"
        self.mirror_set: set[int] = set()   # everything the inner strategy has seen
        self.assumed: set[int] = set()      # pretend opponent claims still pending

    def reset(self) -> None:
        self.base.reset()
        self.mirror_set = set()
        self.assumed = set()

    def clone(self) -> "PassLiftedStrategy":
        c = PassLiftedStrategy(self.base.clone(), self.n_vars)
        c.mirror_set = set(self.mirror_set)
        c.assumed = set(self.assumed)
        return c

    def _fresh_unseen(self) -> int | None:
        for x in range(1, self.n_vars + 1):
            if x not in self.mirror_set:
                return x
        return None

    def _pretend_opponent_claim(self) -> None:
        var = self._fresh_unseen()
        if var is None:
            return  # inner game already complete; nothing to absorb
        self.base.opponent_set(var)
        self.mirror_set.add(var)
        self.assumed.add(var)

    def opponent_passed(self) -> None:
        self._pretend_opponent_claim()

    def opponent_set(self, var: int) -> None:
        if var in self.assumed:
            # The pretense came true; re-pretend on a fresh variable.
            self.assumed.discard(var)
            self._pretend_opponent_claim()
            return
        if var in self.mirror_set:
            raise FormulaError(f"opponent claimed variable {var} twice")
        self.base.opponent_set(var)
        self.mirror_set.add(var)

    def own_set(self, var: int) -> None:
        if var in self.assumed:
            # Already pretended away to the opponent; keeping that reading is
            # the pessimistic (safe) one, so only mark it really set.
            self.assumed.discard(var)
            return
        if var in self.mirror_set:
            raise FormulaError(f"variable {var} is already set in the mirror game")
        self.base.own_set(var)
        self.mirror_set.add(var)

    def next_var(self) -> int:
        if len(self.mirror_set) >= self.n_vars:
            # Inner game over; only pretend variables remain unclaimed for real.
            leftover = sorted(self.assumed)
            if not leftover:
                raise FormulaError("no variable left to claim")
            var = leftover[0]
            self.assumed.discard(var)
            return var
        var = self.base.next_var()
        self.mirror_set.add(var)
        return var


def pass_lift(base: FormulaStrategy, n_vars: int) -> PassLiftedStrategy:
    """Wrap a no-pass strategy so it also wins when the opponent may pass."""
    return PassLiftedStrategy(base, n_vars)
