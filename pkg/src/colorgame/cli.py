"""Command-line interface: solving, instance building, verification, play.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 node budget
exhausted.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .engine import (
    Mode,
    Move,
    PASS,
    Player,
    RuleViolation,
    Status,
    Variant,
    apply_move,
    format_move,
    greedy_color,
    initial_state,
    legal_moves,
    parse_move_token,
    status,
)
from .formulas import (
    FormulaError,
    Side,
    parse_formula,
    solve_formula_game,
)
from .graphs import FormatError, Graph, GraphError, parse_graph
from .reductions import (
    DEMO_CNF,
    DEMO_DNF,
    InstanceError,
    build_connected_instance,
    build_gb_instance,
    build_greedy_instance,
    certify,
    emit_instance,
)
from .solver import (
    BudgetExceeded,
    Solver,
    format_result,
    game_number,
    minimal_winning_k,
    resolve_prefix,
    solve,
)

INPUT_ERROR = 2
BUDGET_ERROR = 3


def parse_variant(text: str, k: int) -> Variant:
    """Grammar: <starter>,<mode>[,pass=<side>] with starter alice-start or
    bob-start and mode free, greedy or connected."""
    starter = None
    mode = None
    passer = None
    for part in text.split(","):
        part = part.strip().lower()
        if part in ("alice-start", "bob-start"):
            starter = Player.ALICE if part.startswith("alice") else Player.BOB
        elif part in ("free", "greedy", "connected"):
            mode = Mode(part)
        elif part.startswith("pass="):
            side = part.removeprefix("pass=")
            if side not in ("alice", "bob"):
                raise ValueError(f"pass side must be alice or bob, got {side!r}")
            passer = Player.ALICE if side == "alice" else Player.BOB
        else:
            raise ValueError(f"unknown variant part {part!r}")
    if starter is None or mode is None:
        raise ValueError("variant needs a starter and a mode, e.g. bob-start,free")
    return Variant(starter=starter, mode=mode, k=k, passer=passer)


def parse_prefix(text: str, g: Graph, variant: Variant) -> list[Move]:
    tokens = [t for chunk in text.split(",") for t in chunk.split()] if text else []
    return [parse_move_token(t, g, variant) for t in tokens]


def read_graph_file(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def cmd_solve(args) -> int:
    g = read_graph_file(args.graph)
    variant = parse_variant(args.variant, args.k)
    prefix = parse_prefix(args.prefix, g, variant)
    result = solve(g, variant, prefix, budget=args.budget)
    print(format_result(result, g))
    return 0


def cmd_game_number(args) -> int:
    g = read_graph_file(args.graph)
    variant = parse_variant(args.variant, 1)
    ks = range(args.k_min, args.k_max + 1)
    numbers = game_number(g, variant.starter, variant.mode, ks,
                          passer=variant.passer, budget=args.budget)
    for k in sorted(numbers):
        print(f"k={k} winner={numbers[k]}")
    least = minimal_winning_k(numbers)
    print(f"least_alice_win={'none' if least is None else least}")
    return 0


def cmd_formula_solve(args) -> int:
    with open(args.formula, "r", encoding="utf-8") as fh:
        f = parse_formula(fh.read())
    passer = {"none": None, "player-i": Side.TRUE_SETTER,
              "player-ii": Side.FALSE_SETTER}[args.passer]
    result = solve_formula_game(f, passer)
    moves = ",".join("pass" if v == 0 else f"x{v}" for v in result.winning_first_moves)
    print(f"winner={result.winner} first_moves={moves}")
    return 0


def cmd_reduce(args) -> int:
    if args.kind == "gb":
        with open(args.formula, "r", encoding="utf-8") as fh:
            inst = build_gb_instance(parse_formula(fh.read()), scale_chi=args.scale)
    elif args.kind == "greedy":
        with open(args.formula, "r", encoding="utf-8") as fh:
            inst = build_greedy_instance(parse_formula(fh.read()), scale_chi=args.scale)
    else:
        g = read_graph_file(args.graph)
        if args.chi is not None:
            witness = read_witness_file(args.witness)
            inst = build_connected_instance(g, args.chi, witness)
        else:
            from .graphs import chromatic_number_exact, find_proper_coloring

            chi = chromatic_number_exact(g)
            inst = build_connected_instance(g, chi, find_proper_coloring(g, chi))
    certify(inst)
    text = emit_instance(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out} (n={inst.graph.n}, chi={inst.chi})")
    else:
        sys.stdout.write(text)
    return 0


def read_witness_file(path: str) -> dict[int, int]:
    if path is None:
        raise ValueError("--chi also requires --witness")
    witness: dict[int, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "witness-color" and len(parts) == 3:
                parts = parts[1:]
            if len(parts) != 2:
                raise FormatError("expected '<vertex> <color>'", lineno)
            witness[int(parts[0])] = int(parts[1])
    return witness


def cmd_verify(args) -> int:
    from . import verification

    checks = {
        "f1": verification.verify_f1,
        "f3": verification.verify_f3,
        "gb-playout": verification.verify_gb_playout,
        "greedy-playout": verification.verify_greedy_playout,
        "connected": verification.verify_connected,
    }
    names = list(checks) if args.check == "all" else [args.check]
    failures = 0
    for name in names:
        ok, detail = checks[name](budget=args.budget)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


def cmd_play(args) -> int:
    g = read_graph_file(args.graph)
    variant = parse_variant(args.variant, args.k)
    human = Player.ALICE if args.side == "alice" else Player.BOB
    state = initial_state(g, variant)
    for move in resolve_prefix(g, variant, parse_prefix(args.prefix, g, variant)):
        state = apply_move(g, state, variant, move)
    solver = Solver(g, variant, args.budget)

    def show():
        st = status(g, state, variant)
        colored = ", ".join(f"{g.vertex_name(v)}={c}"
                            for v, c in enumerate(state.colors) if c) or "(empty)"
        print(f"[{st}] to move: {state.to_move}  coloring: {colored}")

    show()
    while True:
        if status(g, state, variant) is not Status.ONGOING:
            print(f"game over: {status(g, state, variant)}")
            return 0
        if state.to_move is not human:
            try:
                move = solver.best_move(state)
            except BudgetExceeded:
                print("opponent budget exhausted")
                return BUDGET_ERROR
            print(f"{state.to_move} plays {format_move(move, g)}")
            state = apply_move(g, state, variant, move)
            show()
            continue
        try:
            line = input(f"{human}> ").strip()
        except EOFError:
            return 0
        if not line:
            continue
        cmd, *rest = line.split()
        if cmd == "quit":
            return 0
        if cmd == "show":
            show()
            continue
        if cmd == "hint":
            try:
                best = solver.best_move(state)
                print(f"hint: {format_move(best, g)}")
            except BudgetExceeded:
                print("hint: budget exhausted")
            continue
        if cmd == "pass":
            move = PASS
        elif cmd == "move" and len(rest) == 2:
            try:
                v = g.vertex(rest[0])
                move = Move(v, int(rest[1]))
            except (GraphError, ValueError) as exc:
                print(f"bad move: {exc}")
                continue
        elif cmd == "move" and len(rest) == 1 and variant.mode is Mode.GREEDY:
            try:
                v = g.vertex(rest[0])
                move = Move(v, greedy_color(g, state, v))
            except (GraphError, RuleViolation) as exc:
                print(f"bad move: {exc}")
                continue
        else:
            print("commands: show | move <v> <c> | pass | hint | quit")
            continue
        try:
            state = apply_move(g, state, variant, move)
        except RuleViolation as exc:
            print(f"illegal move: {exc}")
            continue
        show()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colorgame",
        description="Exact coloring-game solver and hardness-instance toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a game exactly")
    p.add_argument("--graph", required=True)
    p.add_argument("--variant", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--prefix", default="")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("game-number", help="winner for every k in a range")
    p.add_argument("--graph", required=True)
    p.add_argument("--variant", required=True)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_game_number)

    p = sub.add_parser("formula-solve", help="solve a positional formula game")
    p.add_argument("--formula", required=True)
    p.add_argument("--passer", choices=["none", "player-i", "player-ii"], default="none")
    p.set_defaults(func=cmd_formula_solve)

    p = sub.add_parser("reduce", help="build a reduction instance")
    p.add_argument("kind", choices=["gb", "greedy", "connected"])
    p.add_argument("--formula")
    p.add_argument("--graph")
    p.add_argument("--chi", type=int, default=None)
    p.add_argument("--witness")
    p.add_argument("--scale", type=int, default=None,
                   help="shrink the size constants (marks the instance fidelity void)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="run the scripted-strategy verification checks")
    p.add_argument("check", choices=["f1", "f3", "gb-playout", "greedy-playout",
                                     "connected", "all"])
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("play", help="interactive game against the exact solver")
    p.add_argument("--graph", required=True)
    p.add_argument("--variant", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--side", choices=["alice", "bob"], default="alice")
    p.add_argument("--prefix", default="")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_play)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the input-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    except (FormatError, FormulaError, GraphError, InstanceError, RuleViolation,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
