"""Exact engine, solver, and reduction toolkit for graph coloring games."""

from .engine import (
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
    sees,
    status,
)
from .formulas import (
    FormulaKind,
    PosFormula,
    Side,
    evaluate,
    parse_formula,
    pass_lift,
    solve_formula_game,
)
from .graphs import (
    Graph,
    GraphBuilder,
    GraphSpec,
    assemble,
    chromatic_number_exact,
    colored_set_connected,
    is_proper,
    parse_graph,
    verify_clique,
)
from .reductions import (
    Instance,
    build_connected_instance,
    build_gadget,
    build_gb_instance,
    build_greedy_instance,
    certify,
    witness_clique,
    witness_coloring,
)
from .solver import (
    BudgetExceeded,
    SolveResult,
    Solver,
    game_number,
    play_vs_optimal,
    solve,
    winning_first_moves,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
