"""Formula-to-graph reduction instances and their chromatic certificates.

Three builders, all sharing the conjunction-clique scheme:

* build_gb_instance: monotone DNF formula -> free-mode instance whose target
  color count equals its chromatic number (M + 3N + 25 for M clauses over
  N variables).
* build_greedy_instance: monotone CNF formula -> greedy-mode instance, same
  target count, with a degree-1 companion vertex next to every variable
  vertex.
* build_connected_instance: (graph, chromatic number, witness coloring) ->
  connected-mode instance with chromatic number one higher.

Every instance carries a certificate: witness_coloring returns a proper
coloring with exactly `chi` colors and witness_clique a clique of size
`chi`, which together pin the chromatic number exactly.

Faithful instances are far beyond exhaustive-solve scale, so the formula
builders accept a scale override that shrinks the padding cliques. Scaled
instances keep every structural property except the faithful size constants
and are marked faithful=False ("fidelity void") for plumbing and playout
tests only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .formulas import FormulaKind, PosFormula
from .graphs import (
    Graph,
    GraphBuilder,
    chromatic_number_exact,
    format_graph,
    is_connected,
    is_proper,
    verify_clique,
    SizeError,
)


class InstanceError(Exception):
    """The reduction input or construction is invalid."""


class InstanceKind(Enum):
    GB = "gb"
    GREEDY = "greedy"
    CONNECTED = "connected"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Instance:
    kind: InstanceKind
    graph: Graph
    chi: int
    faithful: bool = True
    chi_certified: bool = True
    source_formula: PosFormula | None = None
    source_graph: Graph | None = None
    source_witness: tuple[tuple[int, int], ...] | None = None


# Example formulas used by the demo CLI paths and the verification suite.
DEMO_DNF = PosFormula(
    kind=FormulaKind.DNF, n_vars=5,
    clauses=(frozenset({1, 2, 5}), frozenset({1, 3, 5}),
             frozenset({2, 4, 5}), frozenset({3, 4, 5})),
    width_cap=11)

DEMO_CNF = PosFormula(
    kind=FormulaKind.CNF, n_vars=4,
    clauses=(frozenset({1, 2}), frozenset({1, 3}),
             frozenset({2, 4}), frozenset({3, 4})),
    width_cap=11)


def build_gadget(kind: str, k: int, *, w_joined_to_clique: bool = False) -> Graph:
    """The two opening-trap gadgets, with labels s, w, y, K (and Q for f1).

    f1: clique K of size k, independent set Q of size k+3, s-w edge, s and w
    joined to K, y joined to K and Q.

    f3: clique K of size k, s joined to K, y joined to K and to w. The
    published drawing and the accompanying argument disagree on whether w is
    also joined to K; the drawing (no such edges) is what makes the forced
    first reply work, so that is the default. w_joined_to_clique=True builds
    the other reading for sensitivity checks.
    """
    if k < 1:
        raise InstanceError(f"gadget clique size k={k} must be at least 1")
    b = GraphBuilder()
    b.add_vertex("s")
    b.add_vertex("w")
    b.add_vertex("y")
    b.add_clique(k, "K")
    if kind == "f1":
        b.add_independent_set(k + 3, "Q")
        b.add_edge(b.resolve("s"), b.resolve("w"))
        b.join("s", "K")
        b.join("w", "K")
        b.join("y", "K")
        b.join("y", "Q")
    elif kind == "f3":
        b.join("s", "K")
        b.join("y", "K")
        b.add_edge(b.resolve("w"), b.resolve("y"))
        if w_joined_to_clique:
            b.join("w", "K")
    else:
        raise InstanceError(f"unknown gadget kind {kind!r} (expected 'f1' or 'f3')")
    return b.finish()


def _add_conjunction_cliques(b: GraphBuilder, f: PosFormula, chi: int) -> None:
    """Per clause: a clique of true-twin pairs (one pair per literal plus one
    anchor pair joined to y) padded by a clique L_j joined to s, totalling
    exactly chi vertices."""
    xs = b.members("x")
    for j, clause in enumerate(f.clauses, start=1):
        literals = sorted(clause)
        p = len(literals)
        scaffold = f"_conj{j}"
        seeds = b.add_clique(p + 1, scaffold)  # seed 0 is the y-anchor
        b.add_edge(seeds[0], b.resolve("y"))
        for pos, var in enumerate(literals, start=1):
            b.add_edge(seeds[pos], xs[var - 1])
        for pos, seed in enumerate(seeds):
            twin = b.split_true_twin(seed)
            b.set_label(f"l'{j},{pos}", [seed])
            b.set_label(f"l''{j},{pos}", [twin])
        pad = chi - 2 * (p + 1)
        b.add_clique(pad, f"L{j}")
        b.join(f"L{j}", scaffold)
        b.join(f"L{j}", "s")
        b.drop_label(scaffold)


def _formula_chi(f: PosFormula, scale_chi: int | None) -> tuple[int, bool]:
    faithful_chi = f.n_clauses + 3 * f.n_vars + 25
    if scale_chi is None:
        return faithful_chi, True
    floor = 2 * max(f.clause_sizes()) + 3
    if scale_chi < floor:
        raise InstanceError(
            f"scale chi={scale_chi} below the structural floor of {floor}")
    if scale_chi >= faithful_chi:
        raise InstanceError(
            f"scale chi={scale_chi} is not below the faithful value {faithful_chi}")
    return scale_chi, False


def _check_formula(f: PosFormula, kind: FormulaKind) -> None:
    if f.kind is not kind:
        raise InstanceError(f"expected a {kind.value.upper()} formula, got {f.kind.value.upper()}")
    if max(f.clause_sizes()) > 11:
        raise InstanceError("clause width over 11 is outside this construction")


def build_gb_instance(f: PosFormula, *, scale_chi: int | None = None) -> Instance:
    """Free-mode instance for a monotone DNF formula.

    Sizes (faithful): |K| = chi - 2, |Q| = |K| + 3, |L_j| = chi - 2(p_j + 1)
    with chi = M + 3N + 25; every conjunction clique then has exactly chi
    vertices, each with exactly one neighbor outside its clique.
    """
    _check_formula(f, FormulaKind.DNF)
    chi, faithful = _formula_chi(f, scale_chi)
    b = GraphBuilder()
    b.add_vertex("s")
    b.add_vertex("w")
    b.add_vertex("y")
    b.add_clique(chi - 2, "K")
    b.add_independent_set(chi + 1, "Q")  # |Q| = |K| + 3
    b.add_edge(b.resolve("s"), b.resolve("w"))
    b.join("s", "K")
    b.join("w", "K")
    b.join("y", "K")
    b.join("y", "Q")
    b.add_independent_set(f.n_vars, "x")
    _add_conjunction_cliques(b, f, chi)
    return Instance(kind=InstanceKind.GB, graph=b.finish(), chi=chi,
                    faithful=faithful, source_formula=f)


def build_greedy_instance(f: PosFormula, *, scale_chi: int | None = None) -> Instance:
    """Greedy-mode instance for a monotone CNF formula.

    Same conjunction-clique scheme as the DNF build, but the opener gadget
    has no independent part (|K| = chi - 1) and every variable vertex x_i
    gets a degree-1 companion xbar_i.
    """
    _check_formula(f, FormulaKind.CNF)
    chi, faithful = _formula_chi(f, scale_chi)
    b = GraphBuilder()
    b.add_vertex("s")
    b.add_vertex("w")
    b.add_vertex("y")
    b.add_clique(chi - 1, "K")
    b.join("s", "K")
    b.join("y", "K")
    b.add_edge(b.resolve("w"), b.resolve("y"))
    b.add_independent_set(f.n_vars, "x")
    for x in list(b.members("x")):
        b.add_pendant(x, "xbar")
    _add_conjunction_cliques(b, f, chi)
    return Instance(kind=InstanceKind.GREEDY, graph=b.finish(), chi=chi,
                    faithful=faithful, source_formula=f)


RESERVED_CONNECTED_LABELS = ("y1", "y2", "s", "K", "p")


def build_connected_instance(g: Graph, chi_g: int, witness: dict[int, int]) -> Instance:
    """Connected-mode instance: attach the parity gadget to an odd-order graph.

    The gadget adds y1, y2, s, a clique K of size chi_g (joined to y1 and
    y2), s adjacent to y1, y2 and all of g, and a degree-1 vertex p on y2
    exactly when chi_g is odd, which keeps the gadget's vertex count odd.
    The result has chromatic number chi_g + 1.

    The witness must be a proper chi_g-coloring of g. chi_g itself is
    re-verified exactly only when g is small enough; otherwise the instance
    is marked chi_certified=False.
    """
    if g.n % 2 == 0:
        raise InstanceError(f"the base graph must have odd order, got {g.n} vertices")
    if not is_connected(g):
        raise InstanceError("the base graph must be connected")
    if not is_proper(g, witness, chi_g):
        raise InstanceError(f"witness is not a proper {chi_g}-coloring of the base graph")
    for name in RESERVED_CONNECTED_LABELS:
        if name in g.labels:
            raise InstanceError(f"base graph label {name!r} collides with a gadget label")
    certified = True
    if g.n <= 16:
        if chromatic_number_exact(g) != chi_g:
            raise InstanceError(f"declared chromatic number {chi_g} is wrong for the base graph")
    else:
        certified = False

    b = GraphBuilder()
    for _ in range(g.n):
        b.add_vertex()
    for u, v in g.edges():
        b.add_edge(u, v)
    for name, ids in g.labels.items():
        b.set_label(name, ids)
    y1 = b.add_vertex("y1")
    y2 = b.add_vertex("y2")
    s = b.add_vertex("s")
    b.add_clique(chi_g, "K")
    b.add_edge(s, y1)
    b.add_edge(s, y2)
    b.join("y1", "K")
    b.join("y2", "K")
    for v in range(g.n):
        b.add_edge(s, v)
    if chi_g % 2 == 1:
        b.add_pendant(y2, "p")
    return Instance(kind=InstanceKind.CONNECTED, graph=b.finish(), chi=chi_g + 1,
                    chi_certified=certified, source_graph=g,
                    source_witness=tuple(sorted(witness.items())))


def clause_pair_labels(j: int, pos: int) -> tuple[str, str]:
    return f"l'{j},{pos}", f"l''{j},{pos}"


def twin_partner_map(inst: Instance) -> dict[int, int]:
    """Vertex -> its true-twin partner, over every clause pair."""
    if inst.source_formula is None:
        raise InstanceError("not a formula-built instance")
    g = inst.graph
    out: dict[int, int] = {}
    for j, clause in enumerate(inst.source_formula.clauses, start=1):
        for pos in range(len(clause) + 1):
            a, b = clause_pair_labels(j, pos)
            va, vb = g.vertex(a), g.vertex(b)
            out[va] = vb
            out[vb] = va
    return out


def conjunction_clique(inst: Instance, j: int) -> tuple[int, ...]:
    """All vertices of clause j's clique: every twin pair plus the padding."""
    if inst.source_formula is None:
        raise InstanceError("not a formula-built instance")
    f = inst.source_formula
    if not 1 <= j <= f.n_clauses:
        raise InstanceError(f"clause index {j} outside 1..{f.n_clauses}")
    g = inst.graph
    p = len(f.clauses[j - 1])
    out: list[int] = []
    for pos in range(p + 1):
        a, bb = clause_pair_labels(j, pos)
        out.extend(g.group(a))
        out.extend(g.group(bb))
    out.extend(g.group(f"L{j}"))
    return tuple(out)


def witness_coloring(inst: Instance) -> dict[int, int]:
    """A proper coloring of the instance using exactly inst.chi colors."""
    g = inst.graph
    chi = inst.chi
    col: dict[int, int] = {}
    if inst.kind is InstanceKind.GB:
        f = inst.source_formula
        col[g.vertex("s")] = 1
        for q in g.group("Q"):
            col[q] = 1
        for i, v in enumerate(g.group("K")):  # colors 2..chi-1
            col[v] = 2 + i
        col[g.vertex("w")] = chi
        col[g.vertex("y")] = chi
        for x in g.group("x"):
            col[x] = chi
        for j, clause in enumerate(f.clauses, start=1):
            p = len(clause)
            for pos in range(p + 1):
                a, bb = clause_pair_labels(j, pos)
                col[g.vertex(a)] = 2 * pos + 1
                col[g.vertex(bb)] = 2 * pos + 2
            for i, v in enumerate(g.group(f"L{j}")):
                col[v] = 2 * p + 3 + i
    elif inst.kind is InstanceKind.GREEDY:
        f = inst.source_formula
        col[g.vertex("s")] = 1
        for i, v in enumerate(g.group("K")):  # colors 2..chi
            col[v] = 2 + i
        # y is adjacent to all of K, so it must reuse the opener color; the
        # anchor pair then cannot take 1 and the first literal pair does.
        col[g.vertex("y")] = 1
        col[g.vertex("w")] = 2
        for x in g.group("x"):
            col[x] = chi
        for xb in g.group("xbar"):
            col[xb] = 1
        for j, clause in enumerate(f.clauses, start=1):
            p = len(clause)
            pair_colors = {0: (2, 3), 1: (1, 4)}
            for pos in range(p + 1):
                a, bb = clause_pair_labels(j, pos)
                ca, cb = pair_colors.get(pos, (2 * pos + 1, 2 * pos + 2))
                col[g.vertex(a)] = ca
                col[g.vertex(bb)] = cb
            for i, v in enumerate(g.group(f"L{j}")):
                col[v] = 2 * p + 3 + i
    elif inst.kind is InstanceKind.CONNECTED:
        chi0 = chi - 1
        col.update(dict(inst.source_witness))  # base keeps its own colors 1..chi0
        col[g.vertex("y1")] = 1
        col[g.vertex("y2")] = 1
        col[g.vertex("s")] = chi0 + 1
        for i, v in enumerate(g.group("K")):  # colors 2..chi0+1
            col[v] = 2 + i
        if "p" in g.labels:
            col[g.vertex("p")] = 2
    else:
        raise InstanceError(f"unknown instance kind {inst.kind}")
    return col


def witness_clique(inst: Instance) -> tuple[int, ...]:
    """A clique of size inst.chi certifying the lower bound."""
    g = inst.graph
    if inst.kind in (InstanceKind.GB, InstanceKind.GREEDY):
        return conjunction_clique(inst, 1)
    return tuple(g.group("K")) + (g.vertex("y1"),)


def certify(inst: Instance) -> None:
    """Check the chromatic certificate; raise InstanceError when it fails."""
    coloring = witness_coloring(inst)
    if not is_proper(inst.graph, coloring, inst.chi):
        raise InstanceError("witness coloring is not a proper coloring")
    if len(set(coloring.values())) != inst.chi:
        raise InstanceError("witness coloring does not use exactly chi colors")
    clique = witness_clique(inst)
    if len(set(clique)) != inst.chi:
        raise InstanceError(f"witness clique has {len(set(clique))} vertices, wanted {inst.chi}")
    if not verify_clique(inst.graph, clique):
        raise InstanceError("witness clique vertices are not pairwise adjacent")


def emit_instance(inst: Instance) -> str:
    """Graph text plus the certificate section (chi, witness lines)."""
    lines = [format_graph(inst.graph).rstrip("\n")]
    if not inst.faithful:
        lines.append("# fidelity void: scaled below the faithful size constants")
    if not inst.chi_certified:
        lines.append("# chi uncertified: declared value trusted from the caller")
    lines.append(f"chi {inst.chi}")
    coloring = witness_coloring(inst)
    lines.extend(f"witness-color {v} {coloring[v]}" for v in sorted(coloring))
    clique = " ".join(str(v) for v in witness_clique(inst))
    lines.append(f"witness-clique {clique}")
    return "\n".join(lines) + "\n"
