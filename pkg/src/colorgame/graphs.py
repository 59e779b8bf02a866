"""Immutable graphs, declarative construction, and coloring utilities.

Vertices are dense integer ids assigned in construction order. Named label
groups give human-readable access to structurally meaningful vertices (the
gadget builders rely on this heavily). Colors are 1-based integers; 0 never
appears in a coloring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class GraphError(Exception):
    """Malformed graph construction or query."""


class SpecError(GraphError):
    """A build step could not be resolved or applied."""


class SizeError(GraphError):
    """The graph is too large for an exact computation."""


class FormatError(GraphError):
    """Bad graph text input; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Graph:
    """Undirected graph: symmetric, irreflexive, with named vertex groups."""

    n: int
    adj: tuple[tuple[int, ...], ...]  # sorted neighbor lists
    labels: dict[str, tuple[int, ...]]

    def __post_init__(self):
        for name, ids in self.labels.items():
            for v in ids:
                if not 0 <= v < self.n:
                    raise GraphError(f"label {name!r} references vertex {v} out of range")

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def group(self, name: str) -> tuple[int, ...]:
        try:
            return self.labels[name]
        except KeyError:
            raise GraphError(f"no label group named {name!r}") from None

    def vertex(self, ref: str | int) -> int:
        """Resolve a vertex reference: an id, a singleton label, or 'group#i' (1-based)."""
        if isinstance(ref, int):
            if not 0 <= ref < self.n:
                raise GraphError(f"vertex id {ref} out of range")
            return ref
        if "#" in ref:
            name, _, idx = ref.rpartition("#")
            members = self.group(name)
            try:
                i = int(idx)
            except ValueError:
                raise GraphError(f"bad group index in {ref!r}") from None
            if not 1 <= i <= len(members):
                raise GraphError(f"{ref!r}: group {name!r} has {len(members)} members")
            return members[i - 1]
        if ref.isdigit():
            return self.vertex(int(ref))
        members = self.group(ref)
        if len(members) != 1:
            raise GraphError(f"label {ref!r} is not a singleton; use {ref}#i")
        return members[0]

    def vertex_name(self, v: int) -> str:
        """Human-readable name for a vertex (inverse of vertex()), or its id."""
        for name, ids in self.labels.items():
            if len(ids) == 1 and ids[0] == v:
                return name
        for name, ids in self.labels.items():
            if v in ids:
                return f"{name}#{ids.index(v) + 1}"
        return str(v)


class GraphBuilder:
    """Mutable accumulator behind every construction; finish() freezes it."""

    def __init__(self):
        self._adj: list[set[int]] = []
        self._labels: dict[str, list[int]] = {}

    @property
    def n(self) -> int:
        return len(self._adj)

    def add_vertex(self, name: str | None = None) -> int:
        v = len(self._adj)
        self._adj.append(set())
        if name is not None:
            self._labels.setdefault(name, []).append(v)
        return v

    def add_clique(self, size: int, name: str | None = None) -> list[int]:
        if size < 0:
            raise SpecError(f"clique size {size} is negative")
        vs = [self.add_vertex(name) for _ in range(size)]
        for i, u in enumerate(vs):
            for v in vs[i + 1:]:
                self.add_edge(u, v)
        return vs

    def add_independent_set(self, size: int, name: str | None = None) -> list[int]:
        if size < 0:
            raise SpecError(f"independent set size {size} is negative")
        return [self.add_vertex(name) for _ in range(size)]

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise SpecError(f"self-loop at vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise SpecError(f"edge ({u}, {v}) references a missing vertex")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def join(self, group_a: str, group_b: str) -> None:
        """Add every edge between two (disjoint) groups."""
        for u in self.members(group_a):
            for v in self.members(group_b):
                self.add_edge(u, v)

    def split_true_twin(self, v: int) -> int:
        """Replace v by two adjacent vertices with v's exact former neighborhood.

        v keeps its id; the new twin gets the next id and joins every label
        group containing v. Returns the twin's id.
        """
        if not 0 <= v < self.n:
            raise SpecError(f"split-true-twin: vertex {v} does not exist")
        twin = len(self._adj)
        self._adj.append(set())
        for u in sorted(self._adj[v]):
            self.add_edge(twin, u)
        self.add_edge(v, twin)
        for ids in self._labels.values():
            if v in ids:
                ids.append(twin)
        return twin

    def add_pendant(self, v: int, name: str | None = None) -> int:
        """Attach a new degree-1 vertex to v."""
        if not 0 <= v < self.n:
            raise SpecError(f"add-pendant: vertex {v} does not exist")
        p = self.add_vertex(name)
        self.add_edge(v, p)
        return p

    def members(self, name: str) -> list[int]:
        try:
            return self._labels[name]
        except KeyError:
            raise SpecError(f"no group named {name!r}") from None

    def set_label(self, name: str, ids: Iterable[int]) -> None:
        self._labels[name] = list(ids)

    def drop_label(self, name: str) -> None:
        self._labels.pop(name, None)

    def resolve(self, ref: str | int) -> int:
        if isinstance(ref, int):
            if not 0 <= ref < self.n:
                raise SpecError(f"vertex id {ref} out of range")
            return ref
        if "#" in ref:
            name, _, idx = ref.rpartition("#")
            members = self.members(name)
            i = int(idx)
            if not 1 <= i <= len(members):
                raise SpecError(f"{ref!r}: group {name!r} has {len(members)} members")
            return members[i - 1]
        members = self.members(ref)
        if len(members) != 1:
            raise SpecError(f"label {ref!r} is not a singleton; use {ref}#i")
        return members[0]

    def finish(self) -> Graph:
        adj = tuple(tuple(sorted(s)) for s in self._adj)
        labels = {name: tuple(ids) for name, ids in self._labels.items()}
        return Graph(n=len(adj), adj=adj, labels=labels)


# A build step is (op, *args); vertex arguments may be ids or label references.
Step = tuple


@dataclass(frozen=True)
class GraphSpec:
    """Declarative, order-sensitive recipe for a labeled graph.

    Supported steps:
        ("add-clique", size, name)
        ("add-independent-set", size, name)
        ("add-vertex", name)
        ("join", group_a, group_b)
        ("add-edge", u, v)
        ("split-true-twin", vertex)
        ("add-pendant", vertex, name)
    """

    steps: tuple[Step, ...]


def assemble(spec: GraphSpec) -> Graph:
    """Run a GraphSpec. Identical specs yield identical numbering and adjacency."""
    b = GraphBuilder()
    for i, step in enumerate(spec.steps):
        try:
            op, *args = step
            if op == "add-clique":
                b.add_clique(int(args[0]), args[1])
            elif op == "add-independent-set":
                b.add_independent_set(int(args[0]), args[1])
            elif op == "add-vertex":
                b.add_vertex(args[0])
            elif op == "join":
                b.join(args[0], args[1])
            elif op == "add-edge":
                b.add_edge(b.resolve(args[0]), b.resolve(args[1]))
            elif op == "split-true-twin":
                b.split_true_twin(b.resolve(args[0]))
            elif op == "add-pendant":
                b.add_pendant(b.resolve(args[0]), args[1])
            else:
                raise SpecError(f"unknown step {op!r}")
        except (SpecError, IndexError, ValueError, TypeError) as exc:
            raise SpecError(f"step {i} {step!r}: {exc}") from None
    return b.finish()


def is_proper(g: Graph, coloring: Mapping[int, int], k: int) -> bool:
    """True iff the coloring is total, uses colors in 1..k, and no edge clashes."""
    if len(coloring) != g.n:
        return False
    for v in range(g.n):
        c = coloring.get(v)
        if c is None or not 1 <= c <= k:
            return False
    for u, v in g.edges():
        if coloring[u] == coloring[v]:
            return False
    return True


def verify_clique(g: Graph, vertices: Iterable[int]) -> bool:
    """True iff the given vertices are pairwise adjacent."""
    vs = list(vertices)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if u == v or not g.has_edge(u, v):
                return False
    return True


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in g.adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


def colored_set_connected(g: Graph, coloring: Mapping[int, int]) -> bool:
    """True iff the colored vertices induce a connected subgraph.

    The empty set and singletons count as connected.
    """
    colored = {v for v in coloring if coloring[v]}
    if len(colored) <= 1:
        return True
    start = next(iter(colored))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.adj[u]:
            if v in colored and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(colored)


DEFAULT_CHROMATIC_LIMIT = 16


def chromatic_number_exact(g: Graph, limit: int = DEFAULT_CHROMATIC_LIMIT) -> int:
    """Exact chromatic number by branch and bound. Refuses graphs with n > limit."""
    if g.n > limit:
        raise SizeError(f"graph has {g.n} > {limit} vertices; supply the chromatic number externally")
    if g.n == 0:
        return 0
    if g.m == 0:
        return 1

    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    # Greedy coloring in degree order gives the initial upper bound.
    greedy: dict[int, int] = {}
    for v in order:
        used = {greedy[u] for u in g.adj[v] if u in greedy}
        c = 1
        while c in used:
            c += 1
        greedy[v] = c
    best = max(greedy.values())

    # Greedy clique in degree order gives a lower bound.
    clique: list[int] = []
    for v in order:
        if all(g.has_edge(v, u) for u in clique):
            clique.append(v)
    lower = max(len(clique), 2)
    if lower >= best:
        return best

    colors = [0] * g.n

    def extend(i: int, used: int) -> None:
        nonlocal best
        if used >= best:
            return
        if i == g.n:
            best = used
            return
        v = order[i]
        seen = {colors[u] for u in g.adj[v] if colors[u]}
        for c in range(1, min(used + 1, best - 1) + 1):
            if c not in seen:
                colors[v] = c
                extend(i + 1, max(used, c))
                colors[v] = 0
                if best == lower:
                    return

    extend(0, 0)
    return best


def find_proper_coloring(g: Graph, k: int, limit: int = DEFAULT_CHROMATIC_LIMIT) -> dict[int, int] | None:
    """A proper k-coloring found by exhaustive branching, or None."""
    if g.n > limit:
        raise SizeError(f"graph has {g.n} > {limit} vertices")
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    colors = [0] * g.n

    def extend(i: int, used: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        seen = {colors[u] for u in g.adj[v] if colors[u]}
        # Only the first unused color needs trying; the rest are symmetric.
        for c in range(1, min(used + 1, k) + 1):
            if c not in seen:
                colors[v] = c
                if extend(i + 1, max(used, c)):
                    return True
                colors[v] = 0
        return False

    if not extend(0, 0):
        return None
    return {v: colors[v] for v in range(g.n)}


def format_graph(g: Graph) -> str:
    """Line-oriented text form: 'graph n', 'edge u v', 'label name id...'."""
    lines = [f"graph {g.n}"]
    lines.extend(f"edge {u} {v}" for u, v in g.edges())
    for name in g.labels:
        ids = " ".join(str(v) for v in g.labels[name])
        lines.append(f"label {name} {ids}".rstrip())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the text form. Rejects duplicate edges and self-loops."""
    n = None
    edges: set[tuple[int, int]] = set()
    labels: dict[str, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "graph":
            if n is not None:
                raise FormatError("duplicate graph header", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError("expected 'graph <n>'", lineno)
            n = int(parts[1])
        elif kind == "edge":
            if n is None:
                raise FormatError("edge before graph header", lineno)
            if len(parts) != 3:
                raise FormatError("expected 'edge <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError("edge endpoints must be integers", lineno) from None
            if u == v:
                raise FormatError(f"self-loop at {u}", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"edge ({u}, {v}) out of range", lineno)
            key = (min(u, v), max(u, v))
            if key in edges:
                raise FormatError(f"duplicate edge ({u}, {v})", lineno)
            edges.add(key)
        elif kind == "label":
            if n is None:
                raise FormatError("label before graph header", lineno)
            if len(parts) < 2:
                raise FormatError("expected 'label <name> <id>...'", lineno)
            name = parts[1]
            if name in labels:
                raise FormatError(f"duplicate label {name!r}", lineno)
            try:
                ids = tuple(int(p) for p in parts[2:])
            except ValueError:
                raise FormatError("label ids must be integers", lineno) from None
            for v in ids:
                if not 0 <= v < n:
                    raise FormatError(f"label {name!r} id {v} out of range", lineno)
            labels[name] = ids
        else:
            raise FormatError(f"unknown directive {kind!r}", lineno)
    if n is None:
        raise FormatError("missing 'graph <n>' header")
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n=n, adj=tuple(tuple(sorted(s)) for s in adj), labels=labels)
