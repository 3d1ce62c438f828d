"""Directed graphs on nodes 0..n-1 with the sibling and cycle machinery.

Adjacency is stored as one bitmask per node (bit v of ``rows[u]`` set iff
the edge u -> v exists), so node sets travel as plain ints internally and
as frozensets at the API surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator

from .errors import GraphFormatError

MAX_CANONICAL_NODES = 8  # factorial scan bound for canonical forms


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class DiGraph:
    """Immutable directed graph; ``rows[u]`` is the children bitmask of u."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        if len(self.rows) != self.n:
            raise ValueError("adjacency rows must match node count")
        full = (1 << self.n) - 1
        for row in self.rows:
            if row & ~full:
                raise ValueError("adjacency bit out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DiGraph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    # ---- basic queries ----

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.rows[u])]

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def children(self, k: int) -> frozenset[int]:
        self._check_node(k)
        return frozenset(_bits(self.rows[k]))

    def parents(self, k: int) -> frozenset[int]:
        return frozenset(_bits(self.parent_mask(k)))

    def parent_mask(self, k: int) -> int:
        self._check_node(k)
        mask = 0
        for u in range(self.n):
            mask |= (self.rows[u] >> k & 1) << u
        return mask

    def in_degree(self, k: int) -> int:
        return self.parent_mask(k).bit_count()

    def out_degree(self, k: int) -> int:
        self._check_node(k)
        return self.rows[k].bit_count()

    def ancestors(self, k: int) -> frozenset[int]:
        """Transitive closure of the parent relation starting from k.

        k itself is included only when it sits on a directed cycle through k.
        """
        seen = 0
        frontier = self.parent_mask(k)
        while frontier & ~seen:
            seen |= frontier
            nxt = 0
            for u in _bits(frontier):
                nxt |= self.parent_mask(u)
            frontier = nxt & ~seen
        return frozenset(_bits(seen))

    def siblings(self, k: int) -> frozenset[int]:
        """Nodes other than k that share at least one parent with k."""
        out = 0
        for p in _bits(self.parent_mask(k)):
            out |= self.rows[p]
        return frozenset(_bits(out & ~(1 << k)))

    def copa(self, nodes: Iterable[int]) -> frozenset[int]:
        """Union of pairwise common parents over the given node set."""
        masks = [self.parent_mask(v) for v in sorted(set(nodes))]
        out = 0
        for a in range(len(masks)):
            for b in range(a + 1, len(masks)):
                out |= masks[a] & masks[b]
        return frozenset(_bits(out))

    def has_self_loop(self) -> bool:
        return any(row >> u & 1 for u, row in enumerate(self.rows))

    def _check_node(self, k: int) -> None:
        if not (0 <= k < self.n):
            raise ValueError(f"node {k} out of range for n={self.n}")


@dataclass(frozen=True)
class Cycle:
    """A directed cycle as a tuple of distinct nodes, rotated so the
    smallest node comes first.  Length 1 means a self-loop."""

    nodes: tuple[int, ...]

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        if not nodes:
            raise ValueError("cycle must be nonempty")
        if len(set(nodes)) != len(nodes):
            raise ValueError("cycle nodes must be distinct")
        pivot = nodes.index(min(nodes))
        object.__setattr__(self, "nodes", nodes[pivot:] + nodes[:pivot])

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.nodes)

    def node_set(self) -> frozenset[int]:
        return frozenset(self.nodes)

    def successor(self, k: int) -> int:
        i = self.nodes.index(k)
        return self.nodes[(i + 1) % len(self.nodes)]

    def predecessor(self, k: int) -> int:
        i = self.nodes.index(k)
        return self.nodes[i - 1]


def enumerate_cycles(g: DiGraph) -> list[Cycle]:
    """All elementary directed cycles, each once up to rotation.

    Ordered by length, then lexicographically on the canonical rotation.
    """
    found: list[Cycle] = []
    rows = g.rows
    for start in range(g.n):
        if rows[start] >> start & 1:
            found.append(Cycle((start,)))
        # cycles whose minimal node is start: remaining nodes all > start
        path = [start]
        on_path = 1 << start

        def extend(u: int) -> None:
            nonlocal on_path
            if len(path) >= 2 and rows[u] >> start & 1:
                found.append(Cycle(tuple(path)))
            mask = rows[u] & ~on_path
            for v in _bits(mask):
                if v <= start:
                    continue
                path.append(v)
                on_path |= 1 << v
                extend(v)
                path.pop()
                on_path &= ~(1 << v)

        mask = rows[start]
        for v in _bits(mask):
            if v <= start:
                continue
            path.append(v)
            on_path |= 1 << v
            extend(v)
            path.pop()
            on_path &= ~(1 << v)
    found.sort(key=lambda c: (len(c.nodes), c.nodes))
    return found


def _require_cycle(g: DiGraph, c: Cycle) -> None:
    nodes = c.nodes
    for i, u in enumerate(nodes):
        v = nodes[(i + 1) % len(nodes)]
        if not g.has_edge(u, v):
            raise ValueError(f"{nodes} is not a cycle of the graph: missing edge {u}->{v}")


def is_induced_cycle(g: DiGraph, c: Cycle) -> bool:
    """True iff the subgraph induced on the cycle's nodes has no chords."""
    _require_cycle(g, c)
    mask = 0
    for v in c.nodes:
        mask |= 1 << v
    edge_count = sum((g.rows[v] & mask).bit_count() for v in c.nodes)
    return edge_count == len(c.nodes)


def is_soc(g: DiGraph) -> bool:
    """True iff every directed cycle contains a sibling pair, i.e. has a
    nonempty set of pairwise common parents (which may lie off the cycle).
    Acyclic graphs qualify vacuously; a self-loop never does."""
    for c in enumerate_cycles(g):
        if not g.copa(c.nodes):
            return False
    return True


def is_chordless_soc(g: DiGraph) -> bool:
    """True iff the graph is SOC and every directed cycle is induced."""
    cycles = enumerate_cycles(g)
    for c in cycles:
        if not g.copa(c.nodes):
            return False
    for c in cycles:
        if not is_induced_cycle(g, c):
            return False
    return True


def find_source(g: DiGraph) -> int | None:
    """Smallest node with no parents, or None."""
    for k in range(g.n):
        if g.parent_mask(k) == 0:
            return k
    return None


def copa_ancestor_closure(g: DiGraph, c: Cycle) -> frozenset[int]:
    """The cycle's common parents together with all their ancestors."""
    _require_cycle(g, c)
    base = g.copa(c.nodes)
    out = set(base)
    for v in base:
        out.update(g.ancestors(v))
    return frozenset(out)


def find_noncausal_cycle(g: DiGraph) -> Cycle | None:
    """First cycle (in enumeration order) whose common parents are nonempty
    and all lie on the cycle itself.  Such a cycle supports the game
    strategy that wins with certainty."""
    for c in enumerate_cycles(g):
        co = g.copa(c.nodes)
        if co and co <= c.node_set():
            return c
    return None


def induced_subgraph(g: DiGraph, nodes: Iterable[int]) -> DiGraph:
    """Subgraph on the given nodes, relabeled 0..m-1 in ascending id order."""
    kept = sorted(set(nodes))
    index = {v: i for i, v in enumerate(kept)}
    rows = []
    for v in kept:
        row = 0
        for w in _bits(g.rows[v]):
            if w in index:
                row |= 1 << index[w]
        rows.append(row)
    return DiGraph(len(kept), tuple(rows))


def relabel(g: DiGraph, perm: tuple[int, ...]) -> DiGraph:
    """Graph with node k renamed to perm[k]."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of the nodes")
    rows = [0] * g.n
    for u in range(g.n):
        for v in _bits(g.rows[u]):
            rows[perm[u]] |= 1 << perm[v]
    return DiGraph(g.n, tuple(rows))


# ---- canonical form ----
#
# The form is the row-major adjacency bit-string, minimized over all node
# permutations.  Packing the string into an int with the first character as
# the most significant bit makes string order and integer order agree.


def graph_code(g: DiGraph) -> int:
    n = g.n
    top = n * n - 1
    code = 0
    for u in range(n):
        for v in _bits(g.rows[u]):
            code |= 1 << (top - (u * n + v))
    return code


def graph_from_code(n: int, code: int) -> DiGraph:
    top = n * n - 1
    rows = [0] * n
    for u in range(n):
        for v in range(n):
            if code >> (top - (u * n + v)) & 1:
                rows[u] |= 1 << v
    return DiGraph(n, tuple(rows))


def canonical_code(g: DiGraph) -> int:
    if g.n > MAX_CANONICAL_NODES:
        raise ValueError(f"canonical form limited to n <= {MAX_CANONICAL_NODES}")
    n = g.n
    top = n * n - 1
    edges = g.edges()
    best = None
    for perm in permutations(range(n)):
        code = 0
        for u, v in edges:
            code |= 1 << (top - (perm[u] * n + perm[v]))
        if best is None or code < best:
            best = code
    return best if best is not None else 0


def canonical_form(g: DiGraph) -> str:
    """Lexicographically smallest row-major adjacency bit-string over all
    node relabelings; equal exactly for isomorphic graphs."""
    return format(canonical_code(g), f"0{g.n * g.n}b") if g.n else ""


# ---- text format ----
#
# First line: node count.  Every further non-empty line: "u v" for the edge
# u -> v.  Lines starting with '#' are comments.  Duplicate edges are errors.


def parse_graph(text: str) -> DiGraph:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    if not lines:
        raise GraphFormatError("empty graph file")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphFormatError(f"bad node count line: {lines[0]!r}") from None
    if n < 1:
        raise GraphFormatError("node count must be positive")
    rows = [0] * n
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"bad edge line: {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"bad edge line: {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
        if rows[u] >> v & 1:
            raise GraphFormatError(f"duplicate edge ({u},{v})")
        rows[u] |= 1 << v
    return DiGraph(n, tuple(rows))


def format_graph(g: DiGraph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"
