"""Undirected labelled graphs on vertices 1..n.

Provides the small amount of graph machinery the rest of the package needs:
chordality testing via maximum cardinality search, clique-tree decompositions
ordered so that running intersections are honoured, maximal cliques, and the
classification of a non-adjacent vertex pair by how the remaining vertices
attach to its endpoints.

Vertices are 1-based everywhere in this package; edges are stored as sorted
tuples (mu, nu) with mu < nu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, int]


class NotChordalError(ValueError):
    """Raised when an operation requires a chordal graph and the input is not."""


def normalize_edge(mu: int, nu: int) -> Edge:
    if mu == nu:
        raise ValueError(f"self-loop at vertex {mu}")
    return (mu, nu) if mu < nu else (nu, mu)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on vertices 1..n."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one vertex, got n={self.n}")
        for mu, nu in self.edges:
            if not (1 <= mu < nu <= self.n):
                raise ValueError(f"edge {(mu, nu)} out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        normalized = []
        for mu, nu in edges:
            e = normalize_edge(int(mu), int(nu))
            if e in normalized:
                raise ValueError(f"duplicate edge {e}")
            normalized.append(e)
        return cls(n, frozenset(normalized))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset(combinations(range(1, n + 1), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, frozenset((v, v + 1) for v in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        return cls(n, frozenset((v, v + 1) for v in range(1, n)) | {(1, n)})

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_list(self) -> list[Edge]:
        """Edges in lexicographic order."""
        return sorted(self.edges)

    def adjacent(self, mu: int, nu: int) -> bool:
        return normalize_edge(mu, nu) in self.edges

    def neighbors(self, v: int) -> set[int]:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} out of range for n={self.n}")
        out = set()
        for mu, nu in self.edges:
            if mu == v:
                out.add(nu)
            elif nu == v:
                out.add(mu)
        return out

    def non_edges(self) -> list[Edge]:
        """Non-adjacent vertex pairs, lexicographic."""
        return [e for e in combinations(self.vertices, 2) if e not in self.edges]

    def add_edge(self, mu: int, nu: int) -> "Graph":
        e = normalize_edge(mu, nu)
        if e in self.edges:
            raise ValueError(f"edge {e} already present")
        return Graph(self.n, self.edges | {e})

    def remove_edge(self, mu: int, nu: int) -> "Graph":
        e = normalize_edge(mu, nu)
        if e not in self.edges:
            raise ValueError(f"edge {e} not present")
        return Graph(self.n, self.edges - {e})

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


@dataclass(frozen=True)
class CliqueDecomposition:
    """Maximal cliques of a chordal graph in a running-intersection order.

    separators[k] is the intersection of cliques[k + 1] with the union of all
    earlier cliques, and is itself contained in a single earlier clique.
    """

    cliques: tuple[frozenset[int], ...]
    separators: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class PairClassification:
    """Counts of how the other n - 2 vertices attach to a fixed pair (v1, v2).

    s: adjacent to both, y: only to v1, x: only to v2, w: to neither.
    """

    w: int
    x: int
    y: int
    s: int


def is_chordal(g: Graph) -> tuple[bool, list[int] | None]:
    """Maximum cardinality search.

    Returns (True, peo) with a perfect elimination ordering when g is chordal,
    (False, None) otherwise.  Ties in the search are broken toward the
    smallest vertex label, so the ordering is deterministic.
    """
    weight = {v: 0 for v in g.vertices}
    unvisited = set(g.vertices)
    visit_order: list[int] = []
    while unvisited:
        v = min(unvisited, key=lambda u: (-weight[u], u))
        visit_order.append(v)
        unvisited.discard(v)
        for u in g.neighbors(v):
            if u in unvisited:
                weight[u] += 1
    peo = list(reversed(visit_order))
    return (True, peo) if _is_perfect_elimination(g, peo) else (False, None)


def _is_perfect_elimination(g: Graph, order: Sequence[int]) -> bool:
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [u for u in g.neighbors(v) if pos[u] > pos[v]]
        for a, b in combinations(later, 2):
            if not g.adjacent(a, b):
                return False
    return True


def clique_decomposition(g: Graph, peo: Sequence[int] | None = None) -> CliqueDecomposition:
    """Clique tree of a chordal graph, flattened to a RIP-ordered sequence.

    The maximal cliques are read off the elimination ordering, sorted by their
    vertex tuples, then arranged by growing a maximum-weight spanning tree of
    the clique intersection graph from the first clique (ties toward lower
    clique index).  Separators are the running intersections.
    """
    if peo is None:
        return _default_decomposition(g)
    peo = list(peo)
    if sorted(peo) != list(g.vertices):
        raise ValueError("ordering must list every vertex exactly once")
    if not _is_perfect_elimination(g, peo):
        raise NotChordalError("ordering is not a perfect elimination ordering")
    return _decompose(g, peo)


@lru_cache(maxsize=None)
def _default_decomposition(g: Graph) -> CliqueDecomposition:
    ok, peo = is_chordal(g)
    if not ok:
        raise NotChordalError("graph is not chordal")
    return _decompose(g, peo)


def _decompose(g: Graph, peo: Sequence[int]) -> CliqueDecomposition:
    pos = {v: i for i, v in enumerate(peo)}
    candidates = []
    for v in peo:
        c = frozenset({v} | {u for u in g.neighbors(v) if pos[u] > pos[v]})
        if c not in candidates:
            candidates.append(c)
    maximal = [c for c in candidates if not any(c < other for other in candidates)]
    maximal.sort(key=lambda c: tuple(sorted(c)))

    # Grow a maximum-weight spanning tree over the clique intersection graph,
    # recording cliques in the order they attach.  Any such order satisfies
    # the running intersection property.
    order = [0]
    parent = {0: None}
    remaining = set(range(1, len(maximal)))
    while remaining:
        best = None
        for i in sorted(remaining):
            for j in order:
                key = (len(maximal[i] & maximal[j]), -i, -j)
                if best is None or key > best[0]:
                    best = (key, i, j)
        _, i, j = best
        order.append(i)
        parent[i] = j
        remaining.discard(i)

    cliques = tuple(maximal[i] for i in order)
    separators = []
    seen: set[int] = set(cliques[0])
    for k, i in enumerate(order[1:], start=1):
        sep = cliques[k] & seen
        if sep != cliques[k] & maximal[parent[i]]:
            raise RuntimeError("running intersection property violated")
        separators.append(frozenset(sep))
        seen |= cliques[k]
    return CliqueDecomposition(cliques, tuple(separators))


def maximal_cliques(g: Graph) -> list[frozenset[int]]:
    """All maximal cliques (Bron-Kerbosch with pivoting), sorted canonically."""
    out: list[frozenset[int]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: (len(g.neighbors(u) & p), -u))
        for v in sorted(p - g.neighbors(pivot)):
            nv = g.neighbors(v)
            expand(r | {v}, p & nv, x & nv)
            p.discard(v)
            x.add(v)

    expand(set(), set(g.vertices), set())
    return sorted(out, key=lambda c: tuple(sorted(c)))


def classify_pair(g: Graph, v1: int, v2: int) -> PairClassification:
    """Split the other vertices by adjacency to the non-adjacent pair (v1, v2)."""
    if not (1 <= v1 <= g.n and 1 <= v2 <= g.n):
        raise ValueError(f"pair ({v1}, {v2}) out of range for n={g.n}")
    if v1 == v2:
        raise ValueError("pair must be two distinct vertices")
    if g.adjacent(v1, v2):
        raise ValueError(f"pair ({v1}, {v2}) is an edge; classification needs a non-edge")
    n1, n2 = g.neighbors(v1), g.neighbors(v2)
    others = set(g.vertices) - {v1, v2}
    s = len(others & n1 & n2)
    y = len(others & n1 - n2)
    x = len(others & n2 - n1)
    w = len(others) - s - x - y
    return PairClassification(w=w, x=x, y=y, s=s)


def common_neighbor_count(g: Graph, mu: int, nu: int) -> int:
    """Number of common neighbours of the endpoints of the edge (mu, nu)."""
    e = normalize_edge(mu, nu)
    if e not in g.edges:
        raise ValueError(f"({mu}, {nu}) is not an edge")
    return len(g.neighbors(e[0]) & g.neighbors(e[1]))


def parse_graph_text(text: str) -> Graph:
    """Parse the two-part text format: a header line "n m" and m edge lines."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty graph description")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"header must be 'n m', got {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ValueError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"edge line must be 'mu nu', got {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n, edges)


def parse_graph_inline(text: str) -> Graph:
    """Parse the inline form "n:4;edges:1-2,2-3,3-4,4-1"."""
    n: int | None = None
    edges: list[tuple[int, int]] = []
    for part in text.strip().split(";"):
        part = part.strip()
        if not part:
            continue
        key, _, value = part.partition(":")
        key = key.strip()
        if key == "n":
            n = int(value)
        elif key == "edges":
            for item in value.split(","):
                item = item.strip()
                if not item:
                    continue
                a, sep, b = item.partition("-")
                if not sep:
                    raise ValueError(f"edge {item!r} must look like 'mu-nu'")
                edges.append((int(a), int(b)))
        else:
            raise ValueError(f"unknown key {key!r} in graph description")
    if n is None:
        raise ValueError("graph description must give n")
    return Graph.from_edges(n, edges)


def parse_graph(spec: str) -> Graph:
    """Dispatch between the inline form and the multi-line text format."""
    if spec.lstrip().startswith("n:"):
        return parse_graph_inline(spec)
    return parse_graph_text(spec)


def graph_to_text(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{mu} {nu}" for mu, nu in g.edge_list)
    return "\n".join(lines) + "\n"
