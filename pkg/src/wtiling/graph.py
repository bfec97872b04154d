"""(Gamma, Sigma)-graphs: vertex-labelled graphs with named edges.

Vertices are the dense ids ``0..n-1``.  For every edge name a vertex has at
most one outgoing and at most one incoming edge of that name, which makes
the neighbourhood of a vertex a fixed-shape record (its *tile*).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

RIGHT = "right"
DOWN = "down"
GRID_GAMMA = (RIGHT, DOWN)


class GraphError(ValueError):
    """A graph failed validation.  ``vertex`` / ``edge`` point at the culprit."""

    def __init__(self, message, vertex=None, edge=None):
        super().__init__(message)
        self.vertex = vertex
        self.edge = edge


@dataclass(frozen=True)
class Signature:
    gamma: tuple
    sigma: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "sigma", tuple(self.sigma))
        for what, names in (("gamma", self.gamma), ("sigma", self.sigma)):
            if not names:
                raise GraphError(f"signature {what} must be nonempty")
            if len(set(names)) != len(names):
                raise GraphError(f"signature {what} has duplicate names")
            for x in names:
                if not isinstance(x, str):
                    raise GraphError(f"signature {what} entries must be strings: {x!r}")


class VertexType(NamedTuple):
    incoming: frozenset
    outgoing: frozenset


class Graph:
    """An immutable, validated (Gamma, Sigma)-graph."""

    __slots__ = ("signature", "labels", "edges", "_out", "_in", "_adj", "_names")

    def __init__(self, signature: Signature, labels: Sequence[str],
                 edges: Iterable[tuple]):
        self.signature = signature
        self.labels = tuple(labels)
        n = len(self.labels)
        sigma = set(signature.sigma)
        for v, a in enumerate(self.labels):
            if a not in sigma:
                raise GraphError(f"vertex {v}: label {a!r} not in sigma", vertex=v)

        out = {g: {} for g in signature.gamma}
        inc = {g: {} for g in signature.gamma}
        seen = set()
        for e in edges:
            name, src, dst = e
            if name not in out:
                raise GraphError(f"edge {e}: unknown edge name {name!r}", edge=e)
            for x in (src, dst):
                if not (isinstance(x, int) and 0 <= x < n):
                    raise GraphError(f"edge {e}: undeclared vertex {x!r}", vertex=x, edge=e)
            if src == dst:
                raise GraphError(f"edge {e}: self-loop at vertex {src}", vertex=src, edge=e)
            if (name, src, dst) in seen:
                raise GraphError(f"edge {e}: duplicate edge", edge=e)
            seen.add((name, src, dst))
            if src in out[name]:
                raise GraphError(
                    f"vertex {src}: two outgoing {name!r}-edges", vertex=src, edge=e)
            if dst in inc[name]:
                raise GraphError(
                    f"vertex {dst}: two incoming {name!r}-edges", vertex=dst, edge=e)
            out[name][src] = dst
            inc[name][dst] = src

        gindex = {g: i for i, g in enumerate(signature.gamma)}
        self.edges = tuple(sorted(seen, key=lambda t: (gindex[t[0]], t[1], t[2])))
        self._out = out
        self._in = inc
        self._names = tuple(sorted(signature.gamma))
        adj = [set() for _ in range(n)]
        for _, s, d in self.edges:
            adj[s].add(d)
            adj[d].add(s)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    def __len__(self):
        return len(self.labels)

    @property
    def vertices(self) -> range:
        return range(len(self.labels))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.signature == other.signature and self.labels == other.labels
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.signature, self.labels, self.edges))

    def __repr__(self):
        return f"Graph(|V|={len(self)}, |E|={len(self.edges)})"

    def _check_vertex(self, v):
        if not (isinstance(v, int) and 0 <= v < len(self.labels)):
            raise GraphError(f"unknown vertex {v!r}", vertex=v)

    def label(self, v) -> str:
        self._check_vertex(v)
        return self.labels[v]

    def neighbors(self, v) -> tuple:
        """Vertices joined to ``v`` by an edge of any name or direction."""
        self._check_vertex(v)
        return self._adj[v]

    def edge_endpoint(self, v, name: str, direction: str) -> Optional[int]:
        """The unique neighbour of ``v`` along ``name`` (``"in"`` or ``"out"``)."""
        self._check_vertex(v)
        if name not in self._out:
            raise GraphError(f"unknown edge name {name!r}")
        if direction == "out":
            return self._out[name].get(v)
        if direction == "in":
            return self._in[name].get(v)
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")

    def in_edges(self, v):
        """``(name, source)`` pairs of the incoming edges of ``v``, sorted by name."""
        return [(g, self._in[g][v]) for g in self._names if v in self._in[g]]

    def out_edges(self, v):
        return [(g, self._out[g][v]) for g in self._names if v in self._out[g]]

    def vertex_type(self, v) -> VertexType:
        self._check_vertex(v)
        gamma = self.signature.gamma
        return VertexType(frozenset(g for g in gamma if v in self._in[g]),
                          frozenset(g for g in gamma if v in self._out[g]))


def build_graph(signature: Signature, vertices, labels, edges) -> Graph:
    """Validate raw lists into a :class:`Graph`.

    ``vertices`` must be ``0..n-1`` (in any order); ``labels`` maps each vertex
    id to its label (a dict or a sequence indexed by id).
    """
    vertices = list(vertices)
    n = len(vertices)
    if sorted(vertices) != list(range(n)):
        bad = next((v for v in vertices
                    if not (isinstance(v, int) and 0 <= v < n) or vertices.count(v) > 1), None)
        raise GraphError(f"vertex ids must be exactly 0..{n - 1}", vertex=bad)
    if isinstance(labels, dict):
        missing = [v for v in range(n) if v not in labels]
        if missing:
            raise GraphError(f"vertex {missing[0]} has no label", vertex=missing[0])
        extra = [v for v in labels if v not in range(n)]
        if extra:
            raise GraphError(f"label for undeclared vertex {extra[0]!r}", vertex=extra[0])
        labels = [labels[v] for v in range(n)]
    elif len(labels) != n:
        raise GraphError(f"expected {n} labels, got {len(labels)}")
    return Graph(signature, labels, edges)


def vertex_type(G: Graph, v) -> VertexType:
    return G.vertex_type(v)


def edge_endpoint(G: Graph, v, name, direction):
    return G.edge_endpoint(v, name, direction)


def _grid_sigma(labels, sigma):
    if sigma is not None:
        return tuple(sigma)
    used = {a for row in labels for a in row}
    return ("0", "1") if used <= {"0", "1"} else tuple(sorted(used))


def grid_graph(m: int, n: int, labels, sigma=None) -> Graph:
    """An ``m x n`` grid; vertex ``(i, j)`` has id ``i * n + j``.

    ``RIGHT`` edges run ``(i, j) -> (i, j+1)`` and ``DOWN`` edges run
    ``(i, j) -> (i+1, j)``.  Labels are converted with ``str``.
    """
    if m < 1 or n < 1:
        raise GraphError(f"grid dimensions must be positive, got {m}x{n}")
    labels = [[str(a) for a in row] for row in labels]
    if len(labels) != m or any(len(row) != n for row in labels):
        raise GraphError(f"label matrix does not have shape {m}x{n}")
    edges = []
    for i in range(m):
        for j in range(n):
            v = i * n + j
            if j + 1 < n:
                edges.append((RIGHT, v, v + 1))
            if i + 1 < m:
                edges.append((DOWN, v, v + n))
    flat = [a for row in labels for a in row]
    return Graph(Signature(GRID_GAMMA, _grid_sigma(labels, sigma)), flat, edges)


def triangular_layout(n: int):
    """Vertex ids of the triangular adjacency grid of an ``n``-vertex graph.

    Returns a dict mapping ``(x, y)`` with ``x <= y`` to a vertex id; ``(x, x)``
    is the diagonal vertex of original vertex ``x`` and ``(x, y)`` with
    ``x < y`` the cell for the pair ``{x, y}``.  Ids are assigned row by row.
    """
    ids = {}
    for x in range(n):
        for y in range(x, n):
            ids[(x, y)] = len(ids)
    return ids


def triangular_grid(adjacency) -> Graph:
    """Encode an undirected graph as its triangular adjacency grid.

    Row ``x`` runs along ``RIGHT`` edges from the diagonal vertex ``(x, x)``
    through the cells ``(x, x+1) .. (x, n-1)``; column ``y`` runs along
    ``DOWN`` edges from ``(y, y)`` through ``(y-1, y) .. (0, y)``.  Every
    off-diagonal cell therefore receives its ``RIGHT`` edge from the side of
    its row's diagonal vertex and its ``DOWN`` edge from the side of its
    column's diagonal vertex; diagonal vertices have no incoming edges.
    """
    adj = [[bool(a) for a in row] for row in adjacency]
    n = len(adj)
    if any(len(row) != n for row in adj):
        raise GraphError("adjacency matrix must be square")
    for x in range(n):
        for y in range(n):
            if adj[x][y] != adj[y][x]:
                raise GraphError(f"adjacency matrix not symmetric at ({x}, {y})")
    ids = triangular_layout(n)
    labels = [None] * len(ids)
    for (x, y), v in ids.items():
        labels[v] = "1" if x == y or adj[x][y] else "0"
    edges = []
    for (x, y), v in ids.items():
        if y + 1 < n:
            edges.append((RIGHT, v, ids[(x, y + 1)]))
        if x >= 1:
            edges.append((DOWN, v, ids[(x - 1, y)]))
    return Graph(Signature(GRID_GAMMA, ("0", "1")), labels, edges)


def path_graph(labels, name="succ", sigma=None) -> Graph:
    """A directed path ``0 -> 1 -> ... -> n-1`` along edge name ``name``."""
    labels = [str(a) for a in labels]
    sigma = tuple(sigma) if sigma is not None else tuple(sorted(set(labels) | {"0", "1"}))
    edges = [(name, i, i + 1) for i in range(len(labels) - 1)]
    return Graph(Signature((name,), sigma), labels, edges)
