"""Immutable simple graphs over dense integer vertex ids.

Besides the :class:`Graph` container this module holds the handful of
numeric queries every other module leans on (codegree, degree statistics,
edge density) together with the min-degree peeling routine and the
canonical edge-list text format used by the command line.

Edge-list format::

    # optional comment lines
    <n> <m>
    <u> <v>        (m lines, 0 <= u < v < n, lexicographically ascending)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from gridturan.errors import GraphFormatError


class Graph:
    """Simple undirected graph on vertices ``0 .. n-1``.

    Edges are stored once, as ``(u, v)`` with ``u < v``, sorted.  Instances
    are immutable and hashable; two graphs compare equal when they have the
    same vertex count and edge list.
    """

    __slots__ = ("n", "edges", "_adj", "_bits", "_sets")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise ValueError(f"duplicate edge {e}")
            norm.add(e)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._bits = None
        self._sets = None

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbours(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbour_sets()[u]

    def neighbour_sets(self) -> tuple[frozenset, ...]:
        if self._sets is None:
            self._sets = tuple(frozenset(a) for a in self._adj)
        return self._sets

    def bits(self) -> tuple[int, ...]:
        """Neighbourhoods as integer bitsets (bit ``w`` set iff ``w`` is adjacent)."""
        if self._bits is None:
            out = []
            for a in self._adj:
                b = 0
                for w in a:
                    b |= 1 << w
                out.append(b)
            self._bits = tuple(out)
        return self._bits

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        if self.edges:
            e = np.asarray(self.edges)
            a[e[:, 0], e[:, 1]] = 1
            a[e[:, 1], e[:, 0]] = 1
        return a

    def codegree_matrix(self) -> np.ndarray:
        """``A @ A``; the diagonal holds the degrees, matching :func:`codegree`."""
        a = self.adjacency_matrix()
        return a @ a

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph induced on ``vertices``, relabelled ``0..len-1`` in ascending order.

        Returns the graph and the tuple mapping new ids back to old ones.
        """
        keep = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(keep)}
        sub_edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), sub_edges), keep

    def without_isolated(self) -> tuple["Graph", tuple[int, ...]]:
        return self.induced_subgraph(v for v in range(self.n) if self._adj[v])

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _check_vertex(G: Graph, u: int) -> None:
    if not 0 <= u < G.n:
        raise ValueError(f"vertex {u} out of range for n={G.n}")


def codegree(G: Graph, u: int, v: int) -> int:
    """Number of common neighbours of ``u`` and ``v``; ``codegree(G, u, u) == deg(u)``."""
    _check_vertex(G, u)
    _check_vertex(G, v)
    b = G.bits()
    return (b[u] & b[v]).bit_count()


@dataclass(frozen=True)
class DegreeStats:
    min_deg: int
    avg_deg: Fraction
    max_deg: int


def degree_stats(G: Graph) -> DegreeStats:
    if G.n == 0:
        raise ValueError("degree statistics of the empty graph are undefined")
    d = G.degrees()
    return DegreeStats(min(d), Fraction(2 * G.m, G.n), max(d))


def edge_density_alpha(G: Graph) -> float:
    """Density coefficient ``e(G) / n^{3/2}`` as a float.

    Threshold comparisons elsewhere never go through this float; they use
    :func:`alpha_squared` or rational rewrites such as ``alpha*sqrt(n)/4 == e/(4n)``.
    """
    if G.n == 0:
        raise ValueError("density of the empty graph is undefined")
    return G.m / G.n ** 1.5


def alpha_squared(G: Graph) -> Fraction:
    """Exact square of :func:`edge_density_alpha`, i.e. ``e^2 / n^3``."""
    if G.n == 0:
        raise ValueError("density of the empty graph is undefined")
    return Fraction(G.m * G.m, G.n ** 3)


def ceil_sqrt(x: Fraction | int) -> int:
    """Smallest integer ``c >= 0`` with ``c*c >= x`` (exact)."""
    x = Fraction(x)
    if x <= 0:
        return 0
    c = math.isqrt(math.floor(x))
    while c * c < x:
        c += 1
    return c


class PeelResult(NamedTuple):
    graph: Graph
    vertices: tuple[int, ...]  # original ids of the surviving vertices

    @property
    def empty(self) -> bool:
        return self.graph.n == 0


def peel_min_degree(G: Graph, threshold) -> PeelResult:
    """Repeatedly delete vertices of current degree below ``threshold``.

    The threshold is fixed for the whole run.  The survivors induce a graph of
    minimum degree at least ``threshold``, or nothing survives.
    """
    thr = Fraction(threshold)
    if thr < 0:
        raise ValueError("threshold must be non-negative")
    deg = G.degrees()
    alive = [True] * G.n
    stack = [v for v in range(G.n) if deg[v] < thr]
    for v in stack:
        alive[v] = False
    while stack:
        v = stack.pop()
        for w in G.neighbours(v):
            if alive[w]:
                deg[w] -= 1
                if deg[w] < thr:
                    alive[w] = False
                    stack.append(w)
    H, keep = G.induced_subgraph(v for v in range(G.n) if alive[v])
    return PeelResult(H, keep)


# -- canonical edge-list text format ------------------------------------------


def format_graph(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise GraphFormatError(f"expected {count} integers", lineno)
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise GraphFormatError("non-integer token", lineno) from None
    return vals


def parse_graph(text: str) -> Graph:
    """Parse the canonical edge-list format, rejecting anything non-canonical."""
    header = None
    edges: list[tuple[int, int]] = []
    prev = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            n, m = _ints(line, lineno, 2)
            if n < 0 or m < 0:
                raise GraphFormatError("negative header value", lineno)
            header = (n, m)
            continue
        u, v = _ints(line, lineno, 2)
        n = header[0]
        if u == v:
            raise GraphFormatError("self-loop", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError("vertex out of range", lineno)
        if u > v:
            raise GraphFormatError("edge not written as u < v", lineno)
        if prev is not None:
            if (u, v) == prev:
                raise GraphFormatError("duplicate edge", lineno)
            if (u, v) < prev:
                raise GraphFormatError("edges not sorted", lineno)
        prev = (u, v)
        edges.append((u, v))
    if header is None:
        raise GraphFormatError("missing header line", 1)
    if len(edges) != header[1]:
        raise GraphFormatError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph(header[0], edges)


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(G: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(G))


def relabel(G: Graph, mapping: Sequence[int], n: int) -> Graph:
    """Image of ``G`` under an injective vertex map into ``range(n)``."""
    return Graph(n, [(mapping[u], mapping[v]) for u, v in G.edges])
