"""Graph families: paths, grids, products, tensor powers, polarity graphs, blowups.

Labelings (all 0-based):

* ``make_path(t)``: ``0 - 1 - ... - (t-1)``.
* ``cartesian_product(G, H)``: ``(u, v) -> u * H.n + v`` (row-major).
* ``make_grid(t, d)``: point ``(c_1, ..., c_d)`` of ``[t]^d`` gets its
  lexicographic rank, so ``make_grid(t, 2) == cartesian_product(P_t, P_t)``.
* tensor powers: a k-tuple ``x`` gets ``sum(x[j] * n**(k-1-j))``.
* ``polarity_graph(q)``: projective points in lexicographic order of their
  normalized representative (first non-zero coordinate equal to 1).
* ``blowup(G, r)``: clone ``c`` of ``v`` is ``v * r + c``.
* ``random_graph(n, p, seed)``: pairs ``u < v`` visited lexicographically,
  one draw of Python's MT19937 ``random.Random(seed).random()`` per pair.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from gridturan.errors import ResourceLimitError
from gridturan.graph import Graph

DEFAULT_VERTEX_CAP = 250_000

TensorVertex = tuple  # k-tuple of base vertex ids


def make_path(t: int) -> Graph:
    if t < 1:
        raise ValueError("a path needs at least one vertex")
    return Graph(t, [(i, i + 1) for i in range(t - 1)])


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least three vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def make_complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def make_star(leaves: int) -> Graph:
    """``K_{1,leaves}`` with centre 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cartesian_product(G: Graph, H: Graph) -> Graph:
    if G.n == 0 or H.n == 0:
        raise ValueError("cartesian product of an empty graph")
    nh = H.n
    edges = []
    for u in range(G.n):
        for a, b in H.edges:
            edges.append((u * nh + a, u * nh + b))
    for a, b in G.edges:
        for v in range(nh):
            edges.append((a * nh + v, b * nh + v))
    return Graph(G.n * nh, edges)


def make_grid(t: int, d: int = 2, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """The d-dimensional grid ``[t]^d``; ``make_grid(t)`` is the t x t grid."""
    if t < 1 or d < 1:
        raise ValueError("grid needs t >= 1 and d >= 1")
    n = t ** d
    if n > cap:
        raise ResourceLimitError(f"grid has {n} vertices, cap is {cap}")
    edges = []
    for v in range(n):
        stride = 1
        for _ in range(d):
            # coordinate with this stride can be bumped unless it is already t-1
            if (v // stride) % t < t - 1:
                edges.append((v, v + stride))
            stride *= t
    return Graph(n, edges)


@dataclass(frozen=True)
class TensorPowerView:
    """The k-th tensor power of ``base``.

    In implicit mode nothing is materialized and adjacency, degrees and
    codegrees are computed coordinate-wise; explicit mode additionally
    carries the materialized :class:`Graph` in ``graph``.
    """

    base: Graph
    k: int
    mode: str = "implicit"
    graph: Graph | None = field(default=None, compare=False, repr=False)

    @property
    def num_vertices(self) -> int:
        return self.base.n ** self.k

    def index(self, x: TensorVertex) -> int:
        i = 0
        for c in x:
            i = i * self.base.n + c
        return i

    def vertex(self, i: int) -> TensorVertex:
        n = self.base.n
        out = []
        for _ in range(self.k):
            i, c = divmod(i, n)
            out.append(c)
        return tuple(reversed(out))

    def check(self, x: TensorVertex) -> None:
        if len(x) != self.k:
            raise ValueError(f"tensor vertex {x} has {len(x)} coordinates, expected {self.k}")
        for c in x:
            if not 0 <= c < self.base.n:
                raise ValueError(f"coordinate {c} out of range")

    def adjacent(self, x: TensorVertex, y: TensorVertex) -> bool:
        nb = self.base.neighbour_sets()
        return all(b in nb[a] for a, b in zip(x, y))

    def degree(self, x: TensorVertex) -> int:
        d = 1
        for a in x:
            d *= self.base.degree(a)
        return d

    def coordinate_codegrees(self, x: TensorVertex, y: TensorVertex) -> list[int]:
        b = self.base.bits()
        return [(b[u] & b[v]).bit_count() for u, v in zip(x, y)]

    def codegree(self, x: TensorVertex, y: TensorVertex) -> int:
        d = 1
        for c in self.coordinate_codegrees(x, y):
            d *= c
        return d

    def neighbours(self, x: TensorVertex) -> Iterator[TensorVertex]:
        """Neighbours of ``x`` in lexicographic order."""
        return itertools.product(*(self.base.neighbours(a) for a in x))

    def common_neighbours(self, x: TensorVertex, y: TensorVertex) -> Iterator[TensorVertex]:
        nb = self.base.neighbour_sets()
        return itertools.product(*(sorted(nb[a] & nb[b]) for a, b in zip(x, y)))

    def vertices(self) -> Iterator[TensorVertex]:
        return itertools.product(range(self.base.n), repeat=self.k)

    def max_degree(self) -> int:
        return max(self.base.degrees(), default=0) ** self.k


def tensor_power(G: Graph, k: int, mode: str = "implicit", cap: int = DEFAULT_VERTEX_CAP) -> TensorPowerView:
    if k < 1:
        raise ValueError("tensor power needs k >= 1")
    if mode not in ("implicit", "explicit"):
        raise ValueError(f"unknown mode {mode!r}")
    view = TensorPowerView(G, k, mode)
    if mode == "implicit":
        return view
    if G.n ** k > cap:
        raise ResourceLimitError(f"G^{k} has {G.n ** k} vertices, cap is {cap}")
    edges = []
    for x in view.vertices():
        ix = view.index(x)
        for y in view.neighbours(x):
            iy = view.index(y)
            if ix < iy:
                edges.append((ix, iy))
    return TensorPowerView(G, k, mode, Graph(G.n ** k, edges))


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q ** 0.5) + 1))


def projective_points(q: int) -> list[tuple[int, int, int]]:
    pts = []
    for v in itertools.product(range(q), repeat=3):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def polarity_graph(q: int) -> Graph:
    """Erdos-Renyi polarity graph ``ER_q`` over GF(q), q prime.

    Points ``u != v`` are adjacent iff ``u . v == 0 (mod q)``; absolute points
    (``u . u == 0``) lose their loop and end up with degree ``q``.
    """
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    pts = projective_points(q)
    edges = []
    for i, u in enumerate(pts):
        for j in range(i + 1, len(pts)):
            v = pts[j]
            if (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) % q == 0:
                edges.append((i, j))
    return Graph(len(pts), edges)


def blowup(G: Graph, r: int) -> Graph:
    if r < 1:
        raise ValueError("blowup factor must be at least 1")
    edges = []
    for u, v in G.edges:
        for a in range(r):
            for b in range(r):
                edges.append((u * r + a, v * r + b))
    return Graph(G.n * r, edges)


def random_graph(n: int, p: float, seed: int = 0) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph(n, edges)
