"""Host-graph preparation.

Three host conditions with parameters ``(alpha, K = 12000)`` on an m-vertex
graph are what the ladder machinery consumes:

(a) ``e >= alpha * m^{3/2}``
(b) ``max degree <= K * alpha * m^{1/2}``
(c) for every edge, in both orientations ``(u, v)``: ``u`` has at least
    ``alpha * m^{1/2}`` neighbours ``w`` with ``codegree(v, w) >= alpha``.

Every comparison is done exactly.  ``alpha`` is handled through its square,
which is rational for all values produced here (densities ``e/m^{3/2}`` and
certified constants), so irrational square roots never get rounded.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from gridturan.graph import Graph, ceil_sqrt

HOST_K = 12000


def jiang_seiver_K(eps: float) -> float:
    """Almost-regularity constant ``20 * 2^(1/eps^2 + 1)`` (640 at ``eps = 1/2``)."""
    return 20 * 2 ** (1 / eps ** 2 + 1)


# -- regularization -----------------------------------------------------------


@dataclass(frozen=True)
class RegularizeResult:
    graph: Graph
    vertices: tuple[int, ...]  # original ids
    K: Fraction  # max degree / min degree of ``graph``
    degree_class: int  # chosen class [2^i, 2^(i+1))


def regularize(G: Graph) -> RegularizeResult:
    """Dyadic degree-class selection.

    Vertices are split into classes ``[2^i, 2^(i+1))`` by degree.  For each
    class ``C`` the subgraph induced on ``C`` and its neighbourhood is formed
    (it keeps every edge incident to ``C``); the one with most edges wins,
    lowest class first on ties.  Since at most ``ceil(log2 n)`` classes are
    non-empty, the winner keeps at least ``e / ceil(log2 n)`` edges.
    """
    if G.m == 0:
        raise ValueError("regularize needs at least one edge")
    classes: dict[int, list[int]] = {}
    for v in range(G.n):
        d = G.degree(v)
        if d:
            classes.setdefault(d.bit_length() - 1, []).append(v)
    best = None
    for i in sorted(classes):
        span = set(classes[i])
        for v in classes[i]:
            span.update(G.neighbours(v))
        H, keep = G.induced_subgraph(span)
        if best is None or H.m > best[0].m:
            best = (H, keep, i)
    H, keep, i = best
    degs = H.degrees()
    return RegularizeResult(H, keep, Fraction(max(degs), min(degs)), i)


# -- exact cleaning -----------------------------------------------------------


@dataclass
class CleaningReport:
    """Ordered deletion log of :func:`clean_subgraph`.

    ``events`` holds ``("T1", v, removed)`` and ``("T2", u, v)`` entries in
    the order they were applied; a type-2 entry names the deficient endpoint
    ``u`` first.
    """

    n: int
    input_edges: int
    input_alpha_sq: Fraction
    events: list[tuple] = field(default_factory=list)
    output_edges: int = 0

    @property
    def input_alpha(self) -> float:
        return math.sqrt(self.input_alpha_sq)

    @property
    def type1_deletions(self) -> list[tuple[int, int]]:
        return [(e[1], e[2]) for e in self.events if e[0] == "T1"]

    @property
    def type2_deletions(self) -> list[tuple[int, int]]:
        return [(e[1], e[2]) for e in self.events if e[0] == "T2"]

    def lines(self) -> list[str]:
        return [f"T1 {e[1]}" if e[0] == "T1" else f"T2 {e[1]} {e[2]}" for e in self.events]


@dataclass(frozen=True)
class CleaningThresholds:
    """Integer forms of the three cleaning thresholds for fixed ``(n, e)``.

    With ``alpha = e / n^{3/2}``:  ``alpha n^{1/2} / 4 = e / 4n``,
    ``alpha n^{1/2} / 8 = e / 8n`` and ``alpha^2 / 32 = e^2 / 32 n^3``.
    """

    type1_max_degree: int  # type 1 fires on 1 <= deg <= this
    min_good_neighbours: int  # a count passes iff >= this
    min_codegree: int  # a codegree passes iff >= this

    @classmethod
    def for_graph(cls, n: int, e: int) -> "CleaningThresholds":
        return cls(
            math.floor(Fraction(e, 4 * n)),
            math.ceil(Fraction(e, 8 * n)),
            math.ceil(Fraction(e * e, 32 * n ** 3)),
        )


def clean_subgraph(G: Graph, rng: random.Random | None = None) -> tuple[Graph, CleaningReport]:
    """Delete edges until every surviving edge is well supported.

    At each step a vertex ``u`` with ``1 <= deg(u) <= alpha n^{1/2} / 4``
    loses all its edges (type 1).  Only when no such vertex exists, an edge
    ``uv`` where ``u`` has fewer than ``alpha n^{1/2} / 8`` neighbours ``w``
    with ``codegree(v, w) >= alpha^2 / 32`` is removed (type 2); ``w = v``
    counts, with ``codegree(v, v) = deg(v)``.  ``alpha`` is fixed from the
    input.  Candidates are taken lowest vertex / lexicographically smallest
    ordered edge first, or uniformly at random when ``rng`` is given.
    """
    n, e0 = G.n, G.m
    report = CleaningReport(n, e0, Fraction(e0 * e0, n ** 3) if n else Fraction(0))
    if e0 == 0:
        return G, report
    thr = CleaningThresholds.for_graph(n, e0)
    # float64 matmuls are exact here (entries <= n^2 << 2^53) and hit BLAS
    A = G.adjacency_matrix(dtype=np.float64)
    deg = A.sum(axis=1)
    while True:
        t1 = np.flatnonzero((deg >= 1) & (deg <= thr.type1_max_degree))
        if t1.size:
            u = int(t1[0] if rng is None else rng.choice(list(t1)))
            nbrs = np.flatnonzero(A[u])
            A[u, nbrs] = 0
            A[nbrs, u] = 0
            deg[nbrs] -= 1
            deg[u] = 0
            report.events.append(("T1", u, int(nbrs.size)))
            continue
        C = A @ A
        good = (C >= thr.min_codegree).astype(np.float64)
        counts = A @ good  # counts[u, v] = #{w in N(u) : codegree(w, v) passes}
        bad = np.argwhere((A > 0) & (counts < thr.min_good_neighbours))
        if bad.size == 0:
            break
        u, v = bad[0] if rng is None else bad[rng.randrange(len(bad))]
        u, v = int(u), int(v)
        A[u, v] = A[v, u] = 0
        deg[u] -= 1
        deg[v] -= 1
        report.events.append(("T2", u, v))
    rows, cols = np.nonzero(np.triu(A))
    H = Graph(n, zip(rows.tolist(), cols.tolist()))
    report.output_edges = H.m
    return H, report


def replay_cleaning(G: Graph, report: CleaningReport) -> Graph:
    """Apply a deletion log to ``G`` and return the result."""
    adj = [set(G.neighbours(v)) for v in range(G.n)]
    for ev in report.events:
        if ev[0] == "T1":
            u = ev[1]
            if len(adj[u]) != ev[2]:
                raise ValueError(f"type-1 entry for {u} expects {ev[2]} edges, found {len(adj[u])}")
            for w in adj[u]:
                adj[w].discard(u)
            adj[u].clear()
        else:
            u, v = ev[1], ev[2]
            if v not in adj[u]:
                raise ValueError(f"type-2 entry ({u}, {v}) is not an edge")
            adj[u].discard(v)
            adj[v].discard(u)
    return Graph(G.n, [(u, v) for u in range(G.n) for v in adj[u] if u < v])


# -- host conditions ----------------------------------------------------------


@dataclass
class HostReport:
    """Outcome of checking conditions (a)-(c) for one ``alpha``."""

    alpha_sq: Fraction
    K: int
    a: bool
    b: bool
    c: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_sq)

    @property
    def ok(self) -> bool:
        return self.a and self.b and self.c

    def failed(self) -> list[str]:
        return [name for name in "abc" if not getattr(self, name)]


def _good_neighbour_counts(G: Graph, min_codegree: int) -> np.ndarray:
    A = G.adjacency_matrix(dtype=np.float64)
    good = (A @ A >= min_codegree).astype(np.float64)
    return A, A @ good


def check_host_conditions_sq(G: Graph, alpha_sq, K: int = HOST_K) -> HostReport:
    """Check (a)-(c) for the ``alpha`` whose square is ``alpha_sq``."""
    a2 = Fraction(alpha_sq)
    if a2 <= 0:
        raise ValueError("alpha must be positive")
    m, e = G.n, G.m
    degs = G.degrees()
    rep = HostReport(a2, K, True, True, True)
    if Fraction(e * e) < a2 * m ** 3:
        rep.a = False
        rep.witnesses["a"] = {"edges": e, "required_sq": a2 * m ** 3}
    dmax = max(degs, default=0)
    if Fraction(dmax * dmax) > K * K * a2 * m:
        rep.b = False
        rep.witnesses["b"] = {"vertex": degs.index(dmax), "degree": dmax}
    if e:
        A, counts = _good_neighbour_counts(G, ceil_sqrt(a2))
        bad = np.argwhere((A > 0) & (counts < ceil_sqrt(a2 * m)))
        if bad.size:
            u, v = (int(x) for x in bad[0])
            rep.c = False
            rep.witnesses["c"] = {"edge": (u, v), "good_neighbours": int(counts[u, v])}
    return rep


def check_host_conditions(G: Graph, alpha, K: int = HOST_K) -> HostReport:
    a = Fraction(alpha)
    if a <= 0:
        raise ValueError("alpha must be positive")
    return check_host_conditions_sq(G, a * a, K)


def certified_alpha_sq(G: Graph) -> Fraction:
    """Square of the largest ``alpha`` for which (a) and (c) hold on ``G``.

    For an ordered edge ``(u, v)`` let ``c_1 >= c_2 >= ...`` be the codegrees
    ``codegree(v, w)`` over ``w`` in ``N(u)``.  Condition (c) holds at
    ``alpha`` iff some ``j`` has ``c_j >= alpha`` and ``j >= alpha sqrt(m)``,
    so the edge supports ``alpha^2 = max_j min(c_j^2, j^2/m)``.
    """
    m, e = G.n, G.m
    if e == 0:
        return Fraction(0)
    best = Fraction(e * e, m ** 3)
    C = G.codegree_matrix()
    j2 = np.arange(1, m + 1, dtype=np.int64) ** 2
    for u in range(m):
        nb = np.asarray(G.neighbours(u))
        rows = -np.sort(-C[np.ix_(nb, nb)], axis=1)  # row v: codegrees (v, w), w in N(u)
        vals = np.minimum(m * rows * rows, j2[: len(nb)]).max(axis=1)
        worst = int(vals.min())
        if Fraction(worst, m) < best:
            best = Fraction(worst, m)
    return best


@dataclass
class PreparedHost:
    graph: Graph
    vertices: tuple[int, ...]  # original ids of graph's vertices
    alpha_prime_sq: Fraction
    regularization: RegularizeResult
    cleaning: CleaningReport
    derivation_chain: dict
    K: int = HOST_K

    @property
    def alpha_prime(self) -> float:
        return math.sqrt(self.alpha_prime_sq)

    @property
    def m(self) -> int:
        return self.graph.n


class HostPreparationError(Exception):
    """prepare_host could not certify the host; ``report`` names the failed conditions."""

    def __init__(self, report: HostReport, message: str):
        self.report = report
        super().__init__(message)


def prepare_host(G: Graph, min_alpha=None) -> PreparedHost:
    """Regularize, clean, drop isolated vertices and certify conditions (a)-(c).

    The certified ``alpha'`` is the largest value for which (a) and (c)
    hold; (b) is then checked at that value.  With ``min_alpha`` the host
    must additionally support that value, and a shortfall is reported as a
    failure of the conditions evaluated at ``min_alpha``.
    """
    if G.m == 0:
        rep = HostReport(Fraction(min_alpha or 1) ** 2, HOST_K, False, True, True, {"a": {"edges": 0}})
        raise HostPreparationError(rep, "host has no edges")
    reg = regularize(G)
    H, log = clean_subgraph(reg.graph)
    Hc, keep = H.without_isolated()
    if Hc.m == 0:
        rep = HostReport(Fraction(min_alpha or 1) ** 2, HOST_K, False, True, True, {"a": {"edges": 0}})
        raise HostPreparationError(rep, "cleaning removed every edge")
    a_sq = certified_alpha_sq(Hc)
    rep = check_host_conditions_sq(Hc, a_sq)
    if not rep.ok:
        raise HostPreparationError(rep, f"host fails condition(s) {','.join(rep.failed())} at certified alpha")
    if min_alpha is not None and a_sq < Fraction(min_alpha) ** 2:
        need = check_host_conditions(Hc, min_alpha)
        raise HostPreparationError(
            need, f"certified alpha {math.sqrt(a_sq):.4g} is below the requested {float(min_alpha):.4g}"
        )

    H0 = reg.graph
    alpha0_sq = Fraction(H0.m * H0.m, H0.n ** 3)
    chain_alpha_sq = alpha0_sq / 64
    chain_rep = check_host_conditions_sq(H, chain_alpha_sq)
    chain = {
        "alpha0": math.sqrt(alpha0_sq),
        "K0": reg.K,
        "alpha_prime": math.sqrt(chain_alpha_sq),
        "K0_within_640": reg.K <= 640,
        "conditions_hold": chain_rep.ok,
        "holds": reg.K <= 640 and chain_rep.ok,
    }
    vertices = tuple(reg.vertices[i] for i in keep)
    return PreparedHost(Hc, vertices, a_sq, reg, log, chain)
