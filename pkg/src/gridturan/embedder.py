"""Greedy embedding of ``T x P_t`` through an auxiliary graph of good ladders.

The pipeline is: certify the host (:func:`prepare_host`), harvest good
t-ladders in ``G^k``, join the x-side and y-side paths of each ladder in an
auxiliary graph, peel that graph to minimum degree at least half its average
degree, and then embed the tree greedily along a 1-degenerate ordering while
keeping per-coordinate collisions between images within a budget.  Any
coordinate in which all ``r*t`` base vertices are distinct is a genuine copy
of ``T x P_t``.

The true constants (``alpha = (16K)^{r^2 t^3}``) are far out of reach, so
``k``, ``alpha`` and the collision budget are working parameters supplied by
the caller; :func:`theorem_parameters` reports the real values.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from gridturan.cleaning import HOST_K, HostPreparationError, prepare_host
from gridturan.errors import ResourceLimitError
from gridturan.generators import make_path, tensor_power, cartesian_product, TensorPowerView
from gridturan.graph import Graph, peel_min_degree
from gridturan.ladders import HarvestFailure, HarvestResult, harvest_good_ladders, x_side, y_side

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TheoremParameters:
    r: int
    t: int
    alpha_log2: float
    k_min: int


def theorem_parameters(r: int, t: int, n: int, K: int = HOST_K) -> TheoremParameters:
    """``log2 alpha = r^2 t^3 log2(16K)`` and the least k with ``2^k > k * 4 t^2 r * log2 n``."""
    if r < 2 or t < 2 or n < 2:
        raise ValueError("need r >= 2, t >= 2 and n >= 2")
    c = 4 * t * t * r * math.log2(n)
    k = 1
    while 2 ** k <= k * c:
        k += 1
    return TheoremParameters(r, t, r * r * t ** 3 * math.log2(16 * K), k)


def default_collision_budget(k: int, r: int, t: int) -> int:
    """Largest integer not exceeding ``k / (rt)^2``."""
    return k // (r * t) ** 2


@dataclass
class AuxiliaryGraph:
    paths: list  # vertex id -> t-tuple of tensor vertices, sorted
    graph: Graph
    ladder_count: int

    def index(self, path) -> int:
        return self._index[path]

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.paths)}


def build_auxiliary_graph(view: TensorPowerView, harvest: HarvestResult) -> AuxiliaryGraph:
    """Paths of harvested ladders as vertices; each ladder joins its two sides."""
    if harvest.ladders is None:
        raise ValueError("the harvest must be materialized")
    if not harvest.ladders:
        raise ValueError("empty harvest")
    pairs = set()
    verts = set()
    for L in harvest.ladders:
        X, Y = x_side(L), y_side(L)
        verts.add(X)
        verts.add(Y)
        pairs.add((X, Y) if X < Y else (Y, X))
    paths = sorted(verts)
    index = {p: i for i, p in enumerate(paths)}
    g = Graph(len(paths), ((index[a], index[b]) for a, b in pairs))
    return AuxiliaryGraph(paths, g, len(harvest.ladders))


@dataclass
class Embedding:
    """Copy of ``T x P_t``: ``assignment[(p, i)]`` is the host vertex of tree vertex ``p`` at path position ``i``."""

    assignment: dict
    coordinate: int
    tree: Graph
    t: int
    details: dict = field(default_factory=dict, compare=False)

    def lines(self) -> list[str]:
        return [f"{p} {i} {v}" for (p, i), v in sorted(self.assignment.items())]


class EmbeddingFailure(Exception):
    """The pipeline stopped without an embedding; ``stage`` says where."""

    def __init__(self, stage: str, message: str, **details):
        self.stage = stage
        self.details = details
        super().__init__(f"{stage}: {message}")


def tree_product(T: Graph, t: int) -> Graph:
    """``T x P_t`` with vertex ``(p, i)`` labelled ``p * t + i``."""
    return cartesian_product(T, make_path(t))


def validate_tree(T: Graph) -> None:
    if T.n < 2:
        raise ValueError("the tree needs at least two vertices")
    if T.m != T.n - 1:
        raise ValueError("not a tree: wrong number of edges")
    seen = {0}
    stack = [0]
    while stack:
        for w in T.neighbours(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != T.n:
        raise ValueError("not a tree: disconnected")


def degenerate_order(T: Graph) -> tuple[list[int], dict]:
    """Order where every vertex after the first has exactly one earlier neighbour.

    Leaves are stripped lowest id first and the removal order is reversed.
    Returns the order and the map ``vertex -> earlier neighbour``.
    """
    validate_tree(T)
    deg = T.degrees()
    alive = set(range(T.n))
    removed = []
    while len(alive) > 1:
        leaf = min(v for v in alive if deg[v] == 1)
        removed.append(leaf)
        alive.remove(leaf)
        for w in T.neighbours(leaf):
            if w in alive:
                deg[w] -= 1
    order = list(alive) + removed[::-1]
    pos = {v: i for i, v in enumerate(order)}
    parent = {}
    for v in order[1:]:
        earlier = [w for w in T.neighbours(v) if pos[w] < pos[v]]
        assert len(earlier) == 1
        parent[v] = earlier[0]
    return order, parent


def verify_embedding(G: Graph, T: Graph, t: int, emb: Embedding) -> bool:
    """Check an embedding against ``G`` directly."""
    a = emb.assignment
    keys = {(p, i) for p in range(T.n) for i in range(t)}
    if set(a) != keys:
        return False
    if any(not 0 <= v < G.n for v in a.values()):
        return False
    if len(set(a.values())) != len(keys):
        return False
    for p in range(T.n):
        for i in range(t - 1):
            if not G.has_edge(a[p, i], a[p, i + 1]):
                return False
    for p, z in T.edges:
        for i in range(t):
            if not G.has_edge(a[p, i], a[z, i]):
                return False
    return True


def _estimate_ladders(G: Graph, t: int, k: int) -> float:
    if G.m == 0:
        return 0.0
    C = G.codegree_matrix().astype(float)
    avg_deg = 2 * G.m / G.n
    # mean codegree over pairs joined by a 2-walk, weighted by walk count
    avg_cod = float((C * C).sum()) / float(C.sum())
    # each extension step keeps roughly half the tuples after pigeonholing
    return float(2 * G.m * (avg_deg * avg_cod / 2) ** (t - 1)) ** k


def _collisions_ok(cand, placed, budget, k) -> bool:
    for other in placed:
        for xl in cand:
            for xi in other:
                same = sum(1 for j in range(k) if xl[j] == xi[j])
                if same > budget:
                    return False
    return True


def _greedy(paths, H: Graph, order, parent, t, k, budget, start):
    """One greedy pass from peeled vertex ``start``; ``paths[h]`` is the t-path of peeled vertex h."""
    images = {order[0]: start}
    for p in order[1:]:
        placed = [paths[images[q]] for q in images]
        rejected = 0
        chosen = None
        for w in H.neighbours(images[parent[p]]):
            if _collisions_ok(paths[w], placed, budget, k):
                chosen = w
                break
            rejected += 1
        if chosen is None:
            return None, {"stage": "greedy", "tree_vertex": p, "unsuitable": rejected, "partial": dict(images)}
        images[p] = chosen
    r = len(order)
    for j in range(k):
        col = [paths[images[p]][i][j] for p in range(r) for i in range(t)]
        if len(set(col)) == r * t:
            return (images, j), None
    return None, {"stage": "extract", "partial": dict(images)}


def embed_tree_product(
    G: Graph,
    T: Graph,
    t: int,
    k: int = 1,
    alpha=2,
    collision_budget: int | None = None,
    seed: int = 0,
    max_ladders: int = 100_000,
    restarts: int = 32,
) -> Embedding:
    """Find ``T x P_t`` in ``G`` by the ladder pipeline.

    When the full harvest would exceed ``max_ladders`` the pipeline runs on
    a seeded random induced subgraph sized to fit; the result is still a
    subgraph of ``G``.  Up to ``restarts`` start vertices are tried for the
    greedy phase, in canonical order.  Raises :class:`EmbeddingFailure`
    naming the stage that stopped.
    """
    order, parent = degenerate_order(T)
    r = T.n
    if t < 1:
        raise ValueError("t must be at least 1")
    if collision_budget is None:
        collision_budget = default_collision_budget(k, r, t)
    rng = random.Random(seed)
    alpha = Fraction(alpha)

    vertices = list(range(G.n))
    while True:
        sub, sub_keep = G.induced_subgraph(vertices)
        try:
            host = prepare_host(sub)
        except HostPreparationError as exc:
            raise EmbeddingFailure("prepare_host", str(exc), report=exc.report) from None
        est = _estimate_ladders(host.graph, t, k)
        if est > max_ladders and len(vertices) > r * t:
            size = int(len(vertices) * (max_ladders / est) ** (1 / (2 * t * k)))
            size = max(r * t, min(size, len(vertices) - 1))
            vertices = sorted(rng.sample(vertices, size))
            log.debug("sampling host down to %d vertices (estimate %.3g ladders)", size, est)
            continue
        view = tensor_power(host.graph, k)
        try:
            harvest = harvest_good_ladders(view, t, alpha, materialize=True, strict=False, budget=max_ladders)
        except HarvestFailure as exc:
            raise EmbeddingFailure("harvest", str(exc), step=exc.step) from None
        except ResourceLimitError:
            if len(vertices) <= r * t:
                raise EmbeddingFailure("harvest", "harvest exceeds the ladder budget") from None
            size = max(r * t, int(len(vertices) * 0.85))
            vertices = sorted(rng.sample(vertices, size))
            continue
        break

    aux = build_auxiliary_graph(view, harvest)
    threshold = Fraction(aux.graph.m, aux.graph.n)  # half the average degree
    peeled = peel_min_degree(aux.graph, threshold)
    if peeled.empty:
        raise EmbeddingFailure("peel", "peeling removed every vertex")
    H, keep = peeled.graph, peeled.vertices
    min_deg = min(H.degrees())
    audit = {
        "host_vertices": host.m,
        "alpha_prime": host.alpha_prime,
        "s": harvest.spec.s,
        "ladders": harvest.count,
        "aux_vertices": aux.graph.n,
        "aux_edges": aux.graph.m,
        "peel_threshold": threshold,
        "peeled_vertices": H.n,
        "peeled_min_degree": min_deg,
        "collision_budget": collision_budget,
    }

    paths = [aux.paths[a] for a in keep]
    failure = None
    for start in range(min(restarts, H.n)):
        found, failure = _greedy(paths, H, order, parent, t, k, collision_budget, start)
        if found:
            break
    else:
        failure = dict(failure)
        stage = failure.pop("stage")
        raise EmbeddingFailure(stage, "no embedding from the tried start vertices", delta_H=min_deg, **failure, **audit)

    images, j = found
    to_g = [sub_keep[v] for v in host.vertices]
    assignment = {(p, i): to_g[paths[images[p]][i][j]] for p in range(r) for i in range(t)}
    # full G^k images in G ids, so the collision budget can be audited
    audit["tensor_paths"] = {p: tuple(tuple(to_g[c] for c in x) for x in paths[images[p]]) for p in range(r)}
    emb = Embedding(assignment, j, T, t, audit)
    if not verify_embedding(G, T, t, emb):
        raise AssertionError("embedder produced an invalid embedding")
    return emb
