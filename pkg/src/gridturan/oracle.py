"""Ground truth that shares no code with the ladder/embedding pipeline.

* :func:`contains_subgraph`: backtracking subgraph search (not induced).
* :func:`turan_number`: exact ``ex(n, H)`` for small ``n`` by vertex
  augmentation over isomorphism classes of H-free graphs.
* :func:`diagonal_crossing`: crossing paths through one-diagonal-per-square
  placements on a t x t grid.
* :func:`verify_lower_bound_construction`: polarity graph blowups vs grids.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import deque
from dataclasses import dataclass

from gridturan.errors import BudgetExceeded
from gridturan.generators import blowup, make_complete, make_cycle, make_grid, polarity_graph
from gridturan.graph import Graph

DEFAULT_STEPS = 20_000_000


# -- subgraph search ------------------------------------------------------------


def _search_order(H: Graph, first: int) -> list[int]:
    order = [first]
    placed = {first}
    degs = H.degrees()
    while len(order) < H.n:
        best = max(
            (v for v in range(H.n) if v not in placed),
            key=lambda v: (sum(1 for w in H.neighbours(v) if w in placed), degs[v], -v),
        )
        order.append(best)
        placed.add(best)
    return order


class _Search:
    def __init__(self, G: Graph, H: Graph, max_steps: int, deadline: float | None):
        self.G, self.H = G, H
        self.gbits = G.bits()
        self.gdeg = G.degrees()
        self.hdeg = H.degrees()
        self.max_steps = max_steps
        self.deadline = deadline
        self.steps = 0
        self.all_mask = (1 << G.n) - 1

    def tick(self):
        self.steps += 1
        if self.steps > self.max_steps:
            raise BudgetExceeded(f"subgraph search exceeded {self.max_steps} steps")
        if self.deadline is not None and self.steps % 4096 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("subgraph search ran out of time")

    def run(self, order: list[int], fixed: dict[int, int]) -> dict[int, int] | None:
        H = self.H
        pos = {h: i for i, h in enumerate(order)}
        back = [[w for w in H.neighbours(h) if pos[w] < pos[h]] for h in order]
        image: dict[int, int] = dict(fixed)
        used = 0
        for g in fixed.values():
            used |= 1 << g

        def rec(i: int, used: int) -> bool:
            self.tick()
            if i == len(order):
                return True
            h = order[i]
            if h in image:
                g = image[h]
                ok = all((self.gbits[g] >> image[w]) & 1 for w in back[i])
                return ok and rec(i + 1, used)
            mask = self.all_mask & ~used
            for w in back[i]:
                mask &= self.gbits[image[w]]
            need = self.hdeg[h]
            while mask:
                low = mask & -mask
                g = low.bit_length() - 1
                mask ^= low
                if self.gdeg[g] < need:
                    continue
                image[h] = g
                if rec(i + 1, used | low):
                    return True
                del image[h]
            return False

        if rec(0, used):
            return dict(image)
        return None


def _verify_witness(G: Graph, H: Graph, phi: dict[int, int]) -> bool:
    if len(phi) != H.n or len(set(phi.values())) != H.n:
        return False
    return all(G.has_edge(phi[u], phi[v]) for u, v in H.edges)


def contains_subgraph(
    G: Graph,
    H: Graph,
    max_steps: int = DEFAULT_STEPS,
    time_budget: float | None = None,
    anchor: int | None = None,
) -> dict[int, int] | None:
    """Return an injective edge-preserving map ``V(H) -> V(G)``, or ``None``.

    ``None`` means the search was exhaustive.  With ``anchor`` only copies
    using that vertex of ``G`` are sought.  Running out of ``max_steps`` or
    ``time_budget`` seconds raises :class:`BudgetExceeded`.
    """
    if H.n > G.n:
        return None
    if H.n == 0:
        return {}
    deadline = None if time_budget is None else time.monotonic() + time_budget
    S = _Search(G, H, max_steps, deadline)
    hdeg = H.degrees()
    if anchor is None:
        first = min(range(H.n), key=lambda v: (hdeg[v], v))
        phi = S.run(_search_order(H, first), {})
    else:
        phi = None
        tried = set()
        for h in sorted(range(H.n), key=lambda v: (hdeg[v], v)):
            # automorphic copies would repeat work, but cheap degree classes suffice here
            if hdeg[h] > G.degree(anchor) or h in tried:
                continue
            tried.add(h)
            phi = S.run(_search_order(H, h), {h: anchor})
            if phi is not None:
                break
    if phi is not None and not _verify_witness(G, H, phi):
        raise AssertionError("subgraph search returned an invalid witness")
    return phi


# -- canonical forms and Turan numbers ------------------------------------------


def _refine(G: Graph) -> list[int]:
    colors = G.degrees()
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in G.neighbours(v)))) for v in range(G.n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _canonical_form(G: Graph) -> tuple:
    """Least sorted edge list over the relabelings that respect colour refinement."""
    colors = _refine(G)
    classes = [sorted(v for v in range(G.n) if colors[v] == c) for c in sorted(set(colors))]
    best = None
    for perms in itertools.product(*(itertools.permutations(c) for c in classes)):
        label = {v: i for i, v in enumerate(v for p in perms for v in p)}
        form = tuple(sorted((min(label[u], label[v]), max(label[u], label[v])) for u, v in G.edges))
        if best is None or form < best:
            best = form
    return (G.n, best)


def _from_form(form: tuple) -> Graph:
    return Graph(form[0], form[1])


@dataclass(frozen=True)
class TuranResult:
    n: int
    value: int
    witness: Graph
    exact: bool


def _extend(task):
    """All H-free one-vertex extensions of a batch of graphs, as canonical forms."""
    forms, H, final, deadline = task
    out = set()
    best_e = -1
    for form in forms:
        P = _from_form(form)
        m = P.n + 1
        for size in range(m):
            if final and P.m + size < best_e:
                continue
            for S in itertools.combinations(range(m - 1), size):
                if deadline is not None and time.monotonic() > deadline:
                    raise BudgetExceeded("turan search out of time")
                Q = Graph(m, P.edges + tuple((v, m - 1) for v in S))
                if size and contains_subgraph(Q, H, anchor=m - 1) is not None:
                    continue
                if final:
                    if Q.m < best_e:
                        continue
                    if Q.m > best_e:
                        best_e, out = Q.m, set()
                out.add(_canonical_form(Q))
    return out


def _expand_level(level: list, H: Graph, final: bool, deadline, threads: int) -> list:
    if threads <= 1 or len(level) < 2 * threads:
        found = _extend((level, H, final, deadline))
    else:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [level[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(threads) as pool:
            parts = list(pool.map(_extend, [(c, H, final, deadline) for c in chunks]))
        found = set().union(*parts)
    if final and found:
        top = max(len(f[1]) for f in found)
        found = {f for f in found if len(f[1]) == top}
    return sorted(found)


def turan_number(n: int, H: Graph, time_budget: float | None = None, threads: int = 1) -> TuranResult:
    """``ex(n, H)`` with one extremal graph (canonical minimum among the extremal ones).

    Vertex ``m`` is added to every isomorphism class of H-free graphs on
    ``m`` vertices with every possible neighbourhood; only copies of ``H``
    through the new vertex need checking.  Work is split across ``threads``
    processes and merged in canonical order, so the answer never depends on
    the thread count.  When ``time_budget`` runs out the best graph known so
    far is returned with ``exact=False``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if H.m == 0:
        raise ValueError("H must have an edge")
    if H.n > n:
        K = make_complete(n)
        return TuranResult(n, K.m, K, True)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    level = [_canonical_form(Graph(1))]
    try:
        for m in range(2, n + 1):
            level = _expand_level(level, H, m == n, deadline, threads)
    except BudgetExceeded:
        best = min(level, key=lambda f: (-len(f[1]), f))
        padded = Graph(n, best[1])
        if contains_subgraph(padded, H) is not None:
            padded = Graph(n)
        return TuranResult(n, padded.m, padded, False)
    witness = _from_form(level[0])
    if contains_subgraph(witness, H) is not None:
        raise AssertionError("extremal witness contains the forbidden graph")
    return TuranResult(n, witness.m, witness, True)


# -- diagonals on a grid ----------------------------------------------------------


@dataclass(frozen=True)
class DiagonalAssignment:
    """One diagonal per unit square of the t x t point grid, row-major.

    ``True`` is ``/`` (joins the top-right and bottom-left corners), ``False``
    is ``\\``.  Point ``(row, col)`` has row 0 at the top.
    """

    t: int
    bits: tuple

    def __post_init__(self):
        if self.t < 2:
            raise ValueError("t must be at least 2")
        if len(self.bits) != (self.t - 1) ** 2:
            raise ValueError(f"need {(self.t - 1) ** 2} diagonals, got {len(self.bits)}")

    @classmethod
    def from_string(cls, t: int, s: str) -> "DiagonalAssignment":
        if set(s) - {"0", "1"}:
            raise ValueError("assignment must be a string of 0/1")
        return cls(t, tuple(c == "1" for c in s))

    @classmethod
    def from_int(cls, t: int, code: int) -> "DiagonalAssignment":
        size = (t - 1) ** 2
        return cls(t, tuple(bool((code >> (size - 1 - i)) & 1) for i in range(size)))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def segments(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        t = self.t
        out = []
        for idx, slash in enumerate(self.bits):
            r, c = divmod(idx, t - 1)
            if slash:
                out.append(((r, c + 1), (r + 1, c)))
            else:
                out.append(((r, c), (r + 1, c + 1)))
        return out


@dataclass(frozen=True)
class CrossingPath:
    direction: str  # "left-right" or "top-bottom"
    points: tuple


def _bfs_path(adj, sources, is_target):
    parent = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        p = queue.popleft()
        if is_target(p):
            path = []
            while p is not None:
                path.append(p)
                p = parent[p]
            return path[::-1]
        for q in adj.get(p, ()):
            if q not in parent:
                parent[q] = p
                queue.append(q)
    return None


def diagonal_crossing(assign: DiagonalAssignment) -> CrossingPath:
    """A path along the diagonals joining two opposite sides (left-right tried first)."""
    t = assign.t
    adj: dict = {}
    for a, b in assign.segments():
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for v in adj.values():
        v.sort()
    path = _bfs_path(adj, [(r, 0) for r in range(t) if (r, 0) in adj], lambda p: p[1] == t - 1)
    direction = "left-right"
    if path is None:
        path = _bfs_path(adj, [(0, c) for c in range(t) if (0, c) in adj], lambda p: p[0] == t - 1)
        direction = "top-bottom"
    if path is None:
        raise RuntimeError(f"no crossing path for t={t} assignment {assign.to_string()}")
    if len(path) < t:
        raise RuntimeError(f"crossing path shorter than t for assignment {assign.to_string()}")
    return CrossingPath(direction, tuple(path))


def all_assignments(t: int):
    for code in range(2 ** ((t - 1) ** 2)):
        yield DiagonalAssignment.from_int(t, code)


# -- lower-bound construction ---------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundReport:
    q: int
    t: int
    base_n: int
    base_edges: int
    base_c4_free: bool
    blowup_n: int
    blowup_edges: int
    ft_free: bool | None  # None: the oracle ran out of budget, nothing claimed
    c_achieved: float

    def lines(self) -> list[str]:
        ft = "unchecked" if self.ft_free is None else str(self.ft_free).lower()
        return [
            f"q={self.q}",
            f"t={self.t}",
            f"base_n={self.base_n}",
            f"base_edges={self.base_edges}",
            f"base_c4_free={str(self.base_c4_free).lower()}",
            f"blowup_n={self.blowup_n}",
            f"blowup_edges={self.blowup_edges}",
            f"ft_free={ft}",
            f"c_achieved={self.c_achieved:.6f}",
        ]


def verify_lower_bound_construction(
    q: int, t: int, max_steps: int = DEFAULT_STEPS, time_budget: float | None = None
) -> LowerBoundReport:
    """Blow a polarity graph up by ``t - 1`` and check it avoids the t x t grid."""
    if t < 2:
        raise ValueError("t must be at least 2")
    base = polarity_graph(q)
    base_free = contains_subgraph(base, make_cycle(4)) is None  # small for any prime q in reach
    G = blowup(base, t - 1)
    try:
        ft_free = contains_subgraph(G, make_grid(t), max_steps=max_steps, time_budget=time_budget) is None
    except BudgetExceeded:
        ft_free = None
    c = G.m / (math.sqrt(t) * G.n ** 1.5)
    return LowerBoundReport(q, t, base.n, base.m, base_free, G.n, G.m, ft_free, c)
