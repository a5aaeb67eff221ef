"""t-ladders in a graph and in its tensor powers.

A t-ladder is a 2t-tuple ``(x_1, y_1, ..., x_t, y_t)`` with
``x_i x_{i+1}``, ``y_i y_{i+1}`` and ``x_i y_i`` edges: a homomorphic image of
the 2 x t grid.  In ``G^k`` entries are k-tuples of base vertices.

A ladder in ``G^k`` is *good* for ``(alpha, s_1..s_{t-1})`` when

* ``codegree_{G^k}(x_{i+1}, y_i) <= s_i``,
* ``codegree_G(x_{i+1}(j), y_i(j)) >= alpha`` in every coordinate ``j``,
* the 2t base vertices in each coordinate are pairwise distinct.

Positions and coordinates are 0-based throughout this module.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from gridturan.errors import PreconditionError, ResourceLimitError
from gridturan.generators import TensorPowerView
from gridturan.graph import Graph

DEFAULT_BUDGET = 5_000_000

Ladder = tuple  # (x_1, y_1, ..., x_t, y_t)


@dataclass(frozen=True)
class GoodLadderSpec:
    t: int
    k: int
    alpha: Fraction
    s: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "s", tuple(self.s))
        if self.t < 1 or self.k < 1:
            raise ValueError("need t >= 1 and k >= 1")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if len(self.s) != self.t - 1:
            raise ValueError(f"expected {self.t - 1} s-values, got {len(self.s)}")
        if any(si < 1 for si in self.s):
            raise ValueError("s-values must be at least 1")

    def reversed(self) -> "GoodLadderSpec":
        return GoodLadderSpec(self.t, self.k, self.alpha, tuple(reversed(self.s)))


def as_tensor_ladder(L: Sequence, k: int) -> Ladder:
    """Accept plain base-vertex ladders when ``k == 1``."""
    out = []
    for x in L:
        if isinstance(x, (int, np.integer)):
            if k != 1:
                raise ValueError("plain vertex ids are only accepted for k = 1")
            x = (int(x),)
        elif len(x) != k:
            raise ValueError(f"ladder entry {x} does not have {k} coordinates")
        out.append(tuple(x))
    return tuple(out)


def x_side(L: Ladder) -> tuple:
    return tuple(L[0::2])


def y_side(L: Ladder) -> tuple:
    return tuple(L[1::2])


def interleave(X: Sequence, Y: Sequence) -> Ladder:
    return tuple(v for pair in zip(X, Y) for v in pair)


def reverse_ladder(L: Ladder) -> Ladder:
    """``(x_1, y_1, ..., x_t, y_t) -> (y_t, x_t, ..., y_1, x_1)``."""
    return tuple(reversed(L))


def is_ladder(G: Graph, L: Sequence[int]) -> bool:
    if len(L) % 2 or not L:
        return False
    X, Y = L[0::2], L[1::2]
    t = len(X)
    return all(G.has_edge(X[i], Y[i]) for i in range(t)) and all(
        G.has_edge(X[i], X[i + 1]) and G.has_edge(Y[i], Y[i + 1]) for i in range(t - 1)
    )


def enumerate_ladders(G: Graph, t: int, distinct: bool = False, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """All t-ladders of ``G`` in lexicographic order (brute force, small graphs only).

    ``budget`` bounds the number of search nodes visited.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    nb = [G.neighbours(v) for v in range(G.n)]
    nbs = G.neighbour_sets()
    out: list[tuple[int, ...]] = []
    visited = 0
    L: list[int] = []

    def extend():
        nonlocal visited
        visited += 1
        if visited > budget:
            raise ResourceLimitError(f"ladder enumeration exceeded {budget} search nodes")
        pos = len(L)
        if pos == 2 * t:
            out.append(tuple(L))
            return
        if pos == 0:
            cands = range(G.n)
        elif pos % 2 == 1:  # y_i: neighbour of x_i (and of y_{i-1})
            cands = nb[L[-1]]
            if pos > 1:
                cands = [w for w in cands if w in nbs[L[-2]]]
        else:  # x_{i+1}: neighbour of x_i
            cands = nb[L[-2]]
        for w in cands:
            if distinct and w in L:
                continue
            L.append(w)
            extend()
            L.pop()

    extend()
    return out


def count_ladders(G: Graph, t: int) -> int:
    """Number of (not necessarily injective) t-ladders of ``G``, exactly.

    Transfer-matrix count over ordered edges ``(x_i, y_i)``.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if G.m == 0:
        return 0
    A = G.adjacency_matrix().astype(object)
    W = A.copy()
    for _ in range(t - 1):
        W = A * (A.dot(W).dot(A))
    return int(W.sum())


def count_ladders_tensor(G: Graph, k: int, t: int) -> int:
    """Ladder count in ``G^k`` via multiplicativity: ``count(G^k) = count(G)^k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return count_ladders(G, t) ** k


def is_good_ladder(view: TensorPowerView, L: Sequence, spec: GoodLadderSpec) -> bool:
    if spec.k != view.k:
        raise ValueError(f"spec has k={spec.k}, view has k={view.k}")
    L = as_tensor_ladder(L, view.k)
    if len(L) != 2 * spec.t:
        raise ValueError(f"ladder has {len(L)} entries, expected {2 * spec.t}")
    for x in L:
        view.check(x)
    X, Y = L[0::2], L[1::2]
    t = spec.t
    for i in range(t):
        if not view.adjacent(X[i], Y[i]):
            return False
        if i < t - 1 and not (view.adjacent(X[i], X[i + 1]) and view.adjacent(Y[i], Y[i + 1])):
            return False
    for i in range(t - 1):
        cods = view.coordinate_codegrees(X[i + 1], Y[i])
        if math.prod(cods) > spec.s[i]:
            return False
        if any(c < spec.alpha for c in cods):
            return False
    for j in range(view.k):
        col = [x[j] for x in L]
        if len(set(col)) != len(col):
            return False
    return True


# -- harvesting -----------------------------------------------------------------


def harvest_log2_bound(alpha, n: int, k: int, t: int, s: Sequence) -> float:
    """log2 of ``alpha^{tk} n^{(t/2+1)k} prod(s) / (4^{k+1} log2(n^k))^{t-1}``."""
    lg = t * k * math.log2(alpha) + (t / 2 + 1) * k * math.log2(n) + sum(math.log2(x) for x in s)
    if t > 1:
        lg -= (t - 1) * ((2 * (k + 1)) + math.log2(k * math.log2(n)))
    return lg


def harvest_bound(alpha, n: int, k: int, t: int, s: Sequence) -> float:
    return 2.0 ** harvest_log2_bound(alpha, n, k, t, s)


@dataclass
class StepRecord:
    """One extension step: x-candidates bucketed dyadically by tensor codegree."""

    step: int  # extending i-ladders to (i+1)-ladders, i = step + 1
    tuples_before: int
    bucket_counts: dict  # exponent b -> tuples with codegree in (2^(b-1), 2^b]
    s: int
    kept: int
    required_fraction: Fraction  # 1 / ceil(log2 n^k)
    fresh_x_half_bound: bool
    fresh_y_half_bound: bool

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.kept, self.tuples_before)

    @property
    def meets_pigeonhole(self) -> bool:
        return self.fraction >= self.required_fraction


@dataclass
class HarvestResult:
    spec: GoodLadderSpec
    count: int
    n: int
    ladders: list | None = None
    step_log: list = field(default_factory=list)

    @property
    def bound(self) -> float:
        return harvest_bound(self.spec.alpha, self.n, self.spec.k, self.spec.t, self.spec.s)

    @property
    def s_at_least_alpha(self) -> bool:
        return all(si >= self.spec.alpha for si in self.spec.s)

    @property
    def s_at_least_alpha_k(self) -> bool:
        return all(si >= self.spec.alpha ** self.spec.k for si in self.spec.s)


class HarvestFailure(Exception):
    """No partial ladder survived an extension step."""

    def __init__(self, step: int, message: str):
        self.step = step
        super().__init__(message)


def _bit_length(a: np.ndarray) -> np.ndarray:
    out = np.zeros(a.shape, dtype=np.int64)
    v = a.copy()
    while True:
        nz = v > 0
        if not nz.any():
            return out
        out += nz
        v >>= 1


def _outer(arrays: list[np.ndarray]) -> np.ndarray:
    out = arrays[0]
    for a in arrays[1:]:
        out = np.multiply.outer(out, a).ravel()
    return out


class _Harvester:
    def __init__(self, view: TensorPowerView, t: int, alpha: Fraction, budget: int):
        G = view.base
        self.view, self.t, self.k, self.budget = view, t, view.k, budget
        self.n = G.n
        self.A = G.adjacency_matrix()
        self.C = self.A @ self.A
        self.nb = [np.asarray(G.neighbours(v), dtype=np.int64) for v in range(G.n)]
        self.min_cod = math.ceil(alpha)
        self.alpha = alpha

    def initial(self) -> list:
        pairs = [(u, v) for u in range(self.n) for v in self.view.base.neighbours(u)]
        if len(pairs) ** self.k > self.budget:
            raise ResourceLimitError(f"{len(pairs) ** self.k} initial pairs exceed budget {self.budget}")
        work = []
        for combo in itertools.product(pairs, repeat=self.k):
            x = tuple(p[0] for p in combo)
            y = tuple(p[1] for p in combo)
            work.append((x, y))
        return work

    def x_candidates(self, L):
        """Per coordinate: fresh x candidates, their codegree to y_i, fresh y counts."""
        xi, yi = L[-2], L[-1]
        out = []
        half_ok = True
        for j in range(self.k):
            used = np.fromiter({v[j] for v in L}, dtype=np.int64)
            nbr = self.nb[xi[j]]
            fresh = nbr[~np.isin(nbr, used)]
            cod = self.C[fresh, yi[j]]
            keep = cod >= self.min_cod
            total = int((self.C[nbr, yi[j]] >= self.min_cod).sum())
            cand, cod = fresh[keep], cod[keep]
            if 2 * cand.size < total:
                half_ok = False
            if cand.size == 0:
                return None, half_ok
            f = cod - (self.A[np.ix_(used, cand)] * self.A[used, yi[j]][:, None]).sum(axis=0)
            out.append((cand, cod, f))
        return out, half_ok

    def y_choices(self, L, x):
        yi = L[-1]
        per = []
        for j in range(self.k):
            used = {v[j] for v in L}
            used.add(x[j])
            common = np.flatnonzero(self.A[x[j]] & self.A[yi[j]])
            per.append([int(w) for w in common if w not in used])
        return itertools.product(*per)


def harvest_good_ladders(
    view: TensorPowerView,
    t: int,
    alpha,
    materialize: bool = False,
    *,
    strict: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> HarvestResult:
    """Build a large family of good t-ladders in ``G^k`` by dyadic pigeonholing.

    Starting from adjacent pairs, each step extends every partial ladder by an
    ``x`` adjacent to the last ``x`` that is fresh in every coordinate and has
    per-coordinate codegree at least ``alpha`` with the last ``y``.  These
    candidates are bucketed by ``codegree_{G^k}(x, y_last)`` into ranges
    ``(s/2, s]``; the most populous bucket is kept (larger ``s`` on ties) and
    each survivor is completed by every fresh common neighbour ``y``.

    With ``strict`` the regime ``alpha >= 4t`` is enforced.  ``budget`` caps
    the number of partial ladders held at any time.
    """
    a = Fraction(alpha)
    if t < 1:
        raise ValueError("t must be at least 1")
    if a <= 0:
        raise ValueError("alpha must be positive")
    if strict and a < 4 * t:
        raise PreconditionError(f"harvest needs alpha >= 4t = {4 * t}, got {float(a):.4g}")
    G, k = view.base, view.k
    if G.m == 0:
        raise HarvestFailure(0, "host has no edges")
    H = _Harvester(view, t, a, budget)
    log_n = max(1, math.ceil(k * math.log2(G.n)))
    required = Fraction(1, log_n)

    if t == 1:
        count = (2 * G.m) ** k
        ladders = [tuple(p) for p in H.initial()] if materialize else None
        return HarvestResult(GoodLadderSpec(1, k, a, ()), count, G.n, ladders)

    work = H.initial()
    s_vals: list[int] = []
    step_log: list[StepRecord] = []
    total = 0
    for step in range(t - 1):
        final = step == t - 2
        stash = defaultdict(list)  # bucket -> [(L, cand arrays, flat indices)]
        tuples_per_bucket: dict = defaultdict(int)
        ladders_per_bucket: dict = defaultdict(int)
        x_half = True
        before = 0
        for L in work:
            per, half_ok = H.x_candidates(L)
            x_half &= half_ok
            if per is None:
                continue
            d = _outer([p[1] for p in per])
            f = _outer([p[2] for p in per])
            b = _bit_length(d - 1)
            before += d.size
            for bv in np.unique(b):
                idx = np.flatnonzero(b == bv)
                bv = int(bv)
                tuples_per_bucket[bv] += idx.size
                ladders_per_bucket[bv] += int(f[idx].sum())
                if materialize or not final:
                    stash[bv].append((L, per, idx, d[idx], f[idx]))
        if before == 0:
            raise HarvestFailure(step, f"no viable x extension at step {step}")
        best = max(tuples_per_bucket, key=lambda bv: (tuples_per_bucket[bv], bv))
        s_vals.append(2 ** best)
        y_half = True
        if materialize or not final:
            nxt = []
            for L, per, idx, dd, ff in stash[best]:
                shape = [p[0].size for p in per]
                if np.any(ff * 2 ** k < dd):
                    y_half = False
                for flat in idx:
                    coords = np.unravel_index(int(flat), shape)
                    x = tuple(int(per[j][0][coords[j]]) for j in range(k))
                    for y in H.y_choices(L, x):
                        nxt.append(L + (x, tuple(y)))
                if len(nxt) > budget:
                    raise ResourceLimitError(f"harvest working set exceeded budget {budget} at step {step}")
            work = nxt
            total = len(nxt)
        else:
            total = ladders_per_bucket[best]
        step_log.append(
            StepRecord(
                step,
                before,
                dict(sorted(tuples_per_bucket.items())),
                2 ** best,
                tuples_per_bucket[best],
                required,
                x_half,
                y_half,
            )
        )
        # at least half of the common neighbours stay fresh once codegrees reach 4t
        if a >= 4 * t and not y_half:
            raise AssertionError(f"fresh y choices fell below half the codegree at step {step}")
        if total == 0:
            raise HarvestFailure(step, f"no fresh y completion at step {step}")
    spec = GoodLadderSpec(t, k, a, tuple(s_vals))
    return HarvestResult(spec, total, G.n, sorted(work) if materialize else None, step_log)


# -- constrained extensions -----------------------------------------------------


def extension_bound(view: TensorPowerView, spec: GoodLadderSpec, num_pinned: int) -> Fraction:
    """``Delta(G)^k * prod(s) / alpha^{|J|}``."""
    b = Fraction(view.max_degree())
    for si in spec.s:
        b *= Fraction(si)
    return b / spec.alpha ** num_pinned


def count_constrained_extensions(
    view: TensorPowerView,
    spec: GoodLadderSpec,
    fixed: Sequence,
    side: str,
    position: int,
    pins: dict,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Count good ladders completing a fixed side, exhaustively.

    ``side == "x"``: ``fixed`` is ``(x_1..x_t)`` and completions are y-sides
    with ``y_position(j) == pins[j]`` for every pinned coordinate ``j``.
    ``side == "y"`` is the mirror image.
    """
    if side not in ("x", "y"):
        raise ValueError("side must be 'x' or 'y'")
    t, k = spec.t, view.k
    if spec.k != k:
        raise ValueError("spec and view disagree on k")
    fixed = [tuple(v) if not isinstance(v, (int, np.integer)) else (int(v),) for v in fixed]
    if len(fixed) != t:
        raise ValueError(f"need {t} fixed vertices")
    if not 0 <= position < t:
        raise ValueError(f"position must lie in [0, {t})")
    if any(not 0 <= j < k for j in pins):
        raise ValueError("pinned coordinate out of range")
    nbs = view.base.neighbour_sets()
    visited = 0
    free: list = []
    count = 0

    def options(i):
        # free[i] must neighbour fixed[i] and free[i-1]
        per = []
        for j in range(k):
            cand = nbs[fixed[i][j]]
            if i > 0:
                cand = cand & nbs[free[i - 1][j]]
            if i == position and j in pins:
                cand = cand & {pins[j]}
            per.append(sorted(cand))
        return itertools.product(*per)

    def rec(i):
        nonlocal visited, count
        visited += 1
        if visited > budget:
            raise ResourceLimitError(f"extension count exceeded {budget} search nodes")
        if i == t:
            L = interleave(fixed, free) if side == "x" else interleave(free, fixed)
            if is_good_ladder(view, L, spec):
                count += 1
            return
        for v in options(i):
            free.append(v)
            rec(i + 1)
            free.pop()

    rec(0)
    return count
