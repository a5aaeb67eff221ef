import math

import pytest
from hypothesis import given, settings

from gridturan.errors import BudgetExceeded
from gridturan.generators import (
    blowup,
    make_complete,
    make_cycle,
    make_grid,
    make_path,
    polarity_graph,
    random_graph,
)
from gridturan.graph import Graph
from gridturan.oracle import (
    DiagonalAssignment,
    all_assignments,
    contains_subgraph,
    diagonal_crossing,
    turan_number,
    verify_lower_bound_construction,
)

from conftest import all_graphs, graphs, naive_contains

PATTERNS = {"C4": make_cycle(4), "P4": make_path(4), "K3": make_complete(3)}


def test_examples():
    assert contains_subgraph(make_complete(4), make_cycle(4)) is not None
    assert contains_subgraph(make_path(10), make_cycle(4)) is None
    assert contains_subgraph(blowup(polarity_graph(2), 2), make_grid(3)) is None
    assert contains_subgraph(make_path(3), make_path(4)) is None


def test_budget_is_an_error_not_an_answer():
    with pytest.raises(BudgetExceeded):
        contains_subgraph(blowup(polarity_graph(3), 2), make_grid(3), max_steps=50)


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=7))
def test_agrees_with_naive_checker(G):
    for H in PATTERNS.values():
        phi = contains_subgraph(G, H)
        assert (phi is not None) == naive_contains(G, H)
        if phi is not None:
            assert len(set(phi.values())) == H.n
            assert all(G.has_edge(phi[u], phi[v]) for u, v in H.edges)


def test_agrees_with_naive_checker_on_all_small_graphs():
    for n in range(1, 6):
        for G in all_graphs(n):
            for H in PATTERNS.values():
                assert (contains_subgraph(G, H) is not None) == naive_contains(G, H)


@pytest.mark.parametrize("seed", range(40))
def test_agrees_with_naive_checker_on_seven_vertices(seed):
    G = random_graph(7, 0.2 + 0.015 * seed, seed=seed)
    for H in PATTERNS.values():
        assert (contains_subgraph(G, H) is not None) == naive_contains(G, H)


def test_anchor_restricts_to_copies_through_vertex():
    G = Graph(7, list(make_cycle(4).edges) + [(4, 5), (5, 6)])
    assert contains_subgraph(G, make_cycle(4), anchor=0) is not None
    assert contains_subgraph(G, make_cycle(4), anchor=5) is None


def naive_turan(n, H):
    return max(G.m for G in all_graphs(n) if not naive_contains(G, H))


def test_turan_examples():
    assert [turan_number(n, make_path(2)).value for n in range(1, 7)] == [0] * 6
    C4 = make_cycle(4)
    assert turan_number(4, C4).value == 4
    assert turan_number(5, C4).value == 6
    F3 = make_grid(3)
    for n in range(1, 9):
        res = turan_number(n, F3)
        assert res.value == n * (n - 1) // 2 and res.exact


@pytest.mark.parametrize("name", ["C4", "K3", "P4"])
def test_turan_against_enumerate_and_filter(name):
    H = PATTERNS[name]
    for n in range(1, 6):
        res = turan_number(n, H)
        assert res.value == naive_turan(n, H)
        assert res.witness.m == res.value and contains_subgraph(res.witness, H) is None


@pytest.mark.parametrize("name", ["C4", "K3", "P4"])
def test_turan_monotone(name):
    vals = [turan_number(n, PATTERNS[name]).value for n in range(1, 8)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_turan_threads_do_not_change_answer():
    a = turan_number(7, make_cycle(4), threads=1)
    b = turan_number(7, make_cycle(4), threads=3)
    assert a == b


def test_turan_budget_gives_flagged_lower_bound():
    res = turan_number(7, make_cycle(4), time_budget=0.0)
    assert not res.exact
    assert contains_subgraph(res.witness, make_cycle(4)) is None
    assert res.witness.n == 7


def test_turan_rejects_edgeless_pattern():
    with pytest.raises(ValueError):
        turan_number(4, Graph(2))


def test_diagonal_examples():
    for bits in ("0", "1"):
        p = diagonal_crossing(DiagonalAssignment.from_string(2, bits))
        assert len(p.points) == 2
    p = diagonal_crossing(DiagonalAssignment.from_string(4, "0" * 9))
    assert p.points == ((0, 0), (1, 1), (2, 2), (3, 3))
    with pytest.raises(ValueError):
        DiagonalAssignment(3, (True,))


@pytest.mark.parametrize("t", [2, 3, 4])
def test_every_assignment_crosses(t):
    total = 0
    for a in all_assignments(t):
        p = diagonal_crossing(a)
        total += 1
        assert len(p.points) >= t
        segs = {frozenset(s) for s in a.segments()}
        assert all(frozenset(e) in segs for e in zip(p.points, p.points[1:]))
        if p.direction == "left-right":
            assert p.points[0][1] == 0 and p.points[-1][1] == t - 1
        else:
            assert p.points[0][0] == 0 and p.points[-1][0] == t - 1
    assert total == 2 ** ((t - 1) ** 2)


def test_lower_bound_reports():
    r = verify_lower_bound_construction(2, 3)
    assert r.base_c4_free and r.ft_free
    assert (r.blowup_n, r.blowup_edges) == (14, 36)
    assert r.c_achieved == pytest.approx(36 / (math.sqrt(3) * 14 ** 1.5))
    r3 = verify_lower_bound_construction(3, 3)
    assert r3.blowup_edges == 4 * 24 and r3.blowup_n == 2 * 13 and r3.ft_free
    r2 = verify_lower_bound_construction(2, 2)
    assert r2.blowup_n == 7 and r2.ft_free == r2.base_c4_free


def test_lower_bound_unchecked_when_out_of_budget():
    r = verify_lower_bound_construction(3, 3, max_steps=10)
    assert r.ft_free is None
    assert "ft_free=unchecked" in r.lines()
