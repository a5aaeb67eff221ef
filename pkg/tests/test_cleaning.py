import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from gridturan.cleaning import (
    check_host_conditions,
    check_host_conditions_sq,
    clean_subgraph,
    jiang_seiver_K,
    prepare_host,
    regularize,
    replay_cleaning,
    HostPreparationError,
)
from gridturan.generators import make_complete, make_cycle, make_path, make_star, random_graph
from gridturan.graph import Graph

from conftest import graphs


def cleaning_postconditions(G, H):
    """Recheck the cleaning guarantees with sets and integers only.

    With alpha = e/n^1.5 of the input: surviving non-isolated vertices have
    degree > e/4n, each ordered edge (u, v) has at least e/8n neighbours w
    of u with codegree(v, w) >= e^2/32n^3, and e(H) >= e/2.
    """
    n, e = G.n, G.m
    if e == 0:
        return H == G
    nb = [set(H.neighbours(v)) for v in range(n)]
    for u in range(n):
        if nb[u] and not 4 * n * len(nb[u]) > e:
            return False
    for u in range(n):
        for v in nb[u]:
            good = sum(1 for w in nb[u] if 32 * n ** 3 * len(nb[v] & nb[w] if w != v else nb[v]) >= e * e)
            if not 8 * n * good >= e:
                return False
    return 2 * H.m >= e


def test_c4_and_star_untouched():
    for G in (make_cycle(4), make_star(5)):
        H, rep = clean_subgraph(G)
        assert H == G and rep.events == []


def test_edgeless_untouched():
    H, rep = clean_subgraph(Graph(5))
    assert H == Graph(5) and rep.events == []


def test_report_accounting():
    G = random_graph(40, 0.15, seed=3)
    H, rep = clean_subgraph(G)
    removed = sum(r for _, r in rep.type1_deletions) + len(rep.type2_deletions)
    assert rep.output_edges == H.m == G.m - removed
    assert all(r >= 1 for _, r in rep.type1_deletions)
    assert replay_cleaning(G, rep) == H
    assert all(line.split()[0] in ("T1", "T2") for line in rep.lines())


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=14))
def test_cleaning_guarantees(G):
    H, rep = clean_subgraph(G)
    assert cleaning_postconditions(G, H)
    assert 4 * len(rep.type2_deletions) <= G.m
    assert replay_cleaning(G, rep) == H
    H2, rep2 = clean_subgraph(H)
    assert H2 == H and rep2.events == [] or H.m == 0


@pytest.mark.parametrize("seed", range(10))
def test_random_order_still_satisfies_guarantees(seed):
    G = random_graph(30 + seed, 0.1 + 0.05 * seed, seed=seed)
    H, rep = clean_subgraph(G, rng=random.Random(seed))
    assert cleaning_postconditions(G, H)
    assert replay_cleaning(G, rep) == H


def test_idempotent_on_sparse_graph():
    G = random_graph(50, 0.08, seed=11)
    H, _ = clean_subgraph(G)
    H2, rep2 = clean_subgraph(H)
    # thresholds are recomputed from H, which has fewer edges, so nothing new fails
    assert H2 == H and rep2.events == []


def test_jiang_seiver_constant():
    assert jiang_seiver_K(0.5) == 640


def test_regularize_examples():
    C4 = make_cycle(4)
    res = regularize(C4)
    assert res.graph == C4 and res.K == 1
    star = make_star(8)
    res = regularize(star)
    assert res.K == Fraction(max(res.graph.degrees()), min(res.graph.degrees()))
    assert res.graph.m >= 1
    Q = make_cycle(9)
    assert regularize(Q).graph == Q
    with pytest.raises(ValueError):
        regularize(Graph(3))


@given(graphs(min_n=2, max_n=12))
def test_regularize_keeps_a_log_fraction(G):
    if G.m == 0:
        return
    res = regularize(G)
    classes = len({d.bit_length() for d in G.degrees() if d})
    assert res.graph.m * classes >= G.m
    assert res.K == Fraction(max(res.graph.degrees()), min(res.graph.degrees()))


def test_host_conditions_examples():
    K = make_complete(260)
    rep = check_host_conditions_sq(K, Fraction(K.m ** 2, 260 ** 3))
    assert rep.ok
    assert check_host_conditions(make_cycle(4), Fraction(1, 2)).ok
    G = random_graph(30, 0.4, seed=1)
    over = Fraction(G.m ** 2, G.n ** 3) * Fraction(101, 100)
    assert not check_host_conditions_sq(G, over).a


def test_prepare_host_complete_graph():
    host = prepare_host(make_complete(8))
    assert host.graph == make_complete(8)
    assert host.alpha_prime_sq >= Fraction(28 ** 2, 8 ** 3)
    assert check_host_conditions_sq(host.graph, host.alpha_prime_sq).ok


def test_prepare_host_tree_fails_on_codegree_condition():
    with pytest.raises(HostPreparationError) as info:
        prepare_host(make_path(12), min_alpha=1)
    rep = info.value.report
    assert "c" in rep.failed()
    u, v = rep.witnesses["c"]["edge"]
    assert make_path(12).has_edge(u, v)


@pytest.mark.parametrize("seed", range(5))
def test_prepared_hosts_are_certified(seed):
    G = random_graph(60, 0.3, seed=seed)
    host = prepare_host(G)
    assert check_host_conditions_sq(host.graph, host.alpha_prime_sq).ok
    assert 0 not in host.graph.degrees()
    for u, v in host.graph.edges:
        assert G.has_edge(host.vertices[u], host.vertices[v])
