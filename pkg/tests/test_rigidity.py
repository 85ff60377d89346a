from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidmlt.graph import (
    Graph,
    build_Hd,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    degree_stats,
    double_banana,
    empty_graph,
    glue,
    one_extension,
    path_graph,
    zero_extension,
)
from rigidmlt.rigidity import (
    Framework,
    find_circuit,
    find_circuit_edges,
    framework_rank,
    gcr,
    generic_rank,
    is_circuit,
    is_d_independent,
    is_d_rigid,
    is_redundantly_rigid,
    random_framework,
    rigidity_matrix,
    target_rigid,
)

from oracles import exact_generic_rank, graphs


def test_rigidity_matrix_k2_row():
    f = Framework.from_points(complete_graph(2), [(0, 0), (1, 0)])
    assert rigidity_matrix(f).tolist() == [[-1, 0, 1, 0]]


def test_rigidity_matrix_d0_is_empty():
    r = rigidity_matrix(Framework(complete_graph(3), 0, ((),) * 3))
    assert r.shape == (3, 0)


@given(graphs(min_n=2, max_n=6), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_translations_in_kernel(g, d, seed):
    f = random_framework(g, d, seed)
    r = rigidity_matrix(f)
    for axis in range(d):
        t = [Fraction(int(i % d == axis)) for i in range(d * g.n)]
        assert all(x == 0 for x in r @ t)


def test_random_framework_deterministic_and_distinct():
    g = complete_graph(30)
    a, b = random_framework(g, 3, 11), random_framework(g, 3, 11)
    assert a == b
    assert len(set(a.points)) == 30
    assert all(abs(x) <= 2 ** 20 for p in a.points for x in p)
    with pytest.raises(ValueError):
        random_framework(g, 0)


def test_generic_rank_examples():
    assert generic_rank(complete_graph(3), 2).rank == 3
    assert generic_rank(complete_graph(4), 2).rank == 5
    k55 = complete_bipartite(5, 5)
    assert generic_rank(k55, 4).rank == 25
    assert generic_rank(k55, 3).rank == 24


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7), st.integers(1, 4))
def test_generic_rank_matches_exact_oracle(g, d):
    prof = generic_rank(g, d, seed=5)
    assert prof.rank == exact_generic_rank(g, d)
    assert prof.rank <= min(g.m, d * g.n, prof.target_rigid)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=2, max_n=7), st.integers(1, 3))
def test_rank_monotone(g, d):
    r = generic_rank(g, d).rank
    assert generic_rank(g, d + 1).rank >= r
    ne = g.non_edges()
    if ne:
        assert generic_rank(g.add_edge(*ne[0]), d).rank >= r


def test_independence_examples():
    assert is_d_independent(path_graph(6), 1)
    assert not is_d_independent(complete_graph(5), 3)
    h3 = build_Hd(3)
    assert not is_d_independent(h3, 3)
    assert all(is_d_independent(h3.remove_edge(*e), 3) for e in h3.edges)


@pytest.mark.parametrize("d", range(1, 6))
def test_complete_simplex_is_redundantly_rigid(d):
    assert is_d_rigid(complete_graph(d + 2), d)
    assert is_redundantly_rigid(complete_graph(d + 2), d)


def test_rigidity_examples():
    assert not is_d_rigid(double_banana(), 3)
    assert not is_d_rigid(cycle_graph(4), 2)
    assert is_d_rigid(complete_graph(3), 5)
    assert not is_d_rigid(path_graph(3), 5)
    assert target_rigid(4, 3) == 6 and target_rigid(5, 3) == 9


def test_find_circuit_examples():
    k5 = find_circuit(complete_graph(5), 3)
    assert k5 == complete_graph(5)
    assert find_circuit(path_graph(5), 2) is None
    assert find_circuit(complete_bipartite(3, 3), 2) is None


@pytest.mark.parametrize("seed", range(6))
def test_find_circuit_in_k6(seed):
    c = find_circuit(complete_graph(6), 3, seed)
    # K_5, or K_6 minus two disjoint edges; both are 3-circuits
    assert c.m in (10, 13)
    assert degree_stats(c)[0] >= 4
    assert is_circuit(c, 3)


@settings(max_examples=25, deadline=None)
@given(graphs(min_n=3, max_n=7), st.integers(1, 3), st.integers(0, 100))
def test_circuits_have_min_degree_above_d(g, d, seed):
    c = find_circuit(g, d, seed)
    if c is None:
        assert is_d_independent(g, d)
        return
    assert degree_stats(c)[0] >= d + 1
    assert is_circuit(c, d)


def test_circuit_predicates():
    assert is_circuit(build_Hd(3), 3)
    assert is_circuit(double_banana(), 3)
    assert not is_circuit(complete_graph(6), 3)
    assert not is_circuit(empty_graph(3), 1)
    assert is_circuit(cycle_graph(5), 1)


def test_gcr_examples():
    assert gcr(empty_graph(4)) == 1
    assert gcr(complete_bipartite(5, 5)) == 5
    for n in range(1, 9):
        assert gcr(complete_graph(n)) == n
        # at d = n-2 K_n has exactly one edge more than the rigid rank
        if n >= 3:
            assert comb(n, 2) == target_rigid(n, n - 2) + 1


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7))
def test_gcr_bounded_and_subgraph_monotone(g):
    k = gcr(g)
    assert 1 <= k <= max(g.n, 1)
    if g.m:
        assert gcr(g.remove_edge(*g.edges[0])) <= k


@settings(max_examples=25, deadline=None)
@given(graphs(min_n=3, max_n=7), st.integers(1, 3), st.data())
def test_extensions_preserve_independence(g, d, data):
    if not is_d_independent(g, d) or g.n < d + 1:
        return
    nbrs = data.draw(st.permutations(range(g.n)))[:d]
    assert is_d_independent(zero_extension(g, d, nbrs), d)
    if g.m:
        x, y = data.draw(st.sampled_from(g.edges))
        others = [v for v in range(g.n) if v not in (x, y)]
        if len(others) >= d - 1:
            extra = data.draw(st.permutations(others))[: d - 1]
            assert is_d_independent(one_extension(g, d, (x, y), extra), d)


def test_rank_plus_one_across_small_separator():
    rng = random.Random(2)
    for _ in range(10):
        a = complete_graph(rng.randint(4, 5))
        b = complete_graph(rng.randint(4, 5))
        k = rng.randint(0, 2)
        g, maps = glue([a, b], [(i, i) for i in range(k)])
        u = a.n - 1
        v = maps[1][b.n - 1]
        assert generic_rank(g.add_edge(u, v), 3).rank == generic_rank(g, 3).rank + 1


def test_framework_rank_at_explicit_points():
    f = Framework.from_points(complete_graph(3), [(0, 0), (1, 0), (2, 0)])
    assert framework_rank(f) == 2
    f = Framework.from_points(complete_graph(3), [(0, 0), (1, 0), (0, 1)])
    assert framework_rank(f) == 3


def test_random_framework_rank_is_generic():
    hits = 0
    for s in range(200):
        g = [complete_bipartite(3, 4), build_Hd(3), complete_graph(6)][s % 3]
        hits += framework_rank(random_framework(g, 3, s)) == generic_rank(g, 3).rank
    assert hits == 200
