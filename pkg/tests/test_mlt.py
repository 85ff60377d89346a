from __future__ import annotations

import json

import pytest
from hypothesis import given, settings

from rigidmlt.graph import (
    CapExceeded,
    Graph,
    build_Hd,
    complete_bipartite,
    complete_graph,
    cone,
    cycle_graph,
    double_banana,
    empty_graph,
    glue,
    induced_subgraph,
    max_clique,
    path_graph,
)
from rigidmlt.mlt import Kind, check_edge_monotonicity, grn_star, grn_star_witness, mlt_bounds
from rigidmlt.rigidity import gcr, is_d_independent
from rigidmlt.stress import Verdict, global_rigidity_test

from oracles import graphs


def binding(rep):
    return [c for c in rep.trace if c.payload.get("binding")]


def test_k55_interval():
    rep = mlt_bounds(complete_bipartite(5, 5))
    assert (rep.gcr, rep.mlt_lower, rep.mlt_upper, rep.exact) == (5, 4, 5, False)
    assert rep.mlt is None and rep.rule is None
    (b,) = binding(rep)
    assert b.kind is Kind.GRN_STAR_LOWER and b.payload["grn_star"] == 2


def test_hd_exact_by_size():
    rep = mlt_bounds(build_Hd(3))
    assert (rep.gcr, rep.mlt, rep.rule) == (5, 5, "TheoremSmall")


def test_double_banana_exact():
    rep = mlt_bounds(double_banana())
    assert (rep.gcr, rep.mlt, rep.rule) == (5, 5, "TheoremSmall")


def test_cone_of_k55_shifts_by_one():
    rep = mlt_bounds(cone(complete_bipartite(5, 5)))
    assert (rep.gcr, rep.mlt_lower, rep.mlt_upper, rep.cone_depth) == (6, 5, 6, 1)
    (peel,) = rep.certificates(Kind.CONE_PEEL)
    assert peel.payload == {"vertices": [10], "depth": 1}


@pytest.mark.parametrize("n", range(1, 9))
def test_complete_graphs(n):
    rep = mlt_bounds(complete_graph(n))
    assert rep.gcr == rep.mlt == n == gcr(complete_graph(n))
    assert rep.cone_depth == (n - 1 if n >= 2 else 0)


def test_small_examples():
    assert mlt_bounds(empty_graph(3)).mlt == 1
    assert mlt_bounds(path_graph(5)).mlt == 2
    assert mlt_bounds(cycle_graph(6)).mlt == 3
    with pytest.raises(ValueError):
        mlt_bounds(empty_graph(0))


def test_components_take_maximum():
    g, _ = glue([complete_graph(4), complete_graph(3)], [])
    rep = mlt_bounds(g)
    assert (rep.gcr, rep.mlt, rep.rule) == (4, 4, "ComponentSplit")
    (split,) = rep.certificates(Kind.COMPONENT_SPLIT)
    assert [c["vertices"] for c in split.payload["components"]] == [[0, 1, 2, 3], [4, 5, 6]]


def test_circuit_witness_binds_when_other_bounds_fall_short():
    # K_6 minus a 2-matching carries a PSD 3-stress of rank 2; the tail keeps
    # every equality rule out of reach and n above the grn* cap
    base = complete_graph(6).remove_edge(0, 1).remove_edge(2, 3)
    extra = [(4, 6)] + [(i, i + 1) for i in range(6, 12)] + [(i, i + 2) for i in range(6, 11)]
    g = Graph.from_edges(13, list(base.edges) + extra)
    rep = mlt_bounds(g)
    assert (rep.gcr, rep.mlt_lower, rep.mlt_upper, rep.rule) == (5, 5, 5, None)
    (b,) = binding(rep)
    assert b.kind is Kind.CIRCUIT_PSD_WITNESS and b.payload["dim"] == 3
    assert b.payload["witness"]["certified"]
    assert rep.certificates(Kind.GRN_STAR_LOWER)[0].payload == {"skipped": True}
    assert not is_d_independent(g, 3)


def test_report_json_shape():
    rep = mlt_bounds(complete_bipartite(5, 5))
    js = json.loads(json.dumps(rep.to_json()))
    assert list(js) == ["n", "m", "gcr", "mlt_lower", "mlt_upper", "exact", "cone_depth", "trace", "seed"]
    assert {c["kind"] for c in js["trace"]} >= {"GcrUpper", "CliqueLower", "GrnStarLower"}


def test_report_is_deterministic():
    g = cone(complete_bipartite(4, 4))
    assert mlt_bounds(g, seed=3).to_json() == mlt_bounds(g, seed=3).to_json()


def test_grn_star_examples():
    for n in range(3, 8):
        assert grn_star(complete_graph(n)) == n - 2
    assert grn_star(complete_graph(2)) == 0
    assert grn_star(path_graph(4)) == 0
    assert grn_star(cycle_graph(5)) == 1
    d, xs = grn_star_witness(complete_bipartite(5, 5))
    assert d == 2
    assert global_rigidity_test(induced_subgraph(complete_bipartite(5, 5), xs), 2) is Verdict.CERTIFIED
    with pytest.raises(CapExceeded):
        grn_star(empty_graph(13))


def test_edge_monotonicity():
    k4 = complete_graph(4)
    assert check_edge_monotonicity(k4.remove_edge(0, 1), (0, 1)) is True
    h3 = build_Hd(3)
    assert check_edge_monotonicity(h3, (0, 1)) is True
    assert check_edge_monotonicity(complete_bipartite(5, 5), (0, 1)) is None
    with pytest.raises(ValueError):
        check_edge_monotonicity(k4, (0, 1))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7))
def test_bounds_sandwich_known_invariants(g):
    rep = mlt_bounds(g)
    assert rep.gcr == gcr(g)
    assert len(max_clique(g)) <= rep.mlt_lower <= rep.mlt_upper == rep.gcr
    k = grn_star(g)
    if k:
        assert k + 2 <= rep.mlt_lower
    if rep.exact and rep.rule is None:
        assert any(binding(rep))


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=6))
def test_cone_identity(g):
    a, b = mlt_bounds(g), mlt_bounds(cone(g))
    assert (b.gcr, b.mlt_lower, b.mlt_upper) == (a.gcr + 1, a.mlt_lower + 1, a.mlt_upper + 1)
    assert b.cone_depth >= 1


@settings(max_examples=25, deadline=None)
@given(graphs(min_n=2, max_n=7))
def test_adding_an_edge_moves_mlt_by_at_most_one(g):
    ne = g.non_edges()
    if ne:
        assert check_edge_monotonicity(g, ne[0]) in (True, None)
