import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncgame.certificates import (
    CERTIFIED,
    INCONCLUSIVE,
    PASS,
    REFUTED,
    TRIVIAL,
    classical_qaut_certificate,
    degree_obstruction,
    eigenvector_supports,
    isospectrality_obstruction,
    niso_pipeline,
)
from syncgame.bcs import graph_of_system, magic_square_instance
from syncgame.game_algebra import iso_algebra
from syncgame.graphs import (
    Graph,
    GraphSizeError,
    complement,
    complete_graph,
    cycle_graph,
    empty_graph,
    frucht,
    gm_switch,
    path_graph,
    relabel,
    spectrum_is_simple,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def atlas(n):
    return [Graph.from_edges(g.number_of_nodes(), list(g.edges()))
            for g in nx.graph_atlas_g()[1:] if g.number_of_nodes() == n]


def test_frucht_has_trivial_quantum_automorphisms():
    rep = classical_qaut_certificate(frucht())
    assert rep.verdict == TRIVIAL
    ev = rep.evidence
    assert ev["simple_spectrum"] and ev["supports_ok"] and ev["aut_order"] == 1
    assert ev["band_hits"] == 0 and ev["pair_margin"] > 1e-6


def test_k3_fails_simplicity():
    rep = classical_qaut_certificate(complete_graph(3))
    assert rep.verdict == INCONCLUSIVE and not rep.evidence["simple_spectrum"]


def test_path_is_classical_but_not_trivial():
    # P4 has simple spectrum, every eigenvector is nowhere zero, Aut = Z2
    rep = classical_qaut_certificate(path_graph(4))
    assert rep.verdict == CERTIFIED and rep.evidence["aut_order"] == 2


def test_disjoint_supports_are_inconclusive():
    # P2 + P3: eigenvectors of the two components have disjoint supports
    g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)])
    if spectrum_is_simple(g):
        rep = classical_qaut_certificate(g)
        assert rep.verdict == INCONCLUSIVE and rep.evidence["disjoint_pairs"]


def test_ambiguity_band_is_inconclusive():
    rep = classical_qaut_certificate(frucht(), support_eps=0.05, band_low=1e-9)
    assert rep.verdict == INCONCLUSIVE and rep.evidence["band_hits"] > 0


def test_size_limit():
    with pytest.raises(GraphSizeError):
        classical_qaut_certificate(empty_graph(65))


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_never_certified_without_simple_spectrum(g):
    rep = classical_qaut_certificate(g)
    if not spectrum_is_simple(g):
        assert rep.verdict == INCONCLUSIVE
    if rep.verdict in (CERTIFIED, TRIVIAL):
        assert rep.evidence["simple_spectrum"] and rep.evidence["supports_ok"]


def test_supports_evidence_shape():
    sup = eigenvector_supports(frucht())
    assert len(sup["eigenvalues"]) == 12 and len(sup["supports"]) == 12


def test_degree_obstruction_examples():
    assert degree_obstruction(complete_graph(3), complement(complete_graph(3))).verdict == REFUTED
    rep = degree_obstruction(cycle_graph(5), cycle_graph(5))
    assert rep.verdict == PASS
    assert rep.evidence["blocks"] == [{"degree": 2, "x": [0, 1, 2, 3, 4], "y": [0, 1, 2, 3, 4]}]


def test_degree_obstruction_isolates_added_vertex():
    x1, x2 = gm_switch(frucht(), range(6))
    blocks = degree_obstruction(x1, x2).evidence["blocks"]
    assert {"degree": 6, "x": [12], "y": [12]} in blocks


def test_degree_refutation_implies_collapse_for_small_pairs():
    rng = random.Random(11)
    pairs = []
    for n in range(1, 5):
        pairs += [(x, y) for x in atlas(n) for y in atlas(n)]
    five = atlas(5)
    pairs += [(rng.choice(five), rng.choice(five)) for _ in range(40)]
    refuted = 0
    for x, y in pairs:
        if degree_obstruction(x, y).verdict == REFUTED:
            refuted += 1
            assert iso_algebra(x, y).triviality(3).verdict == "TrivialCertified"
    assert refuted > 20


def test_isospectrality_obstruction_examples():
    assert isospectrality_obstruction(complete_graph(4), cycle_graph(4)).verdict == REFUTED
    ms = magic_square_instance()
    gb, g0 = graph_of_system(ms), graph_of_system(ms.homogeneous())
    assert isospectrality_obstruction(gb, g0).verdict == PASS
    x1, x2 = gm_switch(frucht(), range(6))
    assert isospectrality_obstruction(x1, x2).verdict == PASS


@settings(max_examples=30, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_isospectrality_invariant_under_relabeling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert isospectrality_obstruction(g, relabel(g, perm)).verdict == PASS


def test_niso_pipeline_default():
    rep = niso_pipeline()
    assert rep["subset"] == [0, 1, 2, 3, 4, 5]
    assert rep["isospectral"] and not rep["isomorphic"]
    assert rep["aut_orders"] == [1, 1]
    assert rep["added_vertex_degree"] == 6 and rep["added_vertex_isolated"]
    assert rep["base_degrees_in_x1"] == {"3": 6, "4": 6}
    assert rep["frucht_certificate"] == TRIVIAL
    assert rep["x1_certificate"] == TRIVIAL


def test_niso_isospectral_for_random_subsets():
    rng = random.Random(5)
    for _ in range(100):
        subset = rng.sample(range(12), 6)
        x1, x2 = gm_switch(frucht(), subset)
        assert isospectrality_obstruction(x1, x2).verdict == PASS


@pytest.mark.parametrize("subset", [[0, 1, 2], [0, 1, 2, 3, 4, 12], [0, 0, 1, 2, 3, 4]])
def test_niso_rejects_invalid_subsets(subset):
    with pytest.raises(ValueError):
        niso_pipeline(subset)
