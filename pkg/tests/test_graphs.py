import itertools
import json
import random

import networkx as nx
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from syncgame.graphs import (
    CharPoly,
    Graph,
    GraphFormatError,
    GraphSizeError,
    automorphism_order,
    char_poly,
    complement,
    complete_graph,
    cycle_graph,
    empty_graph,
    format_graph,
    frucht,
    gm_switch,
    graph_to_json,
    is_isomorphic,
    is_isospectral,
    parse_graph,
    path_graph,
    poly_gcd,
    rel,
    relabel,
    spectrum_is_simple,
)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def test_constructors():
    assert complete_graph(4).edge_count == 6
    assert empty_graph(3).edge_count == 0
    assert cycle_graph(5).degrees == (2,) * 5
    assert path_graph(4).degrees == (1, 2, 2, 1)
    assert complement(complete_graph(3)) == empty_graph(3)


def test_graph_rejects_bad_matrices():
    with pytest.raises(ValueError):
        Graph.from_matrix([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        Graph.from_matrix([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])


def test_rel_is_seidel():
    g = path_graph(3)
    assert rel(g, 0, 0) == 0
    assert rel(g, 0, 1) == -1
    assert rel(g, 0, 2) == 1


@pytest.mark.parametrize(
    "g, order",
    [(complete_graph(4), 24), (cycle_graph(5), 10), (path_graph(4), 2), (empty_graph(3), 6), (frucht(), 1)],
)
def test_automorphism_order(g, order):
    assert automorphism_order(g) == order


def brute_aut(g):
    A = g.matrix()
    return sum(1 for p in itertools.permutations(range(g.n)) if np.array_equal(A[np.ix_(p, p)], A))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6))
def test_automorphism_order_matches_brute_force(g):
    assert automorphism_order(g) == brute_aut(g)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_relabel_is_found_again(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = relabel(g, perm)
    found = is_isomorphic(g, h)
    assert found is not None
    assert relabel(g, found) == h


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=6), graphs(max_n=6))
def test_isomorphism_matches_networkx(g, h):
    assert (is_isomorphic(g, h) is not None) == nx.is_isomorphic(to_nx(g), to_nx(h))


def test_isomorphism_size_limit():
    big = empty_graph(65)
    with pytest.raises(GraphSizeError):
        is_isomorphic(big, big)


def test_frucht_matches_networkx():
    assert nx.is_isomorphic(to_nx(frucht()), nx.frucht_graph())
    assert frucht().is_regular() and frucht().degrees[0] == 3


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7))
def test_char_poly_matches_sympy(g):
    x = sympy.Symbol("x")
    expected = sympy.Matrix(g.matrix().tolist()).charpoly(x).all_coeffs()
    assert [int(c) for c in char_poly(g).coefficients] == [int(c) for c in expected]


def test_char_poly_formatting():
    p = char_poly(complete_graph(2))
    assert str(p) == "x^2 - 1"
    assert p(1) == 0 and p(-1) == 0
    assert isinstance(p, CharPoly)


@pytest.mark.parametrize(
    "g, simple",
    [(frucht(), True), (complete_graph(3), False), (path_graph(4), True), (cycle_graph(5), False)],
)
def test_spectrum_is_simple(g, simple):
    assert spectrum_is_simple(g) is simple


def test_poly_gcd():
    # (x - 1)(x - 2) and (x - 1)(x + 3)
    assert poly_gcd([1, -3, 2], [1, 2, -3]) == [1, -1]


def test_gm_switch_on_frucht():
    x1, x2 = gm_switch(frucht(), range(6))
    assert x1.n == 13 and x1.degrees[12] == 6
    assert is_isospectral(x1, x2)
    assert is_isomorphic(x1, x2) is None
    assert automorphism_order(x1) == automorphism_order(x2) == 1


@pytest.mark.parametrize("subset", [range(5), range(7), [0, 0, 1, 2, 3, 4]])
def test_gm_switch_rejects_bad_subsets(subset):
    with pytest.raises(ValueError):
        gm_switch(frucht(), subset)


def test_gm_switch_rejects_irregular_base():
    with pytest.raises(ValueError):
        gm_switch(path_graph(4), [0, 1])


def random_regular(rng, n, k):
    return Graph.from_edges(n, list(nx.random_regular_graph(k, n, seed=rng.randrange(2**31)).edges()))


def test_switching_is_isospectral_random():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.choice([6, 8, 10])
        g = random_regular(rng, n, rng.choice([2, 3]))
        subset = rng.sample(range(n), n // 2)
        x1, x2 = gm_switch(g, subset)
        assert char_poly(x1) == char_poly(x2)


def test_parse_text_and_json_round_trip():
    g = cycle_graph(4)
    assert parse_graph(format_graph(g)) == g

    assert parse_graph(json.dumps(graph_to_json(g))) == g


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("3 1\n0 0\n", "line 2: self-loop"),
        ("3 2\n0 1\n1 0\n", "line 3: duplicate"),
        ("3 1\n0 5\n", "line 2: vertex index out of range"),
        ("3 2\n0 1\n", "declares 2 edges"),
        ("x y\n", "header"),
        ('{"n": 2, "edges": [[0, 1], [1, 0]]}', "edge 2: duplicate"),
    ],
)
def test_parse_errors_name_the_line(text, fragment):
    with pytest.raises(GraphFormatError, match=fragment):
        parse_graph(text)
