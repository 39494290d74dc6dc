import itertools
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncgame.graphs import Graph, complement, complete_graph, cycle_graph, is_isomorphic, relabel
from syncgame.games import (
    CondProb,
    GameSizeError,
    QuantumWitness,
    SearchBudgetExceeded,
    SyncGame,
    hom_game,
    is_perfect_strategy,
    is_winning_function,
    iso_game,
    iso_game_witness,
    perfect_deterministic_search,
    permutation_witness,
    point_mass,
    strategy_from_witness,
    verify_magic_unitary_witness,
)


def atlas(max_n):
    return [Graph.from_edges(g.number_of_nodes(), list(g.edges()))
            for g in nx.graph_atlas_g()[1:] if g.number_of_nodes() <= max_n]


def test_hom_k2_k2_forbids_equal_colours():
    g = hom_game(complete_graph(2), complete_graph(2))
    assert not g.lam[0, 1, 0, 0] and not g.lam[0, 1, 1, 1]
    assert g.lam[0, 1, 0, 1]


def test_synchronicity_enforced():
    lam = np.ones((1, 1, 2, 2), dtype=bool)
    with pytest.raises(ValueError):
        SyncGame(("v",), ("a", "b"), lam)


@pytest.mark.parametrize(
    "x, y, solvable",
    [
        (complete_graph(3), complete_graph(3), True),
        (complete_graph(4), complete_graph(3), False),
        (complete_graph(5), complete_graph(4), False),
        (cycle_graph(5), complete_graph(3), True),
    ],
)
def test_hom_search(x, y, solvable):
    g = hom_game(x, y)
    h = perfect_deterministic_search(g)
    assert (h is not None) == solvable
    if h is not None:
        assert is_winning_function(g, h)
        assert is_perfect_strategy(point_mass(h, g), g)


def test_hom_search_is_exhaustive_oracle():
    # brute force over all 3^4 maps
    x, y = complete_graph(4), complete_graph(3)
    g = hom_game(x, y)
    assert not any(is_winning_function(g, h) for h in itertools.product(range(3), repeat=4))


def test_search_returns_lexicographically_least():
    g = hom_game(complete_graph(2), complete_graph(3))
    assert perfect_deterministic_search(g) == (0, 1)


def test_search_budget():
    g = hom_game(complete_graph(8), complete_graph(7))
    with pytest.raises(SearchBudgetExceeded):
        perfect_deterministic_search(g, budget=50)


def test_table_size_limit():
    big = complete_graph(60)
    with pytest.raises(GameSizeError):
        iso_game(big, big)


def test_iso_game_examples():
    g = iso_game(complete_graph(2), complete_graph(2))
    assert not g.lam[0, 0, 2, 3]
    assert perfect_deterministic_search(iso_game(complete_graph(3), complement(complete_graph(3)))) is None
    assert perfect_deterministic_search(iso_game(cycle_graph(5), cycle_graph(5))) is not None


def test_iso_game_iff_isomorphic_all_small_pairs():
    rng = random.Random(3)
    graphs = atlas(5)
    checked = 0
    for x in graphs:
        for y in graphs:
            if x.n != y.n:
                continue
            perm = list(range(y.n))
            rng.shuffle(perm)
            y2 = relabel(y, perm)
            h = perfect_deterministic_search(iso_game(x, y2))
            assert (h is not None) == (is_isomorphic(x, y2) is not None)
            checked += 1
    assert checked == 1 + 4 + 16 + 121 + 1156


def test_iso_game_different_sizes_unsolvable():
    assert perfect_deterministic_search(iso_game(complete_graph(2), complete_graph(3))) is None


def test_uniform_strategy_not_perfect():
    g = iso_game(complete_graph(2), complete_graph(2))
    p = np.full((4, 4, 4, 4), 1 / 16)
    assert not is_perfect_strategy(CondProb(p), g)


def test_condprob_validation():
    with pytest.raises(ValueError):
        CondProb(np.zeros((2, 2, 1, 1)))
    with pytest.raises(ValueError):
        CondProb(-np.ones((1, 1, 1, 1)))


def test_strategy_shape_mismatch():
    g = hom_game(complete_graph(2), complete_graph(2))
    with pytest.raises(ValueError):
        is_perfect_strategy(CondProb(np.ones((1, 1, 1, 1))), g)


def test_game_json_round_trip():
    g = hom_game(cycle_graph(4), complete_graph(2))
    g2 = SyncGame.from_json(g.to_json())
    assert np.array_equal(g.lam, g2.lam) and g.inputs == g2.inputs


def test_permutation_witness_reproduces_deterministic_density():
    x = cycle_graph(5)
    w = permutation_witness(list(range(5)))
    assert w.d == 1
    rep = verify_magic_unitary_witness(w, x, x)
    assert rep.ok and rep.residual == 0
    game = iso_game(x, x)
    iw = iso_game_witness(w, x, x)
    p = strategy_from_witness(iw, game)
    h = list(range(5, 10)) + list(range(5))
    assert np.array_equal(p.p, point_mass(h, game).p)
    assert is_perfect_strategy(p, game)


def test_witness_against_non_isospectral_pair_fails():
    w = permutation_witness([0, 1, 2])
    rep = verify_magic_unitary_witness(w, complete_graph(3), complement(complete_graph(3)))
    assert not rep.ok and rep.residuals["intertwining"] >= 1


def test_witness_index_mismatch():
    with pytest.raises(ValueError):
        verify_magic_unitary_witness(permutation_witness([0, 1]), complete_graph(3), complete_graph(3))


def random_projective_witness(rng, n_inputs, n_outputs, d):
    """Each input gets an orthonormal basis split into rank-1 projections and zeros."""
    E = np.zeros((n_inputs, n_outputs, d, d), dtype=complex)
    for v in range(n_inputs):
        z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        q, _ = np.linalg.qr(z)
        for k in range(d):
            a = rng.integers(n_outputs)
            E[v, a] += np.outer(q[:, k], q[:, k].conj())
    return QuantumWitness(E)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(1, 3), st.integers(1, 4))
def test_witness_density_is_valid_and_symmetric(seed, n_in, n_out, d):
    rng = np.random.default_rng(seed)
    w = random_projective_witness(rng, n_in, n_out, d)
    lam = np.ones((n_in, n_in, n_out, n_out), dtype=bool)
    for v in range(n_in):
        lam[v, v] = np.eye(n_out, dtype=bool)
    g = SyncGame(tuple(map(str, range(n_in))), tuple(map(str, range(n_out))), lam)
    p = strategy_from_witness(w, g)
    assert np.allclose(p.p.sum(axis=(0, 1)), 1)
    assert np.allclose(p.p, p.p.transpose(1, 0, 3, 2))


def test_witness_json_round_trip():
    w = permutation_witness([1, 0, 2])
    assert np.array_equal(QuantumWitness.from_json(w.to_json()).E, w.E)
