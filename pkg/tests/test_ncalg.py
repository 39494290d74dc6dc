import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from syncgame.game_algebra import algebra_of_game, iso_algebra, sum_of_missing_colours
from syncgame.games import hom_game
from syncgame.graphs import complement, complete_graph, cycle_graph
from syncgame.ncalg import (
    Alphabet,
    InconclusiveUpTo,
    NCPoly,
    NontrivialCertified,
    Presentation,
    RewriteSystem,
    TrivialCertified,
    complete,
    evaluation_satisfies,
    find_boolean_evaluation,
    hereditary_closure_step,
    is_confluent,
    normal_form,
    triviality_status,
    unresolved_critical_pairs,
    verify_homomorphism,
)
from syncgame.ncalg.rewrite import rules_from_relations

L = NCPoly.letter


def test_poly_arithmetic_is_exact():
    p = L(0) * Fraction(1, 3) + L(1)
    q = p * p
    assert q.coefficient((0, 0)) == Fraction(1, 9)
    assert (p - p).is_zero()
    with pytest.raises(TypeError):
        NCPoly({(0,): 0.5})


def test_deglex_leading_word():
    p = L(0) * L(1) + L(1) * L(0) + L(1)
    assert p.leading_word() == (1, 0)


def test_star_reverses_and_maps_letters():
    a = Alphabet.with_adjoints(["x", "y"])
    p = L(0) * L(2) + 3
    assert p.star(a) == L(3) * L(1) + 3


def test_alphabet_rejects_non_involution():
    with pytest.raises(ValueError):
        Alphabet(["a", "b"], [1, 1])


def test_presentation_is_star_closed():
    a = Alphabet.with_adjoints(["u"])
    pres = Presentation(a, [L(0) * L(0) - L(0)])
    assert len(pres.relations) == 2
    for k, r in enumerate(pres.relations):
        j, alpha = pres.star_of[k]
        assert r.star(a) == pres.relations[j] * alpha


def test_presentation_drops_zero_and_duplicates():
    a = Alphabet(["e"])
    pres = Presentation(a, [L(0) - L(0), L(0) * L(0) - L(0), (L(0) * L(0) - L(0)) * 2])
    assert len(pres.relations) == 1


def test_idempotent_rule():
    a = Alphabet(["e"])
    rs = complete(Presentation(a, [L(0) * L(0) - L(0)]), 3)
    assert normal_form(L(0) * L(0), rs) == L(0)
    assert normal_form(L(0) ** 5, rs) == L(0)


def test_projection_with_adjoint_letter():
    a = Alphabet.with_adjoints(["e"])
    pres = Presentation(a, [L(0) * L(0) - L(0), L(1) - L(0)])
    rs = complete(pres, 3)
    assert len(rs) == 2 and rs.saturated


def test_complete_rejects_low_degree():
    a = Alphabet(["e"])
    with pytest.raises(ValueError):
        complete(Presentation(a, [L(0) ** 3]), 2)


def test_rule_cap_marks_incomplete():
    alg = iso_algebra(cycle_graph(4), cycle_graph(4), reduced=False)
    rs = complete(alg.pres, 4, rule_cap=5)
    assert rs.incomplete and not rs.saturated


def test_iso_k3_vs_empty_collapses_with_certificate():
    alg = iso_algebra(complete_graph(3), complement(complete_graph(3)))
    status = triviality_status(alg.pres, 3)
    assert isinstance(status, TrivialCertified)
    assert status.certificate.verify(alg.pres)
    assert status.certificate.target == NCPoly.one()


def test_trace_replays():
    alg = iso_algebra(complete_graph(3), complement(complete_graph(3)))
    rs = complete(alg.pres, 3, trace=True)
    assert rs.replay(alg.pres)


def test_iso_c5_is_nontrivial_via_identity():
    alg = iso_algebra(cycle_graph(5), cycle_graph(5))
    status = triviality_status(alg.pres, 3, evaluation=alg.evaluation(list(range(5, 10)) + list(range(5))))
    assert isinstance(status, NontrivialCertified)


def test_iso_kn_not_collapsed():
    alg = iso_algebra(complete_graph(3), complete_graph(3))
    rs = complete(alg.pres, 4)
    assert normal_form(NCPoly.one(), rs) == NCPoly.one()


def test_missing_colours_sum_to_minus_one():
    alg = algebra_of_game(hom_game(complete_graph(5), complete_graph(4)))
    rs = complete(alg.pres, 2)
    assert normal_form(sum_of_missing_colours(5, 4), rs) == NCPoly.scalar(-1)


def test_hom_k5_k4_is_inconclusive_at_degree_4():
    alg = algebra_of_game(hom_game(complete_graph(5), complete_graph(4)))
    status = triviality_status(alg.pres, 4, certify=False)
    assert isinstance(status, InconclusiveUpTo) and status.degree == 4


# -- property tests on a saturated system -------------------------------------

def c4_system():
    alg = iso_algebra(cycle_graph(4), cycle_graph(4), reduced=False)
    return alg, complete(alg.pres, 4)


C4_ALG, C4_RS = c4_system()


@st.composite
def polys(draw, letters, max_deg=4, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        w = tuple(draw(st.lists(st.sampled_from(letters), max_size=max_deg)))
        terms[w] = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
    return NCPoly(terms)


C4_LETTERS = list(range(len(C4_ALG.pres.alphabet)))


def test_c4_system_is_saturated_and_confluent():
    assert C4_RS.saturated
    assert not unresolved_critical_pairs(C4_RS)


@settings(max_examples=50, deadline=None)
@given(polys(C4_LETTERS))
def test_normal_form_idempotent(p):
    q = normal_form(p, C4_RS)
    assert normal_form(q, C4_RS) == q
    assert all(not C4_RS.is_reducible(w) for w in q.terms)


@settings(max_examples=50, deadline=None)
@given(polys(C4_LETTERS), polys(C4_LETTERS), st.fractions(max_denominator=5), st.fractions(max_denominator=5))
def test_normal_form_linear(p, q, a, b):
    lhs = normal_form(p * a + q * b, C4_RS)
    assert lhs == normal_form(p, C4_RS) * a + normal_form(q, C4_RS) * b


@settings(max_examples=30, deadline=None)
@given(polys(C4_LETTERS), st.integers(0, 2**32))
def test_confluence_under_random_rule_order(p, seed):
    assert C4_RS.normal_form_random(p, random.Random(seed)) == normal_form(p, C4_RS)


def test_confluence_detector_finds_broken_system():
    a = Alphabet(["x", "y"])
    # xy -> x and yx -> y overlap in xyx without resolving
    rs = rules_from_relations(a, [L(0) * L(1) - L(0), L(1) * L(0) - L(1), L(0) * L(0)], 3)
    assert not is_confluent(rs)


# -- brute-force oracle for a commutative two-letter presentation --------------

def words(n_letters, degree):
    return list(itertools.product(range(n_letters), repeat=degree))


def ideal_span_rank(relations, degree, extra=None):
    """Rank of {u r v} of total degree `degree` (homogeneous relations), optionally with one more vector."""
    basis = {w: k for k, w in enumerate(words(2, degree))}
    rows = []
    for r in relations:
        d = r.degree()
        for left in range(degree - d + 1):
            for u in words(2, left):
                for v in words(2, degree - d - left):
                    p = r.sandwich(u, v)
                    row = [0] * len(basis)
                    for w, c in p.terms.items():
                        row[basis[w]] = c
                    rows.append(row)
    if extra is not None:
        row = [0] * len(basis)
        for w, c in extra.terms.items():
            row[basis[w]] = c
        rows.append(row)
    return sympy.Matrix(rows).rank() if rows else 0


@settings(max_examples=25, deadline=None)
@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(3, 4),
       st.lists(st.integers(-3, 3), min_size=16, max_size=16))
def test_commutative_membership_matches_linear_algebra(alpha, beta, degree, coeffs):
    a, b = L(0), L(1)
    rels = [a * b - b * a, a * a - a * b * alpha - b * b * beta]
    rs = complete(Presentation(Alphabet(["a", "b"]), rels), 4)
    p = NCPoly({w: c for w, c in zip(words(2, degree), coeffs) if c})
    in_ideal = ideal_span_rank(rels, degree, p) == ideal_span_rank(rels, degree)
    assert normal_form(p, rs).is_zero() == in_ideal


# -- homomorphisms and closure -------------------------------------------------

def test_identity_map_is_homomorphism():
    alg = iso_algebra(cycle_graph(4), cycle_graph(4))
    rs = complete(alg.pres, 3)
    ids = {n: L(k) for k, n in enumerate(alg.pres.alphabet.names)}
    assert verify_homomorphism(alg.pres, rs, ids).ok


def test_doubling_map_fails_idempotency():
    a = Alphabet(["e"])
    pres = Presentation(a, [L(0) * L(0) - L(0)])
    rs = complete(pres, 3)
    report = verify_homomorphism(pres, rs, {"e": L(0) * 2})
    assert not report.ok
    assert report.failures[0].residual == "2*e"  # 4e^2 - 2e reduces to 2e


def test_map_with_unknown_generator_is_rejected():
    a = Alphabet(["e"])
    pres = Presentation(a, [L(0) * L(0) - L(0)])
    with pytest.raises(ValueError):
        verify_homomorphism(pres, complete(pres, 2), {"e": L(0), "f": L(0)})


def test_hereditary_closure_keeps_presentation_for_nonzero_sum():
    a = Alphabet(["e"])
    pres = Presentation(a, [L(0) * L(0) - L(0)])
    rs = complete(pres, 3)
    assert hereditary_closure_step(pres, rs, [L(0)]) is pres
    assert hereditary_closure_step(pres, rs, [NCPoly.zero()]) is pres


def test_hereditary_closure_adds_relations():
    # e, f projections with e + f = 0: then e*e + f*f = 0 and both vanish
    a = Alphabet(["e", "f"])
    pres = Presentation(a, [L(0) * L(0) - L(0), L(1) * L(1) - L(1), L(0) + L(1)])
    rs = complete(pres, 3)
    closed = hereditary_closure_step(pres, rs, [L(0), L(1)])
    assert len(closed.relations) > len(pres.relations)


def test_boolean_evaluation_search():
    alg = algebra_of_game(hom_game(complete_graph(3), complete_graph(3)))
    ev = find_boolean_evaluation(alg.pres)
    assert ev is not None and evaluation_satisfies(alg.pres, ev)
    alg = algebra_of_game(hom_game(complete_graph(4), complete_graph(3)))
    assert find_boolean_evaluation(alg.pres) is None


def test_rewrite_system_json_round_trip():

    rs2 = RewriteSystem.from_json(C4_RS.to_json())
    p = C4_ALG.e(0, 4) * C4_ALG.e(1, 5) + C4_ALG.e(0, 4)
    assert normal_form(p, rs2) == normal_form(p, C4_RS)
