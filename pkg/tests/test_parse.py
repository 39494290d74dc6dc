from fractions import Fraction

import pytest

from syncgame.game_algebra import iso_algebra
from syncgame.graphs import complement, complete_graph
from syncgame.ncalg import (
    Alphabet,
    NCPoly,
    ParseError,
    complete,
    format_map,
    format_presentation,
    parse_expression,
    parse_map,
    parse_presentation,
    triviality_status,
    verify_homomorphism,
)

TEXT = """
# two projections
generators: e f
generators*: u
e*e = e
f*f - f
3/4*e*f + u'*u - 1   # trailing comment
"""


def test_parse_presentation():
    pres = parse_presentation(TEXT)
    a = pres.alphabet
    assert a.names == ("e", "f", "u", "u'")
    assert a.star == (0, 1, 3, 2)
    r = pres.relations[2]
    assert r.coefficient((a.index("e"), a.index("f"))) == Fraction(3, 4)


def test_round_trip_through_text():
    pres = iso_algebra(complete_graph(3), complement(complete_graph(3))).pres
    again = parse_presentation(format_presentation(pres))
    assert again.alphabet == pres.alphabet
    assert {r.monic() for r in again.relations} == {r.monic() for r in pres.relations}
    assert triviality_status(again, 3).verdict == "TrivialCertified"


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("generators: a\na*b\n", 2, 3),
        ("generators: a\na + \n", 2, 4),
        ("generators: a\n(a + 1\n", 2, 7),
        ("generators: 1a\n", 1, 13),
    ],
)
def test_parse_errors_report_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_presentation(text)
    assert info.value.line == line
    assert info.value.column == column


def test_parse_expression_powers_and_parentheses():
    a = Alphabet(["a", "b"])
    p = parse_expression("(a + b)^2 - 2", a)
    assert p == (NCPoly.letter(0) + NCPoly.letter(1)) ** 2 - 2


def test_parse_map_fills_adjoints():
    src = parse_presentation("generators*: u\nu'*u - 1\nu*u' - 1\n")
    dst = parse_presentation("generators: e\ne*e - e\n")
    images = parse_map("u = 2*e - 1\n", src, dst)
    assert images["u'"] == images["u"]
    assert parse_map(format_map(images, dst), src, dst) == images
    rs = complete(dst, 3)

    assert verify_homomorphism(src, rs, images).ok


def test_parse_map_unknown_generator():
    src = parse_presentation("generators: a\n")
    dst = parse_presentation("generators: b\n")
    with pytest.raises(ParseError, match="unknown source generator"):
        parse_map("c = b\n", src, dst)
