"""Presentations of game algebras and the generator maps between BCS-type games."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bcs import LinearSystemZ2, graph_of_system, sync_bcs_game, system_vertices
from .games import SyncGame, hom_game, iso_game, perfect_deterministic_search
from .graphs import Graph, complement, complete_graph
from .ncalg import (
    Alphabet,
    HomomorphismReport,
    NCPoly,
    Presentation,
    complete,
    hereditary_closure_step,
    triviality_status,
    verify_homomorphism,
)

DEFAULT_MAP_DEGREE = 3
ONE = Fraction(1)
MAX_SYMBOLIC_VERTICES = 64


@dataclass
class GameAlgebra:
    """A game together with the presentation of its *-algebra.

    ``letters`` maps (input, output) pairs to letter indices; pairs that were
    pruned as forced zeros are absent.
    """

    game: SyncGame
    pres: Presentation
    letters: dict[tuple[int, int], int]
    reduced: bool = False

    def e(self, v: int, a: int) -> NCPoly:
        k = self.letters.get((v, a))
        return NCPoly.zero() if k is None else NCPoly.letter(k)

    def evaluation(self, h) -> dict[int, int]:
        """Scalar images e[v, a] -> [h(v) == a] of a deterministic strategy."""
        return {k: int(h[v] == a) for (v, a), k in self.letters.items()}

    def triviality(self, degree: int, rule_cap: int = 50_000, search: bool = True):
        evaluation = None
        if search:
            h = perfect_deterministic_search(self.game)
            if h is not None:
                evaluation = self.evaluation(h)
        return triviality_status(self.pres, degree, evaluation=evaluation, rule_cap=rule_cap)


def _letter_name(g: SyncGame, v: int, a: int) -> str:
    return f"e_{g.inputs[v]}_{g.outputs[a]}"


def algebra_of_game(g: SyncGame, prune: bool = True) -> GameAlgebra:
    """Projections e[v, a], rows summing to 1, products killed on losing cells.

    With ``prune`` a generator e[v, a] is dropped when lam(v, v, a, a) = 0:
    then e[v, a] = e[v, a] * sum_b e[v, b] = 0 holds in the algebra anyway.
    """
    keep = [(v, a) for v in range(g.n_inputs) for a in range(g.n_outputs) if not prune or g.lam[v, v, a, a]]
    letters = {va: k for k, va in enumerate(keep)}
    alphabet = Alphabet([_letter_name(g, v, a) for v, a in keep])
    rels, labels = [], []
    for (v, a), k in letters.items():
        e = NCPoly.letter(k)
        rels.append(e * e - e)
        labels.append(f"idempotent {alphabet.names[k]}")
    for v in range(g.n_inputs):
        row = NCPoly.one()
        for a in range(g.n_outputs):
            if (v, a) in letters:
                row = row - NCPoly.letter(letters[(v, a)])
        rels.append(row)
        labels.append(f"row sum {g.inputs[v]}")
    kept = np.zeros((g.n_inputs, g.n_outputs), dtype=bool)
    for v, a in keep:
        kept[v, a] = True
    cells = ~g.lam & kept[:, None, :, None] & kept[None, :, None, :]
    for v, w, a, b in np.argwhere(cells).tolist():
        rels.append(NCPoly._raw({(letters[(v, a)], letters[(w, b)]): ONE}))
        labels.append(f"zero cell {g.inputs[v]},{g.inputs[w]},{g.outputs[a]},{g.outputs[b]}")
    return GameAlgebra(g, Presentation(alphabet, rels, labels, name=g.name), letters)


def iso_algebra(x: Graph, y: Graph, reduced: bool = True) -> GameAlgebra:
    """Quantum permutation presentation on e[g, h], g in V(x), h in V(y).

    Relations: projections, row and column sums 1, row and column
    orthogonality, and sum_{g' ~ g} e[g', h] = sum_{h' ~ h} e[g, h'].
    Graphs of different sizes (or ``reduced=False``) give the full game algebra.
    """
    game = iso_game(x, y)
    if x.n != y.n or not reduced:
        return algebra_of_game(game)
    n = x.n
    letters = {(g, n + h): g * n + h for g in range(n) for h in range(n)}
    alphabet = Alphabet([f"e_x{g}_y{h}" for g in range(n) for h in range(n)])

    def e(g, h):
        return NCPoly.letter(g * n + h)

    rels, labels = [], []
    for g in range(n):
        for h in range(n):
            rels.append(e(g, h) * e(g, h) - e(g, h))
            labels.append(f"idempotent e_x{g}_y{h}")
    for g in range(n):
        rels.append(NCPoly.one() - sum((e(g, h) for h in range(n)), NCPoly.zero()))
        labels.append(f"row sum x{g}")
    for h in range(n):
        rels.append(NCPoly.one() - sum((e(g, h) for g in range(n)), NCPoly.zero()))
        labels.append(f"column sum y{h}")
    for g in range(n):
        for h in range(n):
            for h2 in range(n):
                if h2 != h:
                    rels.append(e(g, h) * e(g, h2))
                    labels.append(f"row orthogonality x{g}: y{h},y{h2}")
    for h in range(n):
        for g in range(n):
            for g2 in range(n):
                if g2 != g:
                    rels.append(e(g, h) * e(g2, h))
                    labels.append(f"column orthogonality y{h}: x{g},x{g2}")
    for g in range(n):
        for h in range(n):
            left = sum((e(g2, h) for g2 in x.neighbors[g]), NCPoly.zero())
            right = sum((e(g, h2) for h2 in y.neighbors[h]), NCPoly.zero())
            rels.append(left - right)
            labels.append(f"edge x{g},y{h}")
    return GameAlgebra(game, Presentation(alphabet, rels, labels, name="iso"), letters, reduced=True)


def reduced_to_full_images(reduced: GameAlgebra, full: GameAlgebra) -> dict[str, NCPoly]:
    """e[g, h] in the reduced presentation -> e_{x g, y h} in the game algebra."""
    return {reduced.pres.alphabet.names[k]: full.e(v, a) for (v, a), k in reduced.letters.items()}


def full_to_reduced_images(full: GameAlgebra, reduced: GameAlgebra) -> dict[str, NCPoly]:
    """Both e_{x g, y h} and e_{y h, x g} go to e[g, h]."""
    n = full.game.n_inputs // 2
    images = {}
    for (v, a), k in full.letters.items():
        g, h = (v, a - n) if v < n else (a, v - n)
        images[full.pres.alphabet.names[k]] = reduced.e(g, n + h)
    return images


# -- maps between syncBCS, Iso and Hom ----------------------------------------

@dataclass
class EquivalenceReport:
    degree: int
    iso_to_bcs: HomomorphismReport
    hom_to_iso: HomomorphismReport
    bcs_to_hom: HomomorphismReport
    bcs_to_hom_without_closure: HomomorphismReport
    closure_relations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.iso_to_bcs.ok and self.hom_to_iso.ok and self.bcs_to_hom.ok

    def to_json(self) -> dict:
        def summary(r: HomomorphismReport):
            return {"ok": r.ok, "relations": len(r.checks),
                    "nonzero_residuals": [c.residual for c in r.failures], "star_compatible": r.star_compatible}

        return {
            "degree": self.degree,
            "ok": self.ok,
            "iso_to_syncbcs": summary(self.iso_to_bcs),
            "hom_to_iso": summary(self.hom_to_iso),
            "syncbcs_to_hom": summary(self.bcs_to_hom),
            "syncbcs_to_hom_without_closure": summary(self.bcs_to_hom_without_closure),
            "closure_relations": self.closure_relations,
        }


@dataclass
class EquivalenceAlgebras:
    bcs: GameAlgebra
    iso: GameAlgebra
    hom: GameAlgebra
    vertices_b: list[tuple[int, int]]
    vertices_0: list[tuple[int, int]]


def equivalence_algebras(sys: LinearSystemZ2) -> EquivalenceAlgebras:
    vb = system_vertices(sys)
    if len(vb) > MAX_SYMBOLIC_VERTICES:
        raise ValueError(f"system has {len(vb)} local solutions, symbolic limit is {MAX_SYMBOLIC_VERTICES}")
    gb = graph_of_system(sys)
    g0 = graph_of_system(sys.homogeneous())
    return EquivalenceAlgebras(
        bcs=algebra_of_game(sync_bcs_game(sys)),
        iso=algebra_of_game(iso_game(gb, g0)),
        hom=algebra_of_game(hom_game(complete_graph(sys.m), complement(gb))),
        vertices_b=vb,
        vertices_0=system_vertices(sys.homogeneous()),
    )


def iso_to_bcs_images(alg: EquivalenceAlgebras) -> dict[str, NCPoly]:
    """e[(i,x),(j,y)] and e[(j,y),(i,x)] go to [i == j] e[i, x + y]."""
    bcs = alg.bcs
    out_index = {int(label[::-1], 2): k for k, label in enumerate(bcs.game.outputs)}
    nb = len(alg.vertices_b)
    images = {}
    for (v, a), k in alg.iso.letters.items():
        p, q = (v, a - nb) if v < nb else (a, v - nb)
        i, x = alg.vertices_b[p]
        j, y = alg.vertices_0[q]
        img = bcs.e(i, out_index[x ^ y]) if i == j else NCPoly.zero()
        images[alg.iso.pres.alphabet.names[k]] = img
    return images


def hom_to_iso_images(alg: EquivalenceAlgebras) -> dict[str, NCPoly]:
    """e[j, (i,x)] goes to e[(i,x), (j,0)]."""
    nb = len(alg.vertices_b)
    zero_vertex = {j: q for q, (j, y) in enumerate(alg.vertices_0) if y == 0}
    return {alg.hom.pres.alphabet.names[k]: alg.iso.e(p, nb + zero_vertex[j])
            for (j, p), k in alg.hom.letters.items()}


def bcs_to_hom_images(alg: EquivalenceAlgebras, m: int) -> dict[str, NCPoly]:
    """e[i, x] goes to f[i, x] = sum_k e[k, (i, x)]."""
    vertex = {vx: p for p, vx in enumerate(alg.vertices_b)}
    images = {}
    for (i, a), k in alg.bcs.letters.items():
        x = int(alg.bcs.game.outputs[a][::-1], 2)
        p = vertex[(i, x)]
        images[alg.bcs.pres.alphabet.names[k]] = sum((alg.hom.e(kk, p) for kk in range(m)), NCPoly.zero())
    return images


def hereditary_candidates(alg: EquivalenceAlgebras, m: int) -> list[NCPoly]:
    """q_i = 1 - sum_k sum_{x in S_i} e[k, (i, x)] for each row i."""
    out = []
    for i in range(m):
        p = NCPoly.zero()
        for q, (row, _) in enumerate(alg.vertices_b):
            if row == i:
                for k in range(m):
                    p = p + alg.hom.e(k, q)
        out.append(NCPoly.one() - p)
    return out


def equivalence_maps(sys: LinearSystemZ2, degree: int = DEFAULT_MAP_DEGREE, rule_cap: int = 50_000) -> EquivalenceReport:
    """Verify the three generator maps Iso -> syncBCS, Hom -> Iso, syncBCS -> Hom.

    The last map lands in the quotient of the Hom algebra by one hereditary
    closure step; it is also checked without that step.
    """
    alg = equivalence_algebras(sys)
    rs_bcs = complete(alg.bcs.pres, degree, rule_cap)
    rs_iso = complete(alg.iso.pres, degree, rule_cap)
    rs_hom = complete(alg.hom.pres, degree, rule_cap)
    r1 = verify_homomorphism(alg.iso.pres, rs_bcs, iso_to_bcs_images(alg))
    r2 = verify_homomorphism(alg.hom.pres, rs_iso, hom_to_iso_images(alg))
    images3 = bcs_to_hom_images(alg, sys.m)
    bare = verify_homomorphism(alg.bcs.pres, rs_hom, images3)
    closed = hereditary_closure_step(alg.hom.pres, rs_hom, hereditary_candidates(alg, sys.m))
    added = closed.relation_strings()[len(alg.hom.pres.relations):]
    rs_closed = complete(closed, degree, rule_cap) if added else rs_hom
    r3 = verify_homomorphism(alg.bcs.pres, rs_closed, images3)
    return EquivalenceReport(degree, r1, r2, r3, bare, added)


def small_systems() -> dict[str, LinearSystemZ2]:
    """The two systems used for the map checks: x1 + x2 = 0, and a 2 x 3 chain."""
    return {
        "1x2": LinearSystemZ2.from_lists([[1, 1]], [0]),
        "2x3": LinearSystemZ2.from_lists([[1, 1, 0], [0, 1, 1]], [1, 0]),
    }


def sum_of_missing_colours(m: int, n: int) -> NCPoly:
    """sum_a (1 - sum_x e[x, a]) in the algebra of Hom(K_m, K_n)."""
    alg = algebra_of_game(hom_game(complete_graph(m), complete_graph(n)))
    total = NCPoly.zero()
    for a in range(n):
        total = total + NCPoly.one() - sum((alg.e(x, a) for x in range(m)), NCPoly.zero())
    return total


__all__ = [
    "DEFAULT_MAP_DEGREE",
    "EquivalenceAlgebras",
    "EquivalenceReport",
    "GameAlgebra",
    "algebra_of_game",
    "bcs_to_hom_images",
    "equivalence_algebras",
    "equivalence_maps",
    "full_to_reduced_images",
    "hereditary_candidates",
    "hom_to_iso_images",
    "iso_algebra",
    "iso_to_bcs_images",
    "reduced_to_full_images",
    "small_systems",
    "sum_of_missing_colours",
]
