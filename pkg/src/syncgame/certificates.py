"""Computable obstructions and certificates for quantum symmetry of graphs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graphs import (
    Graph,
    GraphSizeError,
    automorphism_order,
    char_poly,
    frucht,
    gm_switch,
    is_isomorphic,
    spectrum_is_simple,
)

SUPPORT_EPS = 1e-6
BAND_LOW = 1e-9
MAX_CERT_VERTICES = 64

CERTIFIED = "CertifiedClassicalQAut"
TRIVIAL = "TrivialQAut"
REFUTED = "Refuted"
PASS = "Pass"
INCONCLUSIVE = "Inconclusive"


@dataclass
class CertificateReport:
    verdict: str
    reason: str | None = None
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "evidence": self.evidence}


def eigenvector_supports(g: Graph, support_eps: float = SUPPORT_EPS, band_low: float = BAND_LOW) -> dict:
    """Supports of unit eigenvectors and how cleanly they separate from zero."""
    vals, vecs = np.linalg.eigh(g.matrix().astype(float))
    mags = np.abs(vecs)  # column k is the eigenvector of vals[k]
    in_support = mags > support_eps
    band = (mags > band_low) & ~in_support
    n = g.n
    disjoint = []
    margin = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            shared = in_support[:, i] & in_support[:, j]
            if not shared.any():
                disjoint.append([i, j])
                continue
            margin = min(margin, float(np.minimum(mags[shared, i], mags[shared, j]).max()))
    entries = mags[in_support]
    return {
        "eigenvalues": [float(v) for v in vals],
        "min_gap": float(np.diff(vals).min()) if n > 1 else None,
        "supports": [[int(v) for v in np.flatnonzero(in_support[:, k])] for k in range(n)],
        "band_hits": int(band.sum()),
        "disjoint_pairs": disjoint,
        "pair_margin": None if margin == np.inf else margin,
        "min_support_entry": float(entries.min()) if entries.size else None,
    }


def classical_qaut_certificate(g: Graph, support_eps: float = SUPPORT_EPS,
                               band_low: float = BAND_LOW) -> CertificateReport:
    """Certify that every quantum automorphism of g is classical.

    Requires an exactly simple spectrum and pairwise intersecting eigenvector
    supports.  Entries between band_low and support_eps are treated as
    undecidable in double precision and make the result Inconclusive.
    """
    if g.n > MAX_CERT_VERTICES:
        raise GraphSizeError(f"certificate limited to {MAX_CERT_VERTICES} vertices, got {g.n}")
    simple = spectrum_is_simple(g)
    evidence: dict = {"simple_spectrum": simple, "char_poly": str(char_poly(g))}
    if not simple:
        return CertificateReport(INCONCLUSIVE, "repeated eigenvalue", evidence)
    sup = eigenvector_supports(g, support_eps, band_low)
    evidence.update(sup)
    evidence["distinct_eigenvalues"] = g.n
    if sup["band_hits"]:
        evidence["supports_ok"] = False
        return CertificateReport(INCONCLUSIVE, "eigenvector entries inside the ambiguity band", evidence)
    supports_ok = not sup["disjoint_pairs"] and (g.n < 2 or sup["pair_margin"] > support_eps)
    evidence["supports_ok"] = supports_ok
    if not supports_ok:
        return CertificateReport(INCONCLUSIVE, "two eigenvectors have disjoint supports", evidence)
    aut = automorphism_order(g)
    evidence["aut_order"] = aut
    return CertificateReport(TRIVIAL if aut == 1 else CERTIFIED, None, evidence)


def degree_partition(x: Graph, y: Graph) -> list[dict]:
    classes: dict[int, tuple[list[int], list[int]]] = {}
    for v, d in enumerate(x.degrees):
        classes.setdefault(d, ([], []))[0].append(v)
    for v, d in enumerate(y.degrees):
        classes.setdefault(d, ([], []))[1].append(v)
    return [{"degree": d, "x": xs, "y": ys} for d, (xs, ys) in sorted(classes.items())]


def degree_obstruction(x: Graph, y: Graph) -> CertificateReport:
    """A quantum permutation can only link vertices of equal degree.

    Different degree multisets leave some row of the magic unitary without a
    nonzero entry, so the Iso algebra is zero.  Otherwise the equal-degree
    classes give the block structure any quantum isomorphism must respect.
    """
    blocks = degree_partition(x, y)
    evidence = {"blocks": blocks}
    if sorted(x.degrees) != sorted(y.degrees):
        return CertificateReport(REFUTED, "degree multisets differ", evidence)
    return CertificateReport(PASS, None, evidence)


def isospectrality_obstruction(x: Graph, y: Graph) -> CertificateReport:
    px, py = char_poly(x), char_poly(y)
    evidence = {"char_poly_x": str(px), "char_poly_y": str(py)}
    if px != py:
        return CertificateReport(REFUTED, "characteristic polynomials differ", evidence)
    return CertificateReport(PASS, None, evidence)


DEFAULT_SUBSET = (0, 1, 2, 3, 4, 5)


def validate_subset(subset: Iterable[int], n: int = 12) -> tuple[int, ...]:
    s = tuple(sorted(int(v) for v in subset))
    if len(s) != n // 2 or len(set(s)) != len(s) or any(v < 0 or v >= n for v in s):
        raise ValueError(f"subset must be {n // 2} distinct vertices in 0..{n - 1}, got {list(subset)}")
    return s


def niso_pipeline(subset: Iterable[int] | None = None) -> dict:
    """Switch the Frucht graph and collect the evidence that the two sides differ quantumly.

    X1 joins a new vertex to ``subset``, X2 joins it to the complement.
    """
    base = frucht()
    s = validate_subset(DEFAULT_SUBSET if subset is None else subset, base.n)
    x1, x2 = gm_switch(base, s)
    new = base.n
    iso = is_isomorphic(x1, x2)
    deg = degree_obstruction(x1, x2)
    isolated = any(b["x"] == [new] and b["y"] == [new] for b in deg.evidence["blocks"])
    frucht_cert = classical_qaut_certificate(base)
    return {
        "subset": list(s),
        "isospectral": char_poly(x1) == char_poly(x2),
        "char_poly": str(char_poly(x1)),
        "isomorphic": iso is not None,
        "aut_orders": [automorphism_order(x1), automorphism_order(x2)],
        "added_vertex": new,
        "added_vertex_degree": x1.degrees[new],
        "base_degrees_in_x1": {str(d): c for d, c in sorted(Counter(x1.degrees[:new]).items())},
        "degree_blocks": deg.evidence["blocks"],
        "added_vertex_isolated": isolated,
        "frucht_certificate": frucht_cert.verdict,
        "x1_certificate": classical_qaut_certificate(x1).verdict,
        "x2_certificate": classical_qaut_certificate(x2).verdict,
    }
