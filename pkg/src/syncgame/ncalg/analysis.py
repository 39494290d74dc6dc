"""Triviality semidecision, homomorphism checks and hereditary closure."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .poly import NCPoly, Presentation
from .rewrite import IdealCertificate, RewriteSystem, complete


@dataclass
class TrivialCertified:
    degree: int
    certificate: IdealCertificate | None = None
    verdict: str = "TrivialCertified"


@dataclass
class NontrivialCertified:
    witness: object
    kind: str = "evaluation"
    verdict: str = "NontrivialCertified"


@dataclass
class InconclusiveUpTo:
    degree: int
    rules: int = 0
    saturated: bool = False
    incomplete: bool = False
    verdict: str = "InconclusiveUpTo"


TrivialityStatus = TrivialCertified | NontrivialCertified | InconclusiveUpTo


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def evaluation_residuals(pres: Presentation, images: Mapping[int, object]) -> list[float]:
    """Evaluate every relation under letter -> scalar or letter -> matrix images.

    Scalar images must be rational (exact evaluation); matrix images are
    compared numerically.  Returns one residual per relation plus one per
    star-compatibility condition.
    """
    alphabet = pres.alphabet
    vals = [images[k] for k in range(len(alphabet))]
    exact = all(_is_scalar(v) for v in vals)
    if exact:
        vals = [Fraction(v) for v in vals]
        out = [abs(float(vals[k] - vals[alphabet.star[k]])) for k in range(len(vals))]
        for r in pres.relations:
            total = Fraction(0)
            for w, c in r.terms.items():
                t = c
                for k in w:
                    t *= vals[k]
                    if not t:
                        break
                total += t
            out.append(abs(float(total)))
        return out
    mats = [np.atleast_2d(np.asarray(v, dtype=complex)) for v in vals]
    d = mats[0].shape[0]
    ident = np.eye(d, dtype=complex)
    out = [float(np.linalg.norm(mats[k].conj().T - mats[alphabet.star[k]])) for k in range(len(mats))]
    for r in pres.relations:
        total = np.zeros((d, d), dtype=complex)
        for w, c in r.terms.items():
            t = ident * float(c)
            for k in w:
                t = t @ mats[k]
            total += t
        out.append(float(np.linalg.norm(total)))
    return out


def evaluation_satisfies(pres: Presentation, images: Mapping[int, object], tol: float = 1e-10) -> bool:
    res = evaluation_residuals(pres, images)
    exact = all(_is_scalar(images[k]) for k in range(len(pres.alphabet)))
    return all(r == 0 for r in res) if exact else all(r <= tol for r in res)


def triviality_status(pres: Presentation, degree: int, evaluation: Mapping[int, object] | None = None,
                      rule_cap: int = 50_000, tol: float = 1e-10, certify: bool = True) -> TrivialityStatus:
    """Semidecide whether the presented algebra is zero.

    A supplied evaluation (a unital *-representation on scalars or matrices)
    that satisfies every relation certifies nontriviality.  Otherwise the
    relations are completed up to ``degree``; if 1 reduces to 0 the collapse
    is returned together with an explicit ideal-membership certificate.
    """
    if evaluation is not None and evaluation_satisfies(pres, evaluation, tol):
        return NontrivialCertified(dict(evaluation))
    rs = complete(pres, degree, rule_cap=rule_cap, trace=certify)
    if rs.normal_form(NCPoly.one()).is_zero():
        cert = None
        if certify:
            cert = rs.ideal_combination(rs.rules[()][1], pres)
        return TrivialCertified(degree, cert)
    return InconclusiveUpTo(degree, len(rs.rules), rs.saturated, rs.incomplete)


@dataclass
class RelationCheck:
    index: int
    relation: str
    image: str
    residual: str

    @property
    def ok(self) -> bool:
        return self.residual == "0"


@dataclass
class HomomorphismReport:
    ok: bool
    star_compatible: bool
    checks: list[RelationCheck] = field(default_factory=list)
    star_failures: list[str] = field(default_factory=list)

    @property
    def failures(self) -> list[RelationCheck]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "star_compatible": self.star_compatible,
            "star_failures": self.star_failures,
            "relations": [
                {"relation": c.relation, "image": c.image, "residual_terms": c.residual} for c in self.checks
            ],
        }


def _images_list(src: Presentation, images) -> list[NCPoly]:
    names = src.alphabet.names
    if isinstance(images, Mapping):
        missing = [n for n in names if n not in images]
        if missing:
            raise ValueError(f"no image given for generators {missing}")
        extra = [k for k in images if k not in src.alphabet]
        if extra:
            raise ValueError(f"images given for unknown generators {extra}")
        return [images[n] for n in names]
    images = list(images)
    if len(images) != len(names):
        raise ValueError("image list length differs from the source alphabet")
    return images


def verify_homomorphism(src: Presentation, dst_rs: RewriteSystem, images) -> HomomorphismReport:
    """Check that letter images define a unital *-homomorphism src -> dst.

    ``images`` maps source generator names (or indices, as a list) to
    polynomials over the destination alphabet.  Each source relation is
    substituted and reduced by ``dst_rs``; the map is verified when every
    residual is exactly zero.
    """
    imgs = _images_list(src, images)
    dst = dst_rs.alphabet
    n_dst = len(dst)
    for p in imgs:
        if any(k >= n_dst for k in p.letters()):
            raise ValueError("image uses letters outside the destination alphabet")
    star_failures = []
    for k, p in enumerate(imgs):
        lhs = imgs[src.alphabet.star[k]]
        if dst_rs.normal_form(lhs - p.star(dst)):
            star_failures.append(src.alphabet.names[k])
    checks = []
    for k, r in enumerate(src.relations):
        image = r.substitute(imgs)
        residual = dst_rs.normal_form(image)
        checks.append(RelationCheck(k, src.label(k), image.format(dst), residual.format(dst)))
    ok = not star_failures and all(c.ok for c in checks)
    return HomomorphismReport(ok, not star_failures, checks, star_failures)


def hereditary_closure_step(pres: Presentation, rs: RewriteSystem, candidates: Sequence[NCPoly],
                            label: str = "hereditary") -> Presentation:
    """One hereditary saturation step.

    If sum x_i^* x_i reduces to zero, every x_i lies in the hereditary ideal
    and is appended as a relation.  Zero candidates are dropped.
    """
    xs = [x for x in candidates if not x.is_zero()]
    if not xs:
        return pres
    total = NCPoly.zero()
    for x in xs:
        total = total + x.star(pres.alphabet) * x
    if not rs.normal_form(total).is_zero():
        return pres
    return pres.extended(xs, [f"{label}[{i}]" for i in range(len(xs))])


def find_boolean_evaluation(pres: Presentation, values: Sequence = (0, 1)) -> dict[int, int] | None:
    """Search for a letter -> scalar map from ``values`` satisfying every relation.

    Letters are assigned in index order and each relation is checked as soon
    as its last letter is fixed.  Adjoint letters must receive equal values.
    The first assignment found (lexicographic in ``values`` order) is returned.
    """
    n = len(pres.alphabet)
    star = pres.alphabet.star
    buckets: list[list[NCPoly]] = [[] for _ in range(n)]
    constants = []
    for r in pres.relations:
        letters = r.letters()
        if letters:
            buckets[max(letters)].append(r)
        else:
            constants.append(r)
    if any(r.constant() != 0 for r in constants):
        return None
    vals = [Fraction(v) for v in values]
    assign: list[Fraction] = []

    def holds(r: NCPoly) -> bool:
        total = Fraction(0)
        for w, c in r.terms.items():
            t = c
            for k in w:
                t *= assign[k]
                if not t:
                    break
            total += t
        return total == 0

    def dfs(k: int) -> bool:
        if k == n:
            return True
        for v in vals:
            if star[k] < k and assign[star[k]] != v:
                continue
            assign.append(v)
            if all(holds(r) for r in buckets[k]) and dfs(k + 1):
                return True
            assign.pop()
        return False

    if not dfs(0):
        return None
    return {k: int(v) if v.denominator == 1 else v for k, v in enumerate(assign)}
