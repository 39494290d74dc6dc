"""Degree-truncated completion of two-sided ideals in the free algebra.

A rule ``w -> r`` encodes the ideal element ``w - r`` with ``r`` strictly
below ``w`` in deglex order.  Completion follows the Buchberger/Mora scheme:
overlaps of leading words give S-polynomials, which are reduced and turned
into new rules until no overlap of degree <= D is left unresolved.

With ``trace=True`` every rule keeps a derivation ("fact") from the input
relations, so that a collapse ``1 -> 0`` can be replayed as an explicit
combination ``sum c * a * r_k * b = 1``.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .poly import Alphabet, NCPoly, Presentation, Word, word_key

# A derivation term (c, a, fact, b) stands for c * a * poly(fact) * b.
Term = tuple[Fraction, Word, int, Word]


@dataclass
class Fact:
    poly: NCPoly
    kind: str  # "relation", "star" or "combination"
    source: object  # relation index, fact id, or list of Terms


def _heap_key(w: Word) -> tuple[int, Word]:
    # heapq is a min-heap; this key pops the deglex-largest word first
    return (-len(w), tuple(-k for k in w))


@dataclass
class RewriteSystem:
    alphabet: Alphabet
    degree_bound: int
    rules: dict[Word, tuple[NCPoly, int]] = field(default_factory=dict)
    complete_up_to: int = 0
    saturated: bool = False
    incomplete: bool = False
    pending_obstructions: int = 0
    facts: list[Fact] | None = None
    relation_count: int = 0

    def __post_init__(self):
        self._lengths: list[int] = sorted({len(w) for w in self.rules})

    # -- rule table maintenance ------------------------------------------

    def _set_rule(self, lhs: Word, rhs: NCPoly, fact: int) -> None:
        self.rules[lhs] = (rhs, fact)
        if len(lhs) not in self._lengths:
            self._lengths = sorted(set(self._lengths) | {len(lhs)})

    def _drop_rule(self, lhs: Word) -> None:
        del self.rules[lhs]
        self._lengths = sorted({len(w) for w in self.rules})

    @property
    def collapsed(self) -> bool:
        return () in self.rules

    def __len__(self) -> int:
        return len(self.rules)

    def rule_list(self) -> list[tuple[Word, NCPoly]]:
        return [(w, self.rules[w][0]) for w in sorted(self.rules, key=word_key)]

    # -- reduction ---------------------------------------------------------

    def find_match(self, w: Word) -> tuple[int, int] | None:
        """Leftmost occurrence (start, length) of a rule's left side in w."""
        rules = self.rules
        if () in rules:
            return (0, 0)
        n = len(w)
        for i in range(n):
            for ln in self._lengths:
                if i + ln > n:
                    break
                if w[i:i + ln] in rules:
                    return (i, ln)
        return None

    def is_reducible(self, w: Word) -> bool:
        return self.find_match(w) is not None

    def normal_form(self, p: NCPoly, steps: list[Term] | None = None) -> NCPoly:
        """Reduce p until no rule applies.

        If ``steps`` is given, each reduction is appended as (c, a, fact, b),
        so that ``result = p - sum c * a * fact * b``.
        """
        terms = dict(p.terms)
        heap = [(_heap_key(w), w) for w in terms]
        heapq.heapify(heap)
        out: dict[Word, Fraction] = {}
        rules = self.rules
        while heap:
            _, w = heapq.heappop(heap)
            c = terms.pop(w, None)
            if not c:
                continue
            match = self.find_match(w)
            if match is None:
                out[w] = c
                continue
            i, ln = match
            a, b = w[:i], w[i + ln:]
            rhs, fact = rules[w[i:i + ln]]
            if steps is not None:
                steps.append((c, a, fact, b))
            for rw, rc in rhs.terms.items():
                nw = a + rw + b
                old = terms.get(nw)
                if old is None:
                    terms[nw] = rc * c
                    heapq.heappush(heap, (_heap_key(nw), nw))
                else:
                    terms[nw] = old + rc * c
        return NCPoly._raw(out)

    def normal_form_random(self, p: NCPoly, rng) -> NCPoly:
        """Reduce p applying rules at random positions in random order."""
        terms = dict(p.terms)
        while True:
            redexes = []
            for w in terms:
                for i in range(len(w) + 1):
                    for ln in self._lengths:
                        if i + ln <= len(w) and w[i:i + ln] in self.rules:
                            redexes.append((w, i, ln))
            if not redexes:
                return NCPoly._raw(terms)
            w, i, ln = redexes[rng.randrange(len(redexes))]
            c = terms.pop(w)
            rhs, _ = self.rules[w[i:i + ln]]
            for rw, rc in rhs.terms.items():
                nw = w[:i] + rw + w[i + ln:]
                s = terms.get(nw, 0) + rc * c
                if s:
                    terms[nw] = s
                else:
                    terms.pop(nw, None)

    # -- traces ------------------------------------------------------------

    def replay(self, pres: Presentation) -> bool:
        """Recompute every recorded fact from its derivation, exactly."""
        if self.facts is None:
            raise ValueError("rewrite system was built without trace=True")
        for fid, fact in enumerate(self.facts):
            if fact.kind == "relation":
                expected = pres.relations[fact.source]
            elif fact.kind == "star":
                expected = self.facts[fact.source].poly.star(self.alphabet)
            else:
                expected = NCPoly.zero()
                for c, a, g, b in fact.source:
                    if g >= fid:
                        return False
                    expected = expected + self.facts[g].poly.sandwich(a, b, c)
            if expected != fact.poly:
                return False
        return True

    def ideal_combination(self, fid: int, pres: Presentation, max_terms: int = 2_000_000) -> "IdealCertificate":
        """Flatten the derivation of a fact into relation terms c * a * r_k * b."""
        if self.facts is None:
            raise ValueError("rewrite system was built without trace=True")
        needed, stack = set(), [fid]
        while stack:
            f = stack.pop()
            if f in needed:
                continue
            needed.add(f)
            fact = self.facts[f]
            if fact.kind == "star":
                stack.append(fact.source)
            elif fact.kind == "combination":
                stack.extend(g for _, _, g, _ in fact.source)
        star = self.alphabet.star_word
        expansions: dict[int, dict[tuple[Word, int, Word], Fraction]] = {}
        for f in sorted(needed):
            fact = self.facts[f]
            acc: dict[tuple[Word, int, Word], Fraction] = {}
            if fact.kind == "relation":
                acc[((), fact.source, ())] = Fraction(1)
            elif fact.kind == "star":
                for (a, k, b), c in expansions[fact.source].items():
                    j, alpha = pres.star_of[k]
                    key = (star(b), j, star(a))
                    acc[key] = acc.get(key, 0) + c * alpha
            else:
                for c, a, g, b in fact.source:
                    for (a2, k, b2), c2 in expansions[g].items():
                        key = (a + a2, k, b2 + b)
                        acc[key] = acc.get(key, 0) + c * c2
            acc = {key: c for key, c in acc.items() if c}
            if len(acc) > max_terms:
                raise OverflowError("ideal combination exceeds the term budget")
            expansions[f] = acc
        terms = sorted(((c, a, k, b) for (a, k, b), c in expansions[fid].items()),
                       key=lambda t: (t[2], word_key(t[1]), word_key(t[3])))
        return IdealCertificate(terms, self.facts[fid].poly)

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        names = self.alphabet.names

        def word(w):
            return [names[k] for k in w]

        return {
            "alphabet": list(names),
            "star": list(self.alphabet.star),
            "degree_bound": self.degree_bound,
            "complete_up_to": self.complete_up_to,
            "saturated": self.saturated,
            "incomplete": self.incomplete,
            "pending_obstructions": self.pending_obstructions,
            "rules": [
                {"lhs": word(w), "rhs": [[word(rw), str(c)] for rw, c in rhs.sorted_terms()]}
                for w, rhs in self.rule_list()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RewriteSystem":
        alphabet = Alphabet(data["alphabet"], data["star"])

        def word(names):
            return tuple(alphabet.index(x) for x in names)

        rs = cls(alphabet, data["degree_bound"], complete_up_to=data["complete_up_to"],
                 saturated=data["saturated"], incomplete=data["incomplete"],
                 pending_obstructions=data.get("pending_obstructions", 0))
        for rule in data["rules"]:
            rhs = NCPoly({word(w): Fraction(c) for w, c in rule["rhs"]})
            rs._set_rule(word(rule["lhs"]), rhs, -1)
        return rs

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass
class IdealCertificate:
    """Explicit membership proof: target = sum c * a * relations[k] * b."""

    terms: list[Term]
    target: NCPoly

    def evaluate(self, pres: Presentation) -> NCPoly:
        acc: dict[Word, Fraction] = {}
        for c, a, k, b in self.terms:
            for w, v in pres.relations[k].terms.items():
                key = a + w + b
                acc[key] = acc.get(key, 0) + c * v
        return NCPoly({w: v for w, v in acc.items() if v})

    def verify(self, pres: Presentation) -> bool:
        return self.evaluate(pres) == self.target

    def to_json(self, alphabet: Alphabet) -> list:
        return [[str(c), alphabet.format_word(a), k, alphabet.format_word(b)] for c, a, k, b in self.terms]


def unresolved_critical_pairs(rs: RewriteSystem, limit: int | None = None) -> list[tuple[Word, Word, int]]:
    """Overlaps and inclusions of rule left sides whose two reductions disagree.

    Independent of how the system was built: an empty result means every
    ambiguity resolves, so by the diamond lemma the rules are confluent and
    the irreducible words form a basis of the quotient algebra.
    """
    bad: list[tuple[Word, Word, int]] = []
    lhss = sorted(rs.rules, key=word_key)
    for l1 in lhss:
        rhs1 = rs.rules[l1][0]
        for l2 in lhss:
            rhs2 = rs.rules[l2][0]
            if l1 != l2 and len(l2) <= len(l1):
                for i in range(len(l1) - len(l2) + 1):
                    if l1[i:i + len(l2)] == l2:
                        diff = rhs1 - rhs2.sandwich(l1[:i], l1[i + len(l2):])
                        if rs.normal_form(diff):
                            bad.append((l1, l2, -1))
            for s in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - s:] != l2[:s]:
                    continue
                if not rhs1 and not rhs2:
                    continue
                diff = rhs1.sandwich((), l2[s:]) - rhs2.sandwich(l1[:len(l1) - s], ())
                if rs.normal_form(diff):
                    bad.append((l1, l2, s))
            if limit is not None and len(bad) >= limit:
                return bad
    return bad


def is_confluent(rs: RewriteSystem) -> bool:
    return not unresolved_critical_pairs(rs, limit=1)


def normal_form(p: NCPoly, rs: RewriteSystem) -> NCPoly:
    return rs.normal_form(p)


class _Completion:
    def __init__(self, pres: Presentation, degree: int, rule_cap: int, trace: bool, use_star: bool):
        self.pres = pres
        self.alphabet = pres.alphabet
        self.degree = degree
        self.rule_cap = rule_cap
        self.trace = trace
        self.use_star = use_star
        self.rs = RewriteSystem(self.alphabet, degree, facts=[] if trace else None,
                                relation_count=len(pres.relations))
        self.candidates: deque[tuple[NCPoly, list[Term] | None]] = deque()
        self.obstructions: list = []
        self.prefixes: dict[Word, set[Word]] = {}
        self.suffixes: dict[Word, set[Word]] = {}
        self.pending = 0
        self.current_degree = 0

    def new_fact(self, poly: NCPoly, kind: str, source) -> int:
        if not self.trace:
            return -1
        self.rs.facts.append(Fact(poly, kind, source))
        return len(self.rs.facts) - 1

    def run(self) -> RewriteSystem:
        for k, r in enumerate(self.pres.relations):
            fid = self.new_fact(r, "relation", k)
            self.candidates.append((r, [(Fraction(1), (), fid, ())] if self.trace else None))
        while True:
            while self.candidates:
                poly, deriv = self.candidates.popleft()
                if not self.process(poly, deriv):
                    return self.finish()
                if self.rs.collapsed:
                    return self.finish()
            if not self.obstructions:
                return self.finish()
            deg, _, l1, l2, overlap = heapq.heappop(self.obstructions)
            self.current_degree = deg
            if l1 not in self.rs.rules or l2 not in self.rs.rules:
                continue
            rhs1, f1 = self.rs.rules[l1]
            rhs2, f2 = self.rs.rules[l2]
            u = l1[:len(l1) - overlap]
            v = l2[overlap:]
            spoly = rhs2.sandwich(u, ()) - rhs1.sandwich((), v)
            deriv = [(Fraction(1), (), f1, v), (Fraction(-1), u, f2, ())] if self.trace else None
            if not self.process(spoly, deriv):
                return self.finish()
            if self.rs.collapsed:
                return self.finish()

    def process(self, poly: NCPoly, deriv: list[Term] | None) -> bool:
        steps: list[Term] | None = [] if self.trace else None
        q = self.rs.normal_form(poly, steps)
        if q.is_zero():
            return True
        lc = q.leading_coefficient()
        q = q * (1 / lc)
        fid = -1
        if self.trace:
            terms = [(c / lc, a, g, b) for c, a, g, b in deriv]
            terms += [(-c / lc, a, g, b) for c, a, g, b in steps]
            fid = self.new_fact(q, "combination", terms)
        return self.add_rule(q, fid)

    def add_rule(self, q: NCPoly, fid: int) -> bool:
        rs = self.rs
        lhs = q.leading_word()
        rhs = NCPoly.word(lhs) - q
        if not lhs:
            for w in list(rs.rules):
                rs._drop_rule(w)
            rs._set_rule((), NCPoly.zero(), fid)
            return True
        for w in [w for w in rs.rules if _contains(w, lhs)]:
            old_rhs, old_fact = rs.rules[w]
            rs._drop_rule(w)
            self._unindex(w)
            old_poly = NCPoly.word(w) - old_rhs
            self.candidates.append((old_poly, [(Fraction(1), (), old_fact, ())] if self.trace else None))
        rs._set_rule(lhs, rhs, fid)
        self._index(lhs)
        self._add_obstructions(lhs)
        if len(rs.rules) > self.rule_cap:
            rs.incomplete = True
            return False
        if self.use_star:
            s = q.star(self.alphabet)
            if s.monic() != q:
                sfid = self.new_fact(s, "star", fid)
                self.candidates.append((s, [(Fraction(1), (), sfid, ())] if self.trace else None))
        return True

    def _index(self, w: Word) -> None:
        for i in range(1, len(w)):
            self.prefixes.setdefault(w[:i], set()).add(w)
            self.suffixes.setdefault(w[i:], set()).add(w)

    def _unindex(self, w: Word) -> None:
        for i in range(1, len(w)):
            self.prefixes[w[:i]].discard(w)
            self.suffixes[w[i:]].discard(w)

    def _push_obstruction(self, l1: Word, l2: Word, overlap: int) -> None:
        if not self.rs.rules[l1][0] and not self.rs.rules[l2][0]:
            return  # two monomial rules: the S-polynomial is identically zero
        word = l1 + l2[overlap:]
        if len(word) > self.degree:
            self.pending += 1
            return
        heapq.heappush(self.obstructions, (len(word), word, l1, l2, overlap))

    def _add_obstructions(self, lhs: Word) -> None:
        n = len(lhs)
        # suffix of lhs overlapping a prefix of another left side
        for s in range(1, n):
            for other in sorted(self.prefixes.get(lhs[n - s:], ())):
                if len(other) > s:
                    self._push_obstruction(lhs, other, s)
        # prefix of lhs overlapping a suffix of another left side
        for s in range(1, n):
            for other in sorted(self.suffixes.get(lhs[:s], ())):
                if len(other) > s and other != lhs:
                    self._push_obstruction(other, lhs, s)

    def finish(self) -> RewriteSystem:
        rs = self.rs
        if rs.collapsed:
            rs.saturated = True
            rs.complete_up_to = self.degree
            rs.pending_obstructions = 0
            return rs
        self._interreduce()
        rs.pending_obstructions = self.pending + len(self.obstructions)
        if rs.incomplete:
            rs.complete_up_to = max(self.current_degree - 1, 0)
            rs.saturated = False
        else:
            rs.complete_up_to = self.degree
            rs.saturated = rs.pending_obstructions == 0
        return rs

    def _interreduce(self) -> None:
        rs = self.rs
        for lhs in sorted(rs.rules, key=word_key):
            rhs, fid = rs.rules[lhs]
            steps: list[Term] | None = [] if self.trace else None
            new_rhs = rs.normal_form(rhs, steps)
            if new_rhs == rhs:
                continue
            if self.trace:
                terms = [(Fraction(1), (), fid, ())] + [(c, a, g, b) for c, a, g, b in steps]
                fid = self.new_fact(NCPoly.word(lhs) - new_rhs, "combination", terms)
            rs.rules[lhs] = (new_rhs, fid)


def _contains(w: Word, sub: Word) -> bool:
    n, k = len(w), len(sub)
    return any(w[i:i + k] == sub for i in range(n - k + 1))


def complete(pres: Presentation, degree: int, rule_cap: int = 50_000, trace: bool = False,
             use_star: bool = True) -> RewriteSystem:
    """Complete the relations of ``pres`` over all overlaps of degree <= ``degree``.

    The result is ``saturated`` when no overlap was left unresolved, in which
    case the rules form a complete rewriting system for the whole ideal.  If
    the rule count exceeds ``rule_cap`` the partial system is returned with
    ``incomplete`` set.
    """
    if degree < pres.max_degree():
        raise ValueError(f"degree bound {degree} is below the relation degree {pres.max_degree()}")
    return _Completion(pres, degree, rule_cap, trace, use_star).run()


def rules_from_relations(alphabet: Alphabet, relations: Iterable[NCPoly], degree: int) -> RewriteSystem:
    """Orient relations into rules without completing (used in tests)."""
    rs = RewriteSystem(alphabet, degree)
    for r in relations:
        r = r.monic()
        if r:
            lhs = r.leading_word()
            rs._set_rule(lhs, NCPoly.word(lhs) - r, -1)
    return rs
