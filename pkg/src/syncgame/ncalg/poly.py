"""Free *-algebra elements over the rationals and finite presentations.

Words are tuples of letter indices; the empty tuple is the unit.  Words are
compared in degree-lexicographic order with letters ordered by their index,
which is the order in which the alphabet declared them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Word = tuple[int, ...]


def word_key(w: Word) -> tuple[int, Word]:
    """Sort key realising the deglex order."""
    return (len(w), w)


class Alphabet:
    """Ordered generator names with an involutive star map."""

    def __init__(self, names: Sequence[str], star: Sequence[int] | None = None):
        self.names = tuple(names)
        self.star = tuple(range(len(self.names))) if star is None else tuple(star)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        if len(self.star) != len(self.names):
            raise ValueError("star map must cover every letter")
        for k, s in enumerate(self.star):
            if not 0 <= s < len(self.names) or self.star[s] != k:
                raise ValueError(f"star map is not an involution at letter {self.names[k]!r}")
        self._index = {name: k for k, name in enumerate(self.names)}

    @classmethod
    def self_adjoint(cls, names: Sequence[str]) -> "Alphabet":
        return cls(names)

    @classmethod
    def with_adjoints(cls, names: Sequence[str], suffix: str = "'") -> "Alphabet":
        """Letters x and x' for every name, x' being the adjoint of x."""
        letters, star = [], []
        for k, name in enumerate(names):
            letters += [name, name + suffix]
            star += [2 * k + 1, 2 * k]
        return cls(letters, star)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names and self.star == other.star

    def __hash__(self) -> int:
        return hash((self.names, self.star))

    def __repr__(self) -> str:
        return f"Alphabet({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def is_self_adjoint(self, k: int) -> bool:
        return self.star[k] == k

    def star_word(self, w: Word) -> Word:
        return tuple(self.star[k] for k in reversed(w))

    def format_word(self, w: Word) -> str:
        return "*".join(self.names[k] for k in w) if w else "1"


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("NCPoly coefficients must be exact (int or Fraction)")
    return Fraction(c)


class NCPoly:
    """A finite rational combination of words; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        self.terms: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                c = _frac(c)
                if c:
                    self.terms[tuple(w)] = c

    @classmethod
    def _raw(cls, terms: dict[Word, Fraction]) -> "NCPoly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls._raw({(): Fraction(1)})

    @classmethod
    def scalar(cls, c) -> "NCPoly":
        c = _frac(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def letter(cls, k: int) -> "NCPoly":
        return cls._raw({(k,): Fraction(1)})

    @classmethod
    def word(cls, w: Iterable[int], c=1) -> "NCPoly":
        c = _frac(c)
        return cls._raw({tuple(w): c} if c else {})

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def letters(self) -> set[int]:
        return {k for w in self.terms for k in w}

    def leading_word(self) -> Word:
        if not self.terms:
            raise ValueError("zero polynomial has no leading word")
        return max(self.terms, key=word_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_word()]

    def sorted_terms(self, descending: bool = True) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=descending)

    def coefficient(self, w: Word) -> Fraction:
        return self.terms.get(tuple(w), Fraction(0))

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def monic(self) -> "NCPoly":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        return self if lc == 1 else self * (1 / lc)

    # -- arithmetic --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == NCPoly.scalar(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return NCPoly.scalar(other)
        raise TypeError(f"cannot combine NCPoly with {type(other).__name__}")

    def __add__(self, other) -> "NCPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NCPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return NCPoly.zero()
            return NCPoly._raw({w: v * c for w, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = out.get(w, 0) + c1 * c2
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NCPoly._raw(out)

    def __rmul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            return self * other
        return self._coerce(other) * self

    def __pow__(self, k: int) -> "NCPoly":
        out = NCPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def sandwich(self, left: Word, right: Word, c=1) -> "NCPoly":
        """Return c * left * self * right."""
        c = _frac(c)
        if not c:
            return NCPoly.zero()
        return NCPoly._raw({left + w + right: v * c for w, v in self.terms.items()})

    def star(self, alphabet: Alphabet) -> "NCPoly":
        return NCPoly._raw({alphabet.star_word(w): c for w, c in self.terms.items()})

    def substitute(self, images: Sequence["NCPoly"]) -> "NCPoly":
        """Replace letter k by images[k]; products are expanded."""
        out = NCPoly.zero()
        for w, c in self.terms.items():
            term = NCPoly.scalar(c)
            for k in w:
                term = term * images[k]
                if not term:
                    break
            out = out + term
        return out

    def format(self, alphabet: Alphabet) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            mag = abs(c)
            if not w:
                body = str(mag)
            elif mag == 1:
                body = alphabet.format_word(w)
            else:
                body = f"{mag}*{alphabet.format_word(w)}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        inner = ", ".join(f"{w}: {c}" for w, c in self.sorted_terms())
        return f"NCPoly({{{inner}}})"


@dataclass
class Presentation:
    """Generators plus relations (each meaning ``r = 0``), closed under star.

    Zero relations are dropped.  For each relation its adjoint is appended
    unless it is already present up to a nonzero scalar.  ``star_of[k]`` is a
    pair ``(j, s)`` with ``star(relations[k]) == s * relations[j]``.
    """

    alphabet: Alphabet
    relations: list[NCPoly] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        rels = list(self.relations)
        labels = list(self.labels) + [""] * (len(rels) - len(self.labels))
        self.relations, self.labels = [], []
        self._monic_index: dict[NCPoly, int] = {}
        self.star_of: list[tuple[int, Fraction]] = []
        for r, lab in zip(rels, labels):
            self._add(r, lab)

    def _add(self, r: NCPoly, label: str) -> int | None:
        if r.is_zero():
            return None
        n = len(self.alphabet)
        if any(k >= n for k in r.letters()):
            raise ValueError("relation uses a letter outside the alphabet")
        key = r.monic()
        if key in self._monic_index:
            return self._monic_index[key]
        k = self._push(r, label, key)
        s = r.star(self.alphabet)
        skey = s.monic()
        if skey in self._monic_index:
            j = self._monic_index[skey]
        else:
            j = self._push(s, f"{label}*" if label else "", skey)
        # star(r_k) = s = alpha * r_j
        alpha = s.leading_coefficient() / self.relations[j].leading_coefficient()
        self.star_of[k] = (j, alpha)
        self.star_of[j] = (k, 1 / alpha)
        return k

    def _push(self, r: NCPoly, label: str, key: NCPoly) -> int:
        self.relations.append(r)
        self.labels.append(label)
        self.star_of.append((len(self.relations) - 1, Fraction(1)))
        self._monic_index[key] = len(self.relations) - 1
        return len(self.relations) - 1

    def add_relation(self, r: NCPoly, label: str = "") -> None:
        self._add(r, label)

    def extended(self, extra: Iterable[NCPoly], labels: Iterable[str] | None = None) -> "Presentation":
        extra = list(extra)
        labels = list(labels) if labels is not None else [""] * len(extra)
        return Presentation(self.alphabet, self.relations + extra, self.labels + labels, self.name)

    def max_degree(self) -> int:
        return max((r.degree() for r in self.relations), default=0)

    def gen(self, name: str) -> NCPoly:
        return NCPoly.letter(self.alphabet.index(name))

    def label(self, k: int) -> str:
        return self.labels[k] or self.relations[k].format(self.alphabet)

    def relation_strings(self) -> list[str]:
        return [r.format(self.alphabet) for r in self.relations]
