"""Exact finite simple graphs.

Adjacency data is stored as integer tuples so that every derived quantity
(characteristic polynomials, isomorphisms, automorphism counts) is exact.
Vertices are ``0 .. n-1``.  Graphs here are irreflexive; the reflexive
convention used for quantum graphs is applied in :mod:`syncgame.quantum_graph`.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_SEARCH_VERTICES = 64


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


class GraphSizeError(ValueError):
    """Raised when an exact search is requested on a graph that is too large."""


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(self.adj) != self.n or any(len(row) != self.n for row in self.adj):
            raise ValueError("adjacency matrix must be n x n")
        for v in range(self.n):
            if self.adj[v][v] != 0:
                raise ValueError(f"self-loop at vertex {v}")
            for w in range(v + 1, self.n):
                a = self.adj[v][w]
                if a not in (0, 1) or a != self.adj[w][v]:
                    raise ValueError(f"adjacency not symmetric 0/1 at ({v}, {w})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [[0] * n for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u][v] = rows[v][u] = 1
        return cls(n, tuple(tuple(r) for r in rows))

    @classmethod
    def from_matrix(cls, matrix) -> "Graph":
        rows = [[int(x) for x in row] for row in matrix]
        return cls(len(rows), tuple(tuple(r) for r in rows))

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(w for w in range(self.n) if self.adj[v][w]) for v in range(self.n))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.adj)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(self.n) for w in range(v + 1, self.n) if self.adj[v][w]]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees) // 2

    def has_edge(self, v: int, w: int) -> bool:
        return bool(self.adj[v][w])

    def matrix(self) -> np.ndarray:
        return np.array(self.adj, dtype=np.int64)

    def is_regular(self) -> bool:
        return len(set(self.degrees)) == 1


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, w) for v in range(n) for w in range(v + 1, n)])


def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])


def rel(g: Graph, v: int, w: int) -> int:
    """Seidel relation: 0 on the diagonal, -1 on edges, +1 on non-edges."""
    if not (0 <= v < g.n and 0 <= w < g.n):
        raise IndexError(f"vertex out of range for a graph on {g.n} vertices")
    if v == w:
        return 0
    return -1 if g.adj[v][w] else 1


def complement(g: Graph) -> Graph:
    return Graph(g.n, tuple(tuple(0 if v == w else 1 - g.adj[v][w] for w in range(g.n)) for v in range(g.n)))


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Return the graph h with h[perm[v]][perm[w]] = g[v][w]."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of the vertex set")
    rows = [[0] * g.n for _ in range(g.n)]
    for v in range(g.n):
        for w in range(g.n):
            rows[perm[v]][perm[w]] = g.adj[v][w]
    return Graph(g.n, tuple(tuple(r) for r in rows))


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    p = np.zeros((len(perm), len(perm)), dtype=np.int64)
    for v, w in enumerate(perm):
        p[v, w] = 1
    return p


# -- isomorphism search -------------------------------------------------------

def _refine(g: Graph, h: Graph, cg: list[int], ch: list[int]):
    """Joint colour refinement of two coloured graphs.

    Returns the stable colourings, or None as soon as the colour histograms
    of the two sides differ (no colour-preserving isomorphism can exist).
    """
    ng, nh = g.neighbors, h.neighbors
    classes = len(set(cg))
    while True:
        sg = [(cg[v], tuple(sorted(cg[u] for u in ng[v]))) for v in range(g.n)]
        sh = [(ch[v], tuple(sorted(ch[u] for u in nh[v]))) for v in range(h.n)]
        if Counter(sg) != Counter(sh):
            return None
        palette = {s: i for i, s in enumerate(sorted(set(sg)))}
        cg = [palette[s] for s in sg]
        ch = [palette[s] for s in sh]
        if len(palette) == classes:
            return cg, ch
        classes = len(palette)


def _target_cell(colors: list[int]) -> int | None:
    sizes = Counter(colors)
    cells = [(size, c) for c, size in sizes.items() if size > 1]
    return min(cells)[1] if cells else None


def _isomorphisms(g: Graph, h: Graph, cg: list[int], ch: list[int]) -> Iterator[tuple[int, ...]]:
    refined = _refine(g, h, cg, ch)
    if refined is None:
        return
    cg, ch = refined
    cell = _target_cell(cg)
    if cell is None:
        where = {c: w for w, c in enumerate(ch)}
        perm = tuple(where[c] for c in cg)
        if all(g.adj[v][u] == h.adj[perm[v]][perm[u]] for v in range(g.n) for u in g.neighbors[v]):
            yield perm
        return
    v = cg.index(cell)
    fresh = max(cg) + 1
    for w in range(h.n):
        if ch[w] != cell:
            continue
        cg2, ch2 = list(cg), list(ch)
        cg2[v] = fresh
        ch2[w] = fresh
        yield from _isomorphisms(g, h, cg2, ch2)


def _check_size(*graphs: Graph) -> None:
    for g in graphs:
        if g.n > MAX_SEARCH_VERTICES:
            raise GraphSizeError(f"exact search is limited to {MAX_SEARCH_VERTICES} vertices, got {g.n}")


def is_isomorphic(g: Graph, h: Graph) -> tuple[int, ...] | None:
    """Find a permutation pi with A_g P = P A_h (P[v, pi[v]] = 1), or None.

    Exhaustive individualisation/refinement backtracking, so a None answer is
    a proof of non-isomorphism.
    """
    _check_size(g, h)
    if g.n != h.n or g.edge_count != h.edge_count or sorted(g.degrees) != sorted(h.degrees):
        return None
    return next(_isomorphisms(g, h, [0] * g.n, [0] * h.n), None)


def automorphism_order(g: Graph) -> int:
    """|Aut(g)| by orbit-stabiliser along an individualisation chain."""
    _check_size(g)
    order = 1
    colors = [0] * g.n
    while True:
        colors, _ = _refine(g, g, colors, colors)
        cell = _target_cell(colors)
        if cell is None:
            return order
        v = colors.index(cell)
        fresh = max(colors) + 1
        orbit = 0
        for w in range(g.n):
            if colors[w] != cell:
                continue
            left, right = list(colors), list(colors)
            left[v] = right[w] = fresh
            if next(_isomorphisms(g, g, left, right), None) is not None:
                orbit += 1
        order *= orbit
        colors = list(colors)
        colors[v] = fresh


# -- spectra ------------------------------------------------------------------

@dataclass(frozen=True)
class CharPoly:
    """Integer coefficients of det(xI - A), highest degree first."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not self.coefficients or self.coefficients[0] != 1:
            raise ValueError("characteristic polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coefficients):
            k = self.degree - i
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            body = f"{mag}" if k == 0 else (mono if mag == 1 else f"{mag}{mono}")
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts) or "+ 0"
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def char_poly(g: Graph) -> CharPoly:
    """Faddeev-LeVerrier over Python integers (every division is exact)."""
    n = g.n
    a = np.array(g.adj, dtype=object)
    ident = np.identity(n, dtype=object) * 1
    coeffs = [1]
    m = np.zeros((n, n), dtype=object)
    c = 1
    for k in range(1, n + 1):
        m = a.dot(m) + ident * c
        am = a.dot(m)
        tr = sum(am[i, i] for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        c = -(tr // k)
        coeffs.append(int(c))
    return CharPoly(tuple(int(x) for x in coeffs))


def is_isospectral(g: Graph, h: Graph) -> bool:
    return char_poly(g) == char_poly(h)


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def poly_gcd(p: Sequence, q: Sequence) -> list[Fraction]:
    """Monic gcd over Q of two coefficient lists (highest degree first)."""
    a = [Fraction(x) for x in p]
    b = [Fraction(x) for x in q]
    while a and a[0] == 0:
        a.pop(0)
    while b and b[0] == 0:
        b.pop(0)
    while b:
        a, b = b, _poly_rem(a, b)
    return [x / a[0] for x in a] if a else []


def spectrum_is_simple(g: Graph) -> bool:
    """True iff the characteristic polynomial is square-free."""
    p = char_poly(g).coefficients
    deriv = [c * (len(p) - 1 - i) for i, c in enumerate(p[:-1])]
    if not deriv:
        return True
    return len(poly_gcd(p, deriv)) == 1


# -- named constructions ------------------------------------------------------

FRUCHT_LCF = (-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2)


def frucht() -> Graph:
    """The Frucht graph, from its LCF code on the Hamiltonian 12-cycle."""
    n = len(FRUCHT_LCF)
    edges = {tuple(sorted((v, (v + 1) % n))) for v in range(n)}
    edges |= {tuple(sorted((v, (v + s) % n))) for v, s in enumerate(FRUCHT_LCF)}
    return Graph.from_edges(n, sorted(edges))


def gm_switch(base: Graph, subset: Iterable[int]) -> tuple[Graph, Graph]:
    """Add a vertex joined to ``subset`` and, separately, to its complement.

    ``base`` must be regular on 2m vertices and ``subset`` must have m elements;
    the two resulting graphs on 2m+1 vertices are then cospectral.
    """
    subset = sorted(set(subset))
    if base.n % 2 or not base.is_regular():
        raise ValueError("base graph must be regular on an even number of vertices")
    m = base.n // 2
    if len(subset) != m or any(not 0 <= v < base.n for v in subset):
        raise ValueError(f"subset must contain exactly {m} vertices of the base graph")
    rest = [v for v in range(base.n) if v not in subset]
    new = base.n
    joined = Graph.from_edges(base.n + 1, base.edges + [(v, new) for v in subset])
    switched = Graph.from_edges(base.n + 1, base.edges + [(v, new) for v in rest])
    return joined, switched


# -- file formats -------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the edge-list format ("n m" then m lines "u v") or its JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from exc
        return _graph_from_records(data.get("n"), [(i + 1, e) for i, e in enumerate(data.get("edges", []))], "edge")
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise GraphFormatError("line 1: empty graph file")
    no, header = lines[0]
    try:
        n, m = (int(x) for x in header.split())
    except ValueError:
        raise GraphFormatError(f"line {no}: expected header 'n m'") from None
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"line {no}: header declares {m} edges, found {len(body)}")
    records = []
    for no, ln in body:
        parts = ln.split()
        try:
            records.append((no, [int(x) for x in parts]))
        except ValueError:
            raise GraphFormatError(f"line {no}: expected two vertex indices") from None
    return _graph_from_records(n, records, "line")


def _graph_from_records(n, records, unit: str) -> Graph:
    if not isinstance(n, int) or n < 1:
        raise GraphFormatError("line 1: vertex count must be a positive integer")
    seen = set()
    edges = []
    for no, rec in records:
        if len(rec) != 2:
            raise GraphFormatError(f"{unit} {no}: expected two vertex indices")
        u, v = rec
        if not (isinstance(u, int) and isinstance(v, int)) or not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"{unit} {no}: vertex index out of range")
        if u == v:
            raise GraphFormatError(f"{unit} {no}: self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"{unit} {no}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}
