"""Binary linear systems Ax = b over Z_2 and their synchronous games.

Bit vectors are Python ints, little-endian by variable index: bit j of x is
the value of variable j.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .games import QuantumWitness, SyncGame
from .graphs import Graph

MAX_ROW_SUPPORT = 20
MAX_GRAPH_VERTICES = 64


class SystemFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LinearSystemZ2:
    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if not self.A:
            raise ValueError("system needs at least one row")
        n = len(self.A[0])
        if n < 1 or any(len(row) != n for row in self.A):
            raise ValueError("all rows must have the same positive length")
        if len(self.b) != len(self.A):
            raise ValueError("b must have one bit per row")
        for i, row in enumerate(self.A):
            if any(x not in (0, 1) for x in row) or self.b[i] not in (0, 1):
                raise ValueError("entries must be bits")
            if not any(row):
                raise ValueError(f"row {i} has no variables")

    @classmethod
    def from_lists(cls, A, b) -> "LinearSystemZ2":
        return cls(tuple(tuple(int(x) for x in row) for row in A), tuple(int(x) for x in b))

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    def row_mask(self, i: int) -> int:
        return sum(1 << j for j, a in enumerate(self.A[i]) if a)

    def support(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.A[i]) if a)

    def homogeneous(self) -> "LinearSystemZ2":
        return LinearSystemZ2(self.A, (0,) * self.m)

    def satisfies(self, x: int) -> bool:
        return all(bin(x & self.row_mask(i)).count("1") % 2 == self.b[i] for i in range(self.m))

    @cached_property
    def solution_sets(self) -> "SolutionSets":
        return solution_sets(self)


@dataclass(frozen=True)
class SolutionSets:
    supports: tuple[tuple[int, ...], ...]
    sets: tuple[tuple[int, ...], ...]

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.sets[i]


def solution_sets(sys: LinearSystemZ2) -> SolutionSets:
    """S_i: local solutions of row i, supported on the row's variables."""
    supports, sets = [], []
    for i in range(sys.m):
        v = sys.support(i)
        if len(v) > MAX_ROW_SUPPORT:
            raise ValueError(f"row {i} has {len(v)} variables, limit is {MAX_ROW_SUPPORT}")
        local = []
        for bits in range(1 << len(v)):
            if bin(bits).count("1") % 2 == sys.b[i]:
                local.append(sum(1 << j for t, j in enumerate(v) if bits >> t & 1))
        supports.append(v)
        sets.append(tuple(sorted(local)))
    return SolutionSets(tuple(supports), tuple(sets))


def bits_label(x: int, n: int) -> str:
    return "".join(str(x >> j & 1) for j in range(n))


def output_alphabet(sys: LinearSystemZ2) -> tuple[int, ...]:
    return tuple(sorted(set().union(*sys.solution_sets.sets)))


def _consistent(sys: LinearSystemZ2, i: int, x: int, j: int, y: int) -> bool:
    common = sys.row_mask(i) & sys.row_mask(j)
    return (x ^ y) & common == 0


def sync_bcs_game(sys: LinearSystemZ2) -> SyncGame:
    """Inputs are rows; outputs are local solutions (the union of all S_i)."""
    outs = output_alphabet(sys)
    index = {x: k for k, x in enumerate(outs)}
    sets = sys.solution_sets.sets
    lam = np.zeros((sys.m, sys.m, len(outs), len(outs)), dtype=bool)
    for i in range(sys.m):
        for j in range(sys.m):
            for x in sets[i]:
                for y in sets[j]:
                    if _consistent(sys, i, x, j, y):
                        lam[i, j, index[x], index[y]] = True
    return SyncGame(tuple(f"r{i}" for i in range(sys.m)), tuple(bits_label(x, sys.n) for x in outs), lam, "syncbcs")


def system_vertices(sys: LinearSystemZ2) -> list[tuple[int, int]]:
    """Vertices (i, x) of the inconsistency graph: rows ascending, then x ascending."""
    return [(i, x) for i in range(sys.m) for x in sys.solution_sets[i]]


def graph_of_system(sys: LinearSystemZ2) -> Graph:
    """Graph on local solutions, joining two of them when they disagree on a shared variable."""
    verts = system_vertices(sys)
    if len(verts) > MAX_GRAPH_VERTICES:
        raise ValueError(f"graph would have {len(verts)} vertices, limit is {MAX_GRAPH_VERTICES}")
    edges = []
    for p in range(len(verts)):
        i, x = verts[p]
        for q in range(p + 1, len(verts)):
            j, y = verts[q]
            if not _consistent(sys, i, x, j, y):
                edges.append((p, q))
    return Graph.from_edges(len(verts), edges)


@dataclass
class Elimination:
    solution: int | None
    certificate: tuple[int, ...] | None  # rows summing to (0 | 1)


def eliminate(sys: LinearSystemZ2) -> Elimination:
    """Gaussian elimination over Z_2, tracking which original rows were combined."""
    rows = [(sys.row_mask(i), sys.b[i], 1 << i) for i in range(sys.m)]
    pivots: list[tuple[int, int, int, int]] = []  # (pivot bit, mask, rhs, combo)
    for mask, rhs, combo in rows:
        for bit, pm, pr, pc in pivots:
            if mask >> bit & 1:
                mask ^= pm
                rhs ^= pr
                combo ^= pc
        if mask == 0:
            if rhs:
                cert = tuple(i for i in range(sys.m) if combo >> i & 1)
                return Elimination(None, cert)
            continue
        bit = (mask & -mask).bit_length() - 1
        # keep the pivot rows fully reduced against each other
        reduced = []
        for pb, pm, pr, pc in pivots:
            if pm >> bit & 1:
                pm ^= mask
                pr ^= rhs
                pc ^= combo
            reduced.append((pb, pm, pr, pc))
        pivots = reduced + [(bit, mask, rhs, combo)]
    x = 0
    for bit, _, rhs, _ in pivots:
        if rhs:
            x |= 1 << bit
    return Elimination(x, None)


def is_classically_solvable(sys: LinearSystemZ2) -> int | None:
    return eliminate(sys).solution


# -- the magic square ---------------------------------------------------------

def magic_square_instance() -> LinearSystemZ2:
    """Variables 3r+c of a 3x3 grid; rows sum to 0, columns to 0, 0, 1."""
    A = []
    for r in range(3):
        A.append([1 if v // 3 == r else 0 for v in range(9)])
    for c in range(3):
        A.append([1 if v % 3 == c else 0 for v in range(9)])
    return LinearSystemZ2.from_lists(A, [0, 0, 0, 0, 0, 1])


_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def magic_square_operators() -> list[np.ndarray]:
    """Two-qubit observables for the nine cells, commuting along rows and columns."""
    table = [
        [(_X, _I), (_I, _X), (_X, _X)],
        [(_I, _Z), (_Z, _I), (_Z, _Z)],
        [(_X, _Z), (_Z, _X), (_Y, _Y)],
    ]
    return [np.kron(a, b) for row in table for a, b in row]


def operator_witness(sys: LinearSystemZ2, ops: list[np.ndarray]) -> QuantumWitness:
    """E[i, x] = product over the row's variables of (I + (-1)^{x_k} O_k) / 2.

    Indexed by rows and by the output alphabet of sync_bcs_game(sys); entries
    for outputs outside S_i are zero.
    """
    d = ops[0].shape[0]
    ident = np.eye(d, dtype=complex)
    outs = output_alphabet(sys)
    E = np.zeros((sys.m, len(outs), d, d), dtype=complex)
    sets = sys.solution_sets
    for i in range(sys.m):
        allowed = set(sets[i])
        for k, x in enumerate(outs):
            if x not in allowed:
                continue
            proj = ident
            for j in sets.supports[i]:
                sign = -1 if x >> j & 1 else 1
                proj = proj @ (ident + sign * ops[j]) / 2
            E[i, k] = proj
    return QuantumWitness(E)


def magic_square_witness() -> QuantumWitness:
    return operator_witness(magic_square_instance(), magic_square_operators())


def pushforward_iso_witness(sys: LinearSystemZ2, w: QuantumWitness) -> QuantumWitness:
    """U[(i, x), (j, y)] = [i == j] E[i, x + y] for (i, x) in G_{A,b} and (j, y) in G_{A,0}."""
    outs = output_alphabet(sys)
    index = {x: k for k, x in enumerate(outs)}
    src = system_vertices(sys)
    dst = system_vertices(sys.homogeneous())
    E = np.zeros((len(src), len(dst), w.d, w.d), dtype=complex)
    for p, (i, x) in enumerate(src):
        for q, (j, y) in enumerate(dst):
            if i == j:
                E[p, q] = w.E[i, index[x ^ y]]
    return QuantumWitness(E)


# -- file format --------------------------------------------------------------

def _bits(text: str, count: int, line: int) -> list[int]:
    s = text.replace(" ", "").replace(",", "")
    if len(s) != count or any(c not in "01" for c in s):
        raise SystemFormatError(f"line {line}: expected {count} bits")
    return [int(c) for c in s]


def parse_system(text: str) -> LinearSystemZ2:
    """"m n", then m lines of n bits, then one line of m bits for b."""
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise SystemFormatError("line 1: empty system file")
    no, head = lines[0]
    try:
        m, n = (int(t) for t in head.split())
    except ValueError:
        raise SystemFormatError(f"line {no}: expected header 'm n'") from None
    if len(lines) != m + 2:
        raise SystemFormatError(f"line {no}: expected {m} matrix rows and one line for b")
    A = [_bits(ln, n, no) for no, ln in lines[1:m + 1]]
    b = _bits(lines[m + 1][1], m, lines[m + 1][0])
    try:
        return LinearSystemZ2.from_lists(A, b)
    except ValueError as exc:
        raise SystemFormatError(str(exc)) from None


def format_system(sys: LinearSystemZ2) -> str:
    lines = [f"{sys.m} {sys.n}"] + ["".join(map(str, row)) for row in sys.A] + ["".join(map(str, sys.b))]
    return "\n".join(lines) + "\n"
