"""Synchronous games as explicit predicate tables, and strategy checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graphs import Graph, rel

MAX_TABLE_CELLS = 10**7
DEFAULT_SEARCH_BUDGET = 10**8


class SearchBudgetExceeded(RuntimeError):
    """The deterministic search ran out of nodes before reaching a verdict."""


class GameSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SyncGame:
    """Inputs, outputs and a 0/1 table lam[v, w, a, b] (1 = the players win).

    Synchronicity is enforced as lam[v, v, a, b] = 0 for a != b.  The diagonal
    lam[v, v, a, a] may be 0: such an output is never allowed on input v.
    """

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    lam: np.ndarray
    name: str = ""

    def __post_init__(self):
        ni, no = len(self.inputs), len(self.outputs)
        if ni * ni * no * no > MAX_TABLE_CELLS:
            raise GameSizeError(f"predicate table with {ni}x{ni}x{no}x{no} cells exceeds {MAX_TABLE_CELLS}")
        lam = np.asarray(self.lam, dtype=bool)
        if lam.shape != (ni, ni, no, no):
            raise ValueError(f"predicate table must have shape {(ni, ni, no, no)}, got {lam.shape}")
        lam = lam.copy()
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        off = ~np.eye(no, dtype=bool)
        for v in range(ni):
            if np.any(lam[v, v] & off):
                raise ValueError(f"game is not synchronous at input {self.inputs[v]!r}")

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def allowed_outputs(self, v: int) -> list[int]:
        return [a for a in range(self.n_outputs) if self.lam[v, v, a, a]]

    def zeros(self) -> list[tuple[int, int, int, int]]:
        return [tuple(z) for z in np.argwhere(~self.lam).tolist()]

    def to_json(self) -> dict:
        return {"name": self.name, "inputs": list(self.inputs), "outputs": list(self.outputs),
                "zeros": [list(z) for z in self.zeros()]}

    @classmethod
    def from_json(cls, data: dict) -> "SyncGame":
        inputs, outputs = tuple(data["inputs"]), tuple(data["outputs"])
        lam = np.ones((len(inputs), len(inputs), len(outputs), len(outputs)), dtype=bool)
        for z in data["zeros"]:
            if len(z) != 4:
                raise ValueError(f"zero cell {z} must have four indices")
            lam[tuple(z)] = False
        return cls(inputs, outputs, lam, data.get("name", ""))


def _check_table(n_inputs: int, n_outputs: int) -> None:
    cells = n_inputs * n_inputs * n_outputs * n_outputs
    if cells > MAX_TABLE_CELLS:
        raise GameSizeError(f"predicate table with {cells} cells exceeds {MAX_TABLE_CELLS}")


def _labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def hom_game(x: Graph, y: Graph) -> SyncGame:
    _check_table(x.n, y.n)
    ax = np.array(x.adj, dtype=bool)
    ay = np.array(y.adj, dtype=bool)
    # losing: edge of x sent to a non-edge of y, or same input with different outputs
    lose = ax[:, :, None, None] & ~ay[None, None, :, :]
    eye_i = np.eye(x.n, dtype=bool)
    eye_o = np.eye(y.n, dtype=bool)
    lose |= eye_i[:, :, None, None] & ~eye_o[None, None, :, :]
    return SyncGame(_labels("", x.n), _labels("", y.n), ~lose, "hom")


def iso_game(x: Graph, y: Graph) -> SyncGame:
    """The graph isomorphism game on the disjoint union V(x) + V(y).

    Labels are "x<i>" for vertices of x and "y<j>" for vertices of y.
    """
    _check_table(x.n + y.n, x.n + y.n)
    labels = _labels("x", x.n) + _labels("y", y.n)
    n = x.n + y.n
    side = np.array([0] * x.n + [1] * y.n)
    # Seidel codes on same-graph pairs; cross pairs get a code no pair can match
    code = np.full((n, n), 9, dtype=np.int8)
    code[:x.n, :x.n] = [[rel(x, v, w) for w in range(x.n)] for v in range(x.n)]
    code[x.n:, x.n:] = [[rel(y, v, w) for w in range(y.n)] for v in range(y.n)]
    eye = np.eye(n, dtype=bool)
    # axes are (v, w, a, b); outputs must lie in the other graph
    opposite = (side[:, None, None, None] != side[None, None, :, None]) & \
               (side[None, :, None, None] != side[None, None, None, :])
    same_side = (side[:, None] == side[None, :])[:, :, None, None]
    keeps_rel = code[:, :, None, None] == code[None, None, :, :]
    # across graphs: a = w exactly when b = v
    consistent = eye[None, :, :, None] == eye[:, None, None, :]
    lam = opposite & np.where(same_side, keeps_rel, consistent)
    return SyncGame(labels, labels, lam, "iso")


# -- deterministic strategies -------------------------------------------------

def perfect_deterministic_search(g: SyncGame, budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[int, ...] | None:
    """Lexicographically least h: I -> O with lam(v, w, h(v), h(w)) = 1 everywhere.

    Depth-first over inputs in order with forward checking.  Returns None
    when the search is exhausted; raises SearchBudgetExceeded if more than
    ``budget`` nodes would be needed.
    """
    ni, no = g.n_inputs, g.n_outputs
    lam = g.lam
    # compat[v][w][a]: bitmask of outputs b for w consistent with v -> a
    both = lam & lam.transpose(1, 0, 3, 2)
    weights = 1 << np.arange(no, dtype=object)
    compat = [[[int(np.dot(both[v, w, a].astype(object), weights)) for a in range(no)]
               for w in range(ni)] for v in range(ni)]
    domains = [sum(1 << a for a in g.allowed_outputs(v)) for v in range(ni)]
    nodes = 0
    assignment: list[int] = []

    def dfs(v: int, doms: list[int]) -> bool:
        nonlocal nodes
        if v == ni:
            return True
        dom = doms[v]
        while dom:
            a = (dom & -dom).bit_length() - 1
            dom &= dom - 1
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"deterministic search exceeded {budget} nodes")
            row = compat[v]
            new = doms[:]
            ok = True
            for w in range(v + 1, ni):
                new[w] = doms[w] & row[w][a]
                if not new[w]:
                    ok = False
                    break
            if ok:
                assignment.append(a)
                if dfs(v + 1, new):
                    return True
                assignment.pop()
        return False

    return tuple(assignment) if dfs(0, domains) else None


def is_winning_function(g: SyncGame, h: Sequence[int]) -> bool:
    h = np.asarray(h)
    return bool(g.lam[np.arange(g.n_inputs)[:, None], np.arange(g.n_inputs)[None, :], h[:, None], h[None, :]].all())


# -- probabilistic strategies -------------------------------------------------

@dataclass
class CondProb:
    """p[a, b, v, w] = probability of outputs (a, b) on inputs (v, w)."""

    p: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        if self.p.ndim != 4 or self.p.shape[0] != self.p.shape[1] or self.p.shape[2] != self.p.shape[3]:
            raise ValueError("density must have shape (|O|, |O|, |I|, |I|)")
        if np.any(self.p < -self.tol):
            raise ValueError("density has negative entries")
        sums = self.p.sum(axis=(0, 1))
        if np.any(np.abs(sums - 1) > self.tol):
            raise ValueError("density does not sum to 1 for every input pair")


def point_mass(h: Sequence[int], g: SyncGame) -> CondProb:
    p = np.zeros((g.n_outputs, g.n_outputs, g.n_inputs, g.n_inputs))
    for v, a in enumerate(h):
        for w, b in enumerate(h):
            p[a, b, v, w] = 1.0
    return CondProb(p)


def is_perfect_strategy(p: CondProb, g: SyncGame, tol: float = 1e-9) -> bool:
    expected = (g.n_outputs, g.n_outputs, g.n_inputs, g.n_inputs)
    if p.p.shape != expected:
        raise ValueError(f"density shape {p.p.shape} does not match game shape {expected}")
    losing = ~g.lam.transpose(2, 3, 0, 1)
    return bool(np.all(p.p[losing] <= tol))


# -- quantum witnesses --------------------------------------------------------

@dataclass
class QuantumWitness:
    """Matrices E[v, a] of size d x d, one projection per (input, output)."""

    E: np.ndarray

    def __post_init__(self):
        self.E = np.asarray(self.E, dtype=complex)
        if self.E.ndim != 4 or self.E.shape[2] != self.E.shape[3]:
            raise ValueError("witness must have shape (|I|, |O|, d, d)")

    @property
    def d(self) -> int:
        return self.E.shape[2]

    def projection_residual(self) -> float:
        E = self.E
        herm = np.linalg.norm(E - E.conj().swapaxes(-1, -2), axis=(-2, -1))
        idem = np.linalg.norm(E @ E - E, axis=(-2, -1))
        return float(max(herm.max(initial=0.0), idem.max(initial=0.0)))

    def row_sum_residual(self) -> float:
        ident = np.eye(self.d)
        return float(np.linalg.norm(self.E.sum(axis=1) - ident, axis=(-2, -1)).max(initial=0.0))

    def check(self, tol: float = 1e-10) -> None:
        r1, r2 = self.projection_residual(), self.row_sum_residual()
        if r1 > tol:
            raise ValueError(f"witness entries are not projections (residual {r1:.3g})")
        if r2 > tol:
            raise ValueError(f"witness rows do not sum to the identity (residual {r2:.3g})")

    def to_json(self) -> dict:
        E = self.E
        return {
            "d": self.d,
            "E": [[[[[float(z.real), float(z.imag)] for z in row] for row in E[v, a]]
                   for a in range(E.shape[1])] for v in range(E.shape[0])],
        }

    @classmethod
    def from_json(cls, data) -> "QuantumWitness":
        raw = data["E"] if isinstance(data, dict) else data
        arr = np.asarray(raw, dtype=float)
        if arr.ndim != 5 or arr.shape[-1] != 2:
            raise ValueError("witness entries must be matrices of [re, im] pairs")
        return cls(arr[..., 0] + 1j * arr[..., 1])


def strategy_from_witness(w: QuantumWitness, g: SyncGame, tol: float = 1e-10) -> CondProb:
    """p(a, b | v, w) = tau(E[v, a] E[w, b]) with tau the normalised trace."""
    if w.E.shape[:2] != (g.n_inputs, g.n_outputs):
        raise ValueError("witness is not indexed by the game's inputs and outputs")
    w.check(tol)
    p = np.einsum("vaij,wbji->abvw", w.E, w.E).real / w.d
    p[np.abs(p) < 1e-15] = 0.0
    return CondProb(p)


@dataclass
class WitnessReport:
    ok: bool
    residual: float
    residuals: dict[str, float] = field(default_factory=dict)
    tol: float = 1e-10

    def to_json(self) -> dict:
        return {"ok": self.ok, "residual": self.residual, "residuals": self.residuals, "tol": self.tol}


def verify_magic_unitary_witness(w: QuantumWitness, x: Graph, y: Graph, tol: float = 1e-10) -> WitnessReport:
    """Check that U = (E[g, h]) is a quantum permutation intertwining A_x and A_y."""
    E = w.E
    if E.shape[:2] != (x.n, y.n):
        raise ValueError(f"witness is indexed by {E.shape[:2]}, expected {(x.n, y.n)}")
    d = w.d
    ident = np.eye(d)

    def fro(t):
        return float(np.linalg.norm(t, axis=(-2, -1)).max(initial=0.0))

    res = {
        "projection": w.projection_residual(),
        "row_sum": fro(E.sum(axis=1) - ident),
        "column_sum": fro(E.sum(axis=0) - ident),
    }
    row_orth = 0.0
    for g in range(x.n):
        for h in range(y.n):
            for h2 in range(y.n):
                if h2 != h:
                    row_orth = max(row_orth, float(np.linalg.norm(E[g, h] @ E[g, h2])))
    col_orth = 0.0
    for h in range(y.n):
        for g in range(x.n):
            for g2 in range(x.n):
                if g2 != g:
                    col_orth = max(col_orth, float(np.linalg.norm(E[g, h] @ E[g2, h])))
    res["row_orthogonality"] = row_orth
    res["column_orthogonality"] = col_orth
    ax = np.array(x.adj, dtype=float)
    ay = np.array(y.adj, dtype=float)
    left = np.einsum("gk,khij->ghij", ax, E)
    right = np.einsum("gkij,kh->ghij", E, ay)
    res["intertwining"] = fro(left - right)
    worst = max(res.values())
    return WitnessReport(worst <= tol, worst, res, tol)


def iso_game_witness(w: QuantumWitness, x: Graph, y: Graph) -> QuantumWitness:
    """Spread a magic-unitary witness E[g, h] over the inputs/outputs of iso_game(x, y)."""
    n = x.n + y.n
    E = np.zeros((n, n, w.d, w.d), dtype=complex)
    E[: x.n, x.n:] = w.E
    E[x.n:, : x.n] = w.E.transpose(1, 0, 2, 3)
    return QuantumWitness(E)


def permutation_witness(perm: Sequence[int]) -> QuantumWitness:
    n = len(perm)
    E = np.zeros((n, n, 1, 1), dtype=complex)
    for g, h in enumerate(perm):
        E[g, h, 0, 0] = 1
    return QuantumWitness(E)
