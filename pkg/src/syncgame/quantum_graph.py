"""Quantum sets, quantum adjacency matrices, and their automorphism presentations.

A quantum set is a multimatrix algebra M_{n(1)} + ... + M_{n(s)} with the
state psi = sum_i Tr(Q_i .).  Everything is written in the orthonormal basis
of L^2 obtained by Gram-Schmidt on the matrix units (blocks in order, units
row-major) for the inner product <a, b> = psi(b* a).

When every weight is the same rational scalar matrix q*I (uniform classical
points, or a single block with the normalised trace) the orthonormal basis is
the matrix-unit basis scaled by 1/sqrt(q).  Operators then have the same
matrices in both bases, and every axiom can be checked over the rationals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graphs import Graph
from .ncalg import Alphabet, NCPoly, Presentation

DEFAULT_TOL = 1e-10


def _as_fraction(x) -> Fraction | None:
    """Exact value of an int, Fraction, or rational string; None otherwise."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return None
    return None


def _complex(x) -> complex:
    if isinstance(x, str):
        return complex(float(Fraction(x)))
    return complex(x)


@dataclass
class QuantumSet:
    blocks: tuple[int, ...]
    weights: tuple[np.ndarray, ...]
    exact_scalars: tuple[Fraction, ...] | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.blocks = tuple(int(b) for b in self.blocks)
        if not self.blocks or any(b < 1 for b in self.blocks):
            raise ValueError("block sizes must be positive")
        ws = []
        for n, q in zip(self.blocks, self.weights, strict=True):
            q = np.asarray(q, dtype=complex).reshape(n, n)
            if np.linalg.norm(q - q.conj().T) > self.tol:
                raise ValueError("weight matrices must be Hermitian")
            if np.linalg.eigvalsh(q).min() <= self.tol:
                raise ValueError("weight matrices must be positive definite")
            ws.append(q)
        self.weights = tuple(ws)
        if abs(sum(np.trace(q).real for q in ws) - 1) > self.tol:
            raise ValueError("weights must have total trace 1")
        if self.exact_scalars is not None and sum(n * q for n, q in zip(self.blocks, self.exact_scalars)) != 1:
            raise ValueError("exact weights must have total trace 1")

    @classmethod
    def classical(cls, n: int) -> "QuantumSet":
        q = Fraction(1, n)
        return cls((1,) * n, tuple(np.array([[float(q)]]) for _ in range(n)), (q,) * n)

    @classmethod
    def matrix_trace(cls, n: int) -> "QuantumSet":
        """M_n with the normalised trace."""
        q = Fraction(1, n)
        return cls((n,), (np.eye(n) * float(q),), (q,))

    @classmethod
    def from_weights(cls, blocks, weights) -> "QuantumSet":
        """Weights as nested numbers or rational strings; exact when possible."""
        mats, scalars = [], []
        for n, w in zip(blocks, weights, strict=True):
            flat = list(np.asarray(w, dtype=object).reshape(-1))
            vals = [_as_fraction(x) for x in flat]
            mats.append(np.array([_complex(x) for x in flat]).reshape(n, n))
            if all(v is not None for v in vals):
                m = [vals[i * n:(i + 1) * n] for i in range(n)]
                if all(m[i][j] == (m[0][0] if i == j else 0) for i in range(n) for j in range(n)):
                    scalars.append(m[0][0])
                    continue
            scalars.append(None)
        exact = tuple(scalars) if all(s is not None for s in scalars) else None
        if exact is not None and sum(n * q for n, q in zip(blocks, exact)) != 1:
            exact = None
        return cls(tuple(blocks), tuple(mats), exact)

    @property
    def dimension(self) -> int:
        return sum(n * n for n in self.blocks)

    @property
    def uniform_scalar(self) -> Fraction | None:
        """q when every weight is exactly q * I for one rational q."""
        if self.exact_scalars is None or len(set(self.exact_scalars)) != 1:
            return None
        return self.exact_scalars[0]

    def delta_squared(self) -> Fraction | float | None:
        if self.exact_scalars is not None:
            vals = {Fraction(n) / q for n, q in zip(self.blocks, self.exact_scalars)}
            return vals.pop() if len(vals) == 1 else None
        vals = [float(np.trace(np.linalg.inv(q)).real) for q in self.weights]
        if max(vals) - min(vals) > self.tol * max(1.0, max(vals)):
            return None
        return sum(vals) / len(vals)


def delta_form(qs: QuantumSet) -> float | None:
    """delta with Tr(Q_i^{-1}) = delta^2 for every block, or None."""
    d2 = qs.delta_squared()
    return None if d2 is None else math.sqrt(d2)


# -- structure tensors --------------------------------------------------------

def _matrix_units(qs: QuantumSet) -> list[tuple[int, int, int]]:
    return [(b, j, k) for b, n in enumerate(qs.blocks) for j in range(n) for k in range(n)]


def _unit_products(qs: QuantumSet) -> tuple[np.ndarray, np.ndarray]:
    """Integer structure constants of the matrix-unit basis and the unit vector."""
    units = _matrix_units(qs)
    index = {u: s for s, u in enumerate(units)}
    d = len(units)
    m = np.zeros((d, d * d), dtype=np.int64)
    for s, (b, j, k) in enumerate(units):
        for t, (b2, l, mm) in enumerate(units):
            if b == b2 and k == l:
                m[index[(b, j, mm)], s * d + t] = 1
    one = np.array([1 if j == k else 0 for (_, j, k) in units], dtype=np.int64)
    return m, one


@dataclass
class StructureTensors:
    d: int
    m: np.ndarray
    m_star: np.ndarray
    eta: np.ndarray
    eta_star: np.ndarray
    gram: np.ndarray
    change: np.ndarray  # columns: orthonormal basis vectors in matrix-unit coordinates
    star_matrix: np.ndarray  # F with F e_i = e_i^*, as a (conjugate-linear) coefficient matrix
    exact_scale: Fraction | None = None  # q of the exact path
    unit_m: np.ndarray | None = None
    unit_one: np.ndarray | None = None


def structure_tensors(qs: QuantumSet) -> StructureTensors:
    if delta_form(qs) is None:
        raise ValueError("quantum set does not carry a delta-form")
    units = _matrix_units(qs)
    d = len(units)
    gram = np.zeros((d, d), dtype=complex)
    for s, (b, j, k) in enumerate(units):
        for t, (b2, l, mm) in enumerate(units):
            # psi(u_s^* u_t) = psi(E_kj E_lm) = [j == l] Q[m, k]
            if b == b2 and j == l:
                gram[s, t] = qs.weights[b][mm, k]
    chol = np.linalg.cholesky(gram)
    change = np.linalg.inv(chol.conj().T)  # upper triangular: Gram-Schmidt order
    inv_change = chol.conj().T
    mu, one = _unit_products(qs)
    m = np.einsum("ar,rst,sb,tc->abc", inv_change, mu.reshape(d, d, d), change, change,
                  optimize=True).reshape(d, d * d)
    eta = inv_change @ one
    star_u = np.zeros((d, d))
    index = {u: s for s, u in enumerate(units)}
    for s, (b, j, k) in enumerate(units):
        star_u[index[(b, k, j)], s] = 1
    # f_a^* = sum_c F[c, a] f_c; coefficients of f_a are conjugated by the star
    star_matrix = inv_change @ star_u @ change.conj()
    q = qs.uniform_scalar
    return StructureTensors(
        d=d,
        m=m,
        m_star=m.conj().T,
        eta=eta,
        eta_star=eta.conj(),
        gram=gram,
        change=change,
        star_matrix=star_matrix,
        exact_scale=q,
        unit_m=mu if q is not None else None,
        unit_one=one if q is not None else None,
    )


# -- quantum graphs -----------------------------------------------------------

@dataclass
class QuantumGraph:
    qset: QuantumSet
    A: np.ndarray  # object dtype of Fractions on the exact path, complex otherwise
    delta: float
    tensors: StructureTensors = field(init=False, repr=False)

    def __post_init__(self):
        self.tensors = structure_tensors(self.qset)
        d = self.qset.dimension
        A = np.asarray(self.A)
        if A.shape != (d, d):
            raise ValueError(f"adjacency matrix must be {d}x{d}, got {A.shape}")
        if A.dtype == object:
            vals = [_as_fraction(x) for x in A.reshape(-1)]
            A = np.array(vals, dtype=object).reshape(d, d) if all(v is not None for v in vals) else \
                np.array([complex(x) for x in A.reshape(-1)]).reshape(d, d)
        self.A = A

    @property
    def exact(self) -> bool:
        return self.A.dtype == object and self.tensors.exact_scale is not None

    def float_A(self) -> np.ndarray:
        if self.A.dtype == object:
            return np.array([[complex(x) for x in row] for row in self.A])
        return np.asarray(self.A, dtype=complex)


def _exact_matrix(rows) -> np.ndarray:
    return np.array([[Fraction(x) for x in row] for row in rows], dtype=object)


def from_classical(g: Graph) -> QuantumGraph:
    """Uniform classical points with A = adjacency + I (reflexive convention)."""
    qs = QuantumSet.classical(g.n)
    A = _exact_matrix([[1 if v == w else g.adj[v][w] for w in range(g.n)] for v in range(g.n)])
    return QuantumGraph(qs, A, math.sqrt(g.n))


def complete_quantum_graph(qs: QuantumSet) -> QuantumGraph:
    """A = delta^2 psi(.) 1, i.e. delta^2 times the projection onto the unit."""
    delta = delta_form(qs)
    if delta is None:
        raise ValueError("quantum set does not carry a delta-form")
    st = structure_tensors(qs)
    if st.exact_scale is not None:
        d2 = qs.delta_squared()
        one = st.unit_one
        A = np.array([[d2 * st.exact_scale * int(one[i]) * int(one[j]) for j in range(st.d)]
                      for i in range(st.d)], dtype=object)
    else:
        A = delta ** 2 * np.outer(st.eta, st.eta.conj())
    return QuantumGraph(qs, A, delta)


def quantum_complement(qg: QuantumGraph) -> QuantumGraph:
    """A' = delta^2 psi(.) 1 + identity - A."""
    full = complete_quantum_graph(qg.qset)
    d = qg.qset.dimension
    if qg.exact and full.A.dtype == object:
        A = np.array([[full.A[i, j] + (1 if i == j else 0) - qg.A[i, j] for j in range(d)] for i in range(d)],
                     dtype=object)
    else:
        A = full.float_A() + np.eye(d) - qg.float_A()
    return QuantumGraph(qg.qset, A, qg.delta)


@dataclass
class AxiomReport:
    ok: bool
    exact: bool
    residuals: dict[str, float]
    passed: dict[str, bool]
    tol: float

    def to_json(self) -> dict:
        return {"ok": self.ok, "exact": self.exact, "residuals": self.residuals, "passed": self.passed,
                "tol": self.tol}


def _fro_exact(mat) -> float:
    return math.sqrt(float(sum((x * x for x in np.asarray(mat, dtype=object).reshape(-1)), Fraction(0))))


def _conjugate_by_m(M: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """m (A x B) m* for m given as the 3-tensor M[r, s, t] (m* = conjugate transpose)."""
    X = np.tensordot(M, A, axes=([1], [0]))  # [r, t, s']
    X = np.tensordot(X, B, axes=([1], [0]))  # [r, s', t']
    return np.tensordot(X, M.conj(), axes=([1, 2], [1, 2]))


def _int_form(arr: np.ndarray) -> tuple[np.ndarray, int]:
    """Write a rational array as (integer array) / (common denominator)."""
    flat = [Fraction(x) for x in arr.flat]
    den = math.lcm(*(f.denominator for f in flat)) if flat else 1
    ints = np.array([int(f * den) for f in flat], dtype=object).reshape(arr.shape)
    return ints, den


def _exact_conjugate(M: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact m (A x B) m* for real rational M, A, B; int64 when that cannot overflow."""
    (Mi, dm), (Ai, da), (Bi, db) = _int_form(M), _int_form(A), _int_form(B)
    d = M.shape[0]
    bound = max((abs(int(x)) for x in Mi.flat), default=0) ** 2
    bound *= max((abs(int(x)) for x in Ai.flat), default=0) * max((abs(int(x)) for x in Bi.flat), default=0)
    if bound * d ** 4 < 2 ** 62:
        Mi, Ai, Bi = Mi.astype(np.int64), Ai.astype(np.int64), Bi.astype(np.int64)
    out = _conjugate_by_m(Mi, Ai, Bi)
    scale = Fraction(1, dm * dm * da * db)
    return np.array([Fraction(int(x)) * scale for x in out.flat], dtype=object).reshape(out.shape)


def check_quantum_adjacency(qg: QuantumGraph, tol: float = DEFAULT_TOL) -> AxiomReport:
    """Residuals of the three quantum adjacency axioms and of self-adjointness.

    (1) m (A x A) m* = delta^2 A
    (2) (id x eta* m)(id x A x id)(m* eta x id) = A
    (3) m (A x id) m* = delta^2 id
    """
    st = qg.tensors
    d = st.d
    if np.asarray(qg.A).shape != (d, d):
        raise ValueError("adjacency matrix does not match the quantum set dimension")
    if qg.exact:
        q = st.exact_scale
        d2 = qg.qset.delta_squared()
        mu = np.array(st.unit_m, dtype=object)
        mu3 = mu.reshape(d, d, d)
        one = np.array([Fraction(int(x)) for x in st.unit_one], dtype=object)
        A = qg.A
        ident = np.array([[Fraction(int(i == j)) for j in range(d)] for i in range(d)], dtype=object)
        # orthonormal-basis maps: m = mu / sqrt(q), eta = sqrt(q) * one
        r1 = _exact_conjugate(mu3, A, A) * (1 / q) - A * d2
        T = mu.T.dot(one).reshape(d, d)
        W = one.dot(mu).reshape(d, d)
        r2 = T.dot(A.T).dot(W) - A
        r3 = _exact_conjugate(mu3, A, ident) * (1 / q) - ident * d2
        r4 = A - A.T
        res = {"axiom1": _fro_exact(r1), "axiom2": _fro_exact(r2), "axiom3": _fro_exact(r3),
               "self_adjoint": _fro_exact(r4)}
        passed = {k: v == 0 for k, v in res.items()}
        return AxiomReport(all(passed.values()), True, res, passed, tol)
    A = qg.float_A()
    d2 = qg.delta ** 2
    m, ms = st.m, st.m_star
    # m_star is the conjugate transpose of m in the orthonormal basis
    ident = np.eye(d)
    m3 = m.reshape(d, d, d)
    r1 = _conjugate_by_m(m3, A, A) - d2 * A
    T = (ms @ st.eta).reshape(d, d)
    W = (st.eta_star @ m).reshape(d, d)
    r2 = T @ A.T @ W - A
    r3 = _conjugate_by_m(m3, A, ident) - d2 * ident
    r4 = A - A.conj().T
    res = {k: float(np.linalg.norm(v)) for k, v in
           (("axiom1", r1), ("axiom2", r2), ("axiom3", r3), ("self_adjoint", r4))}
    passed = {k: v <= tol for k, v in res.items()}
    return AxiomReport(all(passed.values()), False, res, passed, tol)


# -- automorphism / isomorphism presentations ---------------------------------

def _rational(x: complex, tol: float = 1e-9) -> Fraction:
    if abs(x.imag) > tol:
        raise ValueError("presentation needs real structure constants in the orthonormal basis")
    f = Fraction(x.real).limit_denominator(10**6)
    if abs(float(f) - x.real) > tol:
        raise ValueError(f"coefficient {x.real!r} is not rational")
    return f


def _rationalise(terms: dict[tuple[int, ...], complex]) -> NCPoly:
    """Scale a relation with float coefficients to exact rationals."""
    terms = {w: c for w, c in terms.items() if abs(c) > 1e-12}
    if not terms:
        return NCPoly.zero()
    pivot = max(terms.values(), key=abs)
    return NCPoly({w: _rational(c / pivot) for w, c in terms.items()})


def qiso_presentation(x: QuantumGraph, y: QuantumGraph, letter: str = "p") -> Presentation:
    """Generators p_i_j (i: basis of L^2(y), j: basis of L^2(x)) with adjoints p_i_j'.

    Relations encode: p is unitary; rho(f_j) = sum_i f_i (x) p_ij is a unital
    *-homomorphism; and rho(A_x .) = (A_y (x) 1) rho, entrywise p A_x = A_y p.
    """
    if abs(x.delta - y.delta) > DEFAULT_TOL:
        warnings.warn("quantum graphs have different delta; building the presentation anyway", stacklevel=2)
    sx, sy = x.tensors, y.tensors
    dx, dy = sx.d, sy.d
    alphabet = Alphabet.with_adjoints([f"{letter}_{i}_{j}" for i in range(dy) for j in range(dx)])

    def p(i, j):
        return (2 * (i * dx + j),)

    def ps(i, j):
        return (2 * (i * dx + j) + 1,)

    rels, labels = [], []

    def add(terms, label):
        rels.append(_rationalise(terms))
        labels.append(label)

    # unitarity: p* p = 1 (size dx) and p p* = 1 (size dy)
    for i in range(dx):
        for j in range(dx):
            t = {ps(k, i) + p(k, j): 1.0 for k in range(dy)}
            if i == j:
                t[()] = -1.0
            add(t, f"unitary left {i},{j}")
    for i in range(dy):
        for j in range(dy):
            t = {p(i, k) + ps(j, k): 1.0 for k in range(dx)}
            if i == j:
                t[()] = -1.0
            add(t, f"unitary right {i},{j}")
    mx = sx.m.reshape(dx, dx, dx)
    my = sy.m.reshape(dy, dy, dy)
    for c in range(dy):
        for a in range(dx):
            for b in range(dx):
                t: dict = {}
                for i in range(dy):
                    for l in range(dy):
                        if abs(my[c, i, l]) > 1e-12:
                            key = p(i, a) + p(l, b)
                            t[key] = t.get(key, 0) + my[c, i, l]
                for cc in range(dx):
                    if abs(mx[cc, a, b]) > 1e-12:
                        key = p(c, cc)
                        t[key] = t.get(key, 0) - mx[cc, a, b]
                add(t, f"multiplicative {c};{a},{b}")
    for i in range(dy):
        t = {p(i, j): sx.eta[j] for j in range(dx)}
        t[()] = -sy.eta[i]
        add(t, f"unit {i}")
    fx, fy = sx.star_matrix, sy.star_matrix
    for i in range(dy):
        for j in range(dx):
            t = {}
            for k in range(dx):
                if abs(fx[k, j]) > 1e-12:
                    t[p(i, k)] = t.get(p(i, k), 0) + fx[k, j]
            for l in range(dy):
                if abs(fy[i, l]) > 1e-12:
                    t[ps(l, j)] = t.get(ps(l, j), 0) - np.conj(fy[i, l])
            add(t, f"star {i},{j}")
    ax, ay = x.float_A(), y.float_A()
    for i in range(dy):
        for j in range(dx):
            t = {}
            for k in range(dx):
                if abs(ax[k, j]) > 1e-12:
                    t[p(i, k)] = t.get(p(i, k), 0) + ax[k, j]
            for l in range(dy):
                if abs(ay[i, l]) > 1e-12:
                    t[p(l, j)] = t.get(p(l, j), 0) - ay[i, l]
            add(t, f"covariant {i},{j}")
    return Presentation(alphabet, rels, labels, name="qiso")


def qaut_presentation(qg: QuantumGraph) -> Presentation:
    """Quantum automorphism presentation: generators u_i_j and adjoints u_i_j'."""
    pres = qiso_presentation(qg, qg, letter="u")
    pres.name = "qaut"
    return pres


# -- JSON format --------------------------------------------------------------

def _pairs_to_values(pairs):
    out = []
    for z in pairs:
        if isinstance(z, (list, tuple)):
            re, im = z
            fre, fim = _as_fraction(re), _as_fraction(im)
            if fre is not None and fim == 0:
                out.append(fre)
            else:
                out.append(complex(_complex(re).real, _complex(im).real))
        else:
            f = _as_fraction(z)
            out.append(f if f is not None else complex(z))
    return out


def quantum_graph_from_json(data: dict) -> QuantumGraph:
    if "edges" in data and "n" in data:
        return from_classical(Graph.from_edges(data["n"], data["edges"]))
    blocks = data["blocks"]
    weights = []
    for n, w in zip(blocks, data["weights"], strict=True):
        vals = _pairs_to_values(w)
        if len(vals) != n * n:
            raise ValueError("each weight needs n(i)^2 entries")
        weights.append([[str(v) if isinstance(v, Fraction) else v for v in vals[r * n:(r + 1) * n]]
                        for r in range(n)])
    qs = QuantumSet.from_weights(blocks, weights)
    vals = _pairs_to_values(data["A"])
    d = qs.dimension
    if len(vals) != d * d:
        raise ValueError(f"A needs {d * d} entries")
    if all(isinstance(v, Fraction) for v in vals) and qs.uniform_scalar is not None:
        A = np.array(vals, dtype=object).reshape(d, d)
    else:
        A = np.array([complex(v) for v in vals]).reshape(d, d)
    delta = delta_form(qs)
    if delta is None:
        raise ValueError("quantum set does not carry a delta-form")
    return QuantumGraph(qs, A, delta)


def quantum_graph_to_json(qg: QuantumGraph) -> dict:
    def pair(v):
        if isinstance(v, Fraction):
            return [str(v), "0"]
        z = complex(v)
        return [z.real, z.imag]

    weights = []
    for b, (n, w) in enumerate(zip(qg.qset.blocks, qg.qset.weights)):
        if qg.qset.exact_scalars is not None:
            q = qg.qset.exact_scalars[b]
            weights.append([pair(q if i == j else Fraction(0)) for i in range(n) for j in range(n)])
        else:
            weights.append([pair(z) for z in w.reshape(-1)])
    return {"blocks": list(qg.qset.blocks), "weights": weights, "A": [pair(v) for v in np.asarray(qg.A).reshape(-1)]}
