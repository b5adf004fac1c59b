"""Matrix-free branching-Toeplitz operators on truncated rooted trees.

A weight vector a on the unit sphere of C^q and a symbol f define a kernel
on pairs of comparable vertices: if u sits m generations below v the entry
is h(m) times the product of the weight components along the descent path,
if u sits m generations above v it is h(-m) times the conjugate of that
path product, and incomparable pairs get zero.  The uniform weight
a = (1/sqrt(q), ..., 1/sqrt(q)) gives path products q^(-m/2) and the
classical damped kernel; q = 1 gives the ordinary Toeplitz matrix.

apply() never materializes the matrix.  Descendant contributions come from
a bottom-up recursion of weighted child sums (one pass per coefficient
h(-m)), ancestor contributions from a top-down recursion of weighted
parent values (one pass per h(m)); with the generation-major vertex layout
both passes are single reshape/repeat products, O(n * |B_n| * q) work
total.  Dense materialization is a test oracle guarded by a size cap
(default 4096 rows, override with the BTOEP_DENSE_CAP environment
variable).

The operator-valued variant replaces weight components by d x d matrices
A_1..A_q; path products then order-sensitively multiply factors from the
last descent step down to the first.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .symbols import Symbol, conjugate, rotate
from .tree import Relation, TreeShape, Vertex, comparability

__all__ = [
    "WeightVector",
    "BranchingOperator",
    "ToeplitzMatrix",
    "toeplitz",
    "toeplitz_dense",
    "gauge_transform",
    "OperatorTuple",
    "op_valued_entry",
    "op_valued_materialize",
    "dense_cap",
    "matrix_to_csv",
    "matrix_to_json",
]

DEFAULT_DENSE_CAP = 4096
WEIGHT_NORM_TOL = 1e-12


def dense_cap() -> int:
    return int(os.environ.get("BTOEP_DENSE_CAP", DEFAULT_DENSE_CAP))


def _check_cap(rows: int) -> None:
    cap = dense_cap()
    if rows > cap:
        raise ValueError(f"dense materialization of {rows} rows exceeds cap {cap}")


@dataclass(frozen=True)
class WeightVector:
    """A point of the unit sphere in C^q."""

    entries: tuple

    def __post_init__(self):
        ent = tuple(complex(z) for z in self.entries)
        object.__setattr__(self, "entries", ent)
        if not ent:
            raise ValueError("weight vector must have at least one entry")
        norm = np.sqrt(sum(abs(z) ** 2 for z in ent))
        if abs(norm - 1.0) > WEIGHT_NORM_TOL:
            raise ValueError(f"weight vector norm {norm} differs from 1 by more than {WEIGHT_NORM_TOL}")

    @property
    def q(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)


class BranchingOperator:
    """Truncated branching-Toeplitz operator with scalar weights.

    Construct with .uniform() for the canonical q^(-m/2) damping or
    .with_weights() for a general unit weight vector.  Instances are
    immutable and safe to share across threads; apply() allocates its own
    scratch.
    """

    def __init__(self, weights, shape: TreeShape, symbol: Symbol, *, _uniform=False):
        if isinstance(weights, WeightVector):
            weights = weights.as_array()
        weights = np.asarray(weights, dtype=complex)
        if weights.ndim != 1 or weights.shape[0] != shape.q:
            raise ValueError(f"expected {shape.q} weight entries, got shape {weights.shape}")
        norm = np.linalg.norm(weights)
        if abs(norm - 1.0) > WEIGHT_NORM_TOL:
            raise ValueError(f"weight vector norm {norm} differs from 1 by more than {WEIGHT_NORM_TOL}")
        self._weights = weights
        self._weights.flags.writeable = False
        self.shape = shape
        self.symbol = symbol
        self.uniform = bool(_uniform)

    @classmethod
    def uniform(cls, q: int, depth: int, symbol: Symbol) -> "BranchingOperator":
        shape = TreeShape(q, depth)
        w = np.full(q, 1.0 / np.sqrt(q), dtype=complex)
        return cls(w, shape, symbol, _uniform=True)

    @classmethod
    def with_weights(cls, weights, depth: int, symbol: Symbol) -> "BranchingOperator":
        if isinstance(weights, WeightVector):
            q = weights.q
        else:
            q = len(weights)
        return cls(weights, TreeShape(q, depth), symbol)

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def dim(self) -> int:
        return self.shape.vertex_count

    def adjoint(self) -> "BranchingOperator":
        """Operator whose dense matrix is the conjugate transpose of this one."""
        return BranchingOperator(
            self._weights, self.shape, conjugate(self.symbol), _uniform=self.uniform
        )

    # -- kernel entries ----------------------------------------------------

    def _path_weight(self, digits) -> complex:
        if self.uniform:
            return self.shape.q ** (-len(digits) / 2)
        w = 1.0 + 0j
        for d in digits:
            w *= self._weights[d]
        return w

    def entry(self, u: Vertex, v: Vertex) -> complex:
        """Kernel entry at (row u, column v)."""
        rel = comparability(u, v, self.shape)
        if rel.relation is Relation.EQUAL:
            return self.symbol.coeff(0)
        if rel.relation is Relation.V_ANCESTOR_OF_U:
            # u lies rel.distance generations below v
            return self.symbol.coeff(rel.distance) * self._path_weight(rel.digits)
        if rel.relation is Relation.U_ANCESTOR_OF_V:
            return self.symbol.coeff(-rel.distance) * np.conj(self._path_weight(rel.digits))
        return 0j

    # -- matrix-free application -------------------------------------------

    def apply(self, x) -> np.ndarray:
        """y[u] = sum_v entry(u, v) x[v] without forming the matrix."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got shape {x.shape}")
        shape, q, n = self.shape, self.shape.q, self.shape.depth
        starts = shape.generation_starts
        a = self._weights
        a_conj = a.conj()
        coeff = self.symbol.coeff
        depth_used = min(n, self.symbol.support_radius)

        y = coeff(0) * x

        # descendant sums: D holds, per surviving vertex, the conjugate
        # path-weighted sum of x over its depth-m descendants
        D = x
        for m in range(1, depth_used + 1):
            D = D[1:].reshape(-1, q) @ a_conj
            c = coeff(-m)
            if c != 0:
                y[: D.shape[0]] += c * D

        # ancestor walk: U holds, per vertex of generation >= m, the path
        # product times the value of x at its depth-m ancestor
        U = x
        for m in range(1, depth_used + 1):
            parents = U[: starts[n] - starts[m - 1]]
            U = np.repeat(parents, q) * np.tile(a, parents.shape[0])
            c = coeff(m)
            if c != 0:
                y[starts[m] :] += c * U

        return y

    def apply_adjoint(self, x) -> np.ndarray:
        return self.adjoint().apply(x)

    # -- dense oracle --------------------------------------------------------

    def materialize(self) -> np.ndarray:
        """Dense matrix M[linear_index(u), linear_index(v)] = entry(u, v)."""
        _check_cap(self.dim)
        shape, q, n = self.shape, self.shape.q, self.shape.depth
        starts = shape.generation_starts
        coeff = self.symbol.coeff
        radius = min(n, self.symbol.support_radius)
        M = np.zeros((self.dim, self.dim), dtype=complex)
        np.fill_diagonal(M, coeff(0))
        for g in range(1, n + 1):
            k = np.arange(q**g)
            rows = starts[g] + k
            path = np.ones(q**g, dtype=complex)
            for m in range(1, min(g, radius) + 1):
                if self.uniform:
                    path = np.full(q**g, q ** (-m / 2), dtype=complex)
                else:
                    path = path * self._weights[(k // q ** (m - 1)) % q]
                cols = starts[g - m] + k // q**m
                cd, cu = coeff(m), coeff(-m)
                if cd != 0:
                    M[rows, cols] = cd * path
                if cu != 0:
                    M[cols, rows] = cu * path.conj()
        return M


@dataclass(frozen=True)
class ToeplitzMatrix:
    """Classical (n+1) x (n+1) Toeplitz matrix with entry (k, l) = h(k - l)."""

    symbol: Symbol
    order: int  # = n + 1

    def dense(self) -> np.ndarray:
        n = self.order - 1
        idx = np.arange(n + 1)
        diff = idx[:, None] - idx[None, :]
        M = np.zeros((n + 1, n + 1), dtype=complex)
        for k, c in self.symbol.coeffs.items():
            M[diff == k] = c
        return M


def toeplitz(symbol: Symbol, n: int) -> ToeplitzMatrix:
    if n < 0:
        raise ValueError("order must be >= 0")
    return ToeplitzMatrix(symbol, n + 1)


def toeplitz_dense(symbol: Symbol, n: int) -> np.ndarray:
    return toeplitz(symbol, n).dense()


def gauge_transform(op: BranchingOperator, t: float) -> BranchingOperator:
    """Conjugate by the diagonal phase e^{-i t |u|}; same as rotating the symbol."""
    return BranchingOperator(
        op.weights, op.shape, rotate(op.symbol, t), _uniform=op.uniform
    )


# -- operator-valued kernels ----------------------------------------------


@dataclass(frozen=True)
class OperatorTuple:
    """q square matrices of common dimension d acting as matrix weights."""

    matrices: np.ndarray  # (q, d, d)

    def __post_init__(self):
        arr = np.asarray(self.matrices, dtype=complex)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected (q, d, d) stack of square matrices, got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "matrices", arr)

    @property
    def q(self) -> int:
        return self.matrices.shape[0]

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @cached_property
    def contraction_norm(self) -> float:
        """Spectral norm of sum_k A_k^* A_k (kernel positivity needs <= 1)."""
        s = sum(A.conj().T @ A for A in self.matrices)
        return float(np.linalg.norm(s, 2))


def _op_path_product(A: OperatorTuple, offset: int, m: int, q: int) -> np.ndarray:
    """Matrix path product for the depth-m descent ending at the given offset.

    Factors multiply from the last descent step (leftmost) down to the
    first, which is the order the semigroup word prescribes under the
    child-prepending identification.
    """
    P = np.eye(A.dim, dtype=complex)
    k = offset
    for _ in range(m):
        P = P @ A.matrices[k % q]
        k //= q
    return P


def op_valued_entry(A: OperatorTuple, f: Symbol, u: Vertex, v: Vertex, shape: TreeShape) -> np.ndarray:
    """d x d block of the operator-valued kernel at (row u, column v)."""
    if A.q != shape.q:
        raise ValueError(f"operator tuple has {A.q} matrices but tree arity is {shape.q}")
    d = A.dim
    rel = comparability(u, v, shape)
    if rel.relation is Relation.EQUAL:
        return f.coeff(0) * np.eye(d, dtype=complex)
    if rel.relation is Relation.V_ANCESTOR_OF_U:
        W = _op_path_product(A, u.offset, rel.distance, shape.q)
        return f.coeff(rel.distance) * W
    if rel.relation is Relation.U_ANCESTOR_OF_V:
        W = _op_path_product(A, v.offset, rel.distance, shape.q)
        return f.coeff(-rel.distance) * W.conj().T
    return np.zeros((d, d), dtype=complex)


def op_valued_materialize(A: OperatorTuple, f: Symbol, shape: TreeShape) -> np.ndarray:
    """Dense (|B_n| d) x (|B_n| d) block matrix of the operator-valued kernel."""
    if A.q != shape.q:
        raise ValueError(f"operator tuple has {A.q} matrices but tree arity is {shape.q}")
    d = A.dim
    N = shape.vertex_count
    _check_cap(N * d)
    q, n = shape.q, shape.depth
    starts = shape.generation_starts
    radius = min(n, f.support_radius)
    M = np.zeros((N * d, N * d), dtype=complex)
    c0 = f.coeff(0)
    for i in range(N):
        M[i * d : (i + 1) * d, i * d : (i + 1) * d] = c0 * np.eye(d)
    for g in range(1, n + 1):
        for k in range(q**g):
            u = starts[g] + k
            P = np.eye(d, dtype=complex)
            kk = k
            for m in range(1, min(g, radius) + 1):
                P = P @ A.matrices[kk % q]
                kk //= q
                v = starts[g - m] + kk
                cd, cu = f.coeff(m), f.coeff(-m)
                if cd != 0:
                    M[u * d : (u + 1) * d, v * d : (v + 1) * d] = cd * P
                if cu != 0:
                    M[v * d : (v + 1) * d, u * d : (u + 1) * d] = cu * P.conj().T
    return M


# -- dense matrix export ----------------------------------------------------


def matrix_to_csv(M) -> str:
    """Row-major CSV with cells formatted re+imj."""
    M = np.asarray(M, dtype=complex)
    lines = []
    for row in M:
        lines.append(",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
    return "\n".join(lines) + "\n"


def matrix_to_json(M) -> str:
    """JSON object {"rows": N, "data": [[re, im], ...]} in row-major order."""
    import json

    M = np.asarray(M, dtype=complex)
    data = [[float(z.real), float(z.imag)] for z in M.ravel()]
    return json.dumps({"rows": int(M.shape[0]), "data": data})
