"""Real-linear operator algebra on C^n seen as R^{2n}.

A complex vector z = a + ib is stored as the stacked real vector (a; b).
Multiplication by i is then the block matrix [[0, -1], [1, 0]] and the
symplectic form is sigma(x, y) = Im<x, y> = g(i x, y).

Subspaces are carried by an orthonormal basis; the projection matrix is
built on demand.  Lattice operations (meet, join, symplectic complement)
work on bases so that large ambient spaces stay cheap.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg as sla

SPAN_RTOL = 1e-10
MEET_TOL = 1e-8


class ComplexSpace:
    """C^n in the canonical block layout."""

    def __init__(self, n: int):
        if int(n) != n or n < 1:
            raise ValueError("complex dimension must be a positive integer")
        self.n = int(n)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @cached_property
    def i_map(self) -> np.ndarray:
        n = self.n
        J = np.zeros((2 * n, 2 * n))
        J[n:, :n] = np.eye(n)
        J[:n, n:] = -np.eye(n)
        J.setflags(write=False)
        return J

    @cached_property
    def omega(self) -> np.ndarray:
        # sigma(x, y) = x^T omega y with omega = i_map^T
        om = np.ascontiguousarray(self.i_map.T)
        om.setflags(write=False)
        return om

    def g(self, x, y) -> float:
        return float(np.dot(x, y))

    def sigma(self, x, y) -> float:
        return float(x @ self.omega @ y)

    def times_i(self, X: np.ndarray) -> np.ndarray:
        """Apply i_map to a vector or to the columns of a matrix, without the matmul."""
        n = self.n
        out = np.empty_like(X, dtype=float)
        out[:n] = -X[n:]
        out[n:] = X[:n]
        return out

    def to_real(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.concatenate([z.real, z.imag], axis=0)

    def to_complex(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x[: self.n] + 1j * x[self.n:]

    def __eq__(self, other):
        return isinstance(other, ComplexSpace) and other.n == self.n

    def __hash__(self):
        return hash(("ComplexSpace", self.n))

    def __repr__(self):
        return f"ComplexSpace(n={self.n})"


def orthonormal_span(V: np.ndarray, rtol: float = SPAN_RTOL) -> np.ndarray:
    """Orthonormal basis of the column span, rank decided by SVD."""
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    if V.shape[1] == 0:
        return np.zeros((V.shape[0], 0))
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((V.shape[0], 0))
    r = int(np.sum(s > rtol * s[0]))
    return U[:, :r]


def orth_complement(Q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of range(Q), Q orthonormal."""
    d, k = Q.shape
    if k == 0:
        return np.eye(d)
    if k == d:
        return np.zeros((d, 0))
    Qf, _ = np.linalg.qr(Q, mode="complete")
    return Qf[:, k:]


@dataclass(frozen=True, eq=False)
class RealProjection:
    """Real-orthogonal projection onto a real subspace of C^n.

    The subspace and its projection carry the same data, so this class also
    serves as the RealSubspace type.
    """

    space: ComplexSpace
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != self.space.dim:
            raise ValueError(f"basis must have {self.space.dim} rows, got shape {B.shape}")
        B = B.copy()
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def matrix(self) -> np.ndarray:
        E = self.basis @ self.basis.T
        E.setflags(write=False)
        return E

    @classmethod
    def zero(cls, space: ComplexSpace) -> "RealProjection":
        return cls(space, np.zeros((space.dim, 0)))

    @classmethod
    def identity(cls, space: ComplexSpace) -> "RealProjection":
        return cls(space, np.eye(space.dim))

    @classmethod
    def from_matrix(cls, space: ComplexSpace, E: np.ndarray, tol: float = 1e-9) -> "RealProjection":
        E = np.asarray(E, dtype=float)
        scale = max(1.0, np.linalg.norm(E, 2))
        if np.linalg.norm(E - E.T) > 1e-12 * scale * E.shape[0] or np.linalg.norm(E @ E - E) > tol * scale:
            raise ValueError("matrix is not an orthogonal projection")
        w, V = np.linalg.eigh((E + E.T) / 2)
        return cls(space, V[:, w > 0.5])

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.T @ x)

    def contains(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        nx = np.linalg.norm(x)
        return bool(np.linalg.norm(x - self.apply(x)) <= tol * max(nx, 1.0))

    def to_csv(self) -> str:
        """Column-major dump of the projection matrix, for debugging."""
        buf = io.StringIO()
        E = self.matrix
        for j in range(E.shape[1]):
            buf.write(",".join(repr(float(v)) for v in E[:, j]) + "\n")
        return buf.getvalue()

    def __repr__(self):
        return f"RealProjection(n={self.space.n}, rank={self.rank})"


RealSubspace = RealProjection


def _check_same(E: RealProjection, F: RealProjection):
    if E.space != F.space:
        raise ValueError("projections live on different spaces")


def projector_from_span(space: ComplexSpace, vectors, rtol: float = SPAN_RTOL) -> RealProjection:
    V = np.asarray(vectors, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    elif V.ndim == 2 and V.shape[0] != space.dim and V.shape[1] == space.dim:
        # a list of row vectors
        V = V.T
    if V.ndim != 2 or V.shape[0] != space.dim:
        raise ValueError(f"dimension mismatch: expected vectors of length {space.dim}")
    if V.size == 0 or not np.any(V):
        raise ValueError("empty span")
    return RealProjection(space, orthonormal_span(V, rtol))


def real_orthocomplement(E: RealProjection) -> RealProjection:
    return RealProjection(E.space, orth_complement(E.basis))


def symplectic_complement(E: RealProjection) -> RealProjection:
    """E' = 1 + iEi, the projection onto the sigma-complement (i H)^perp."""
    return RealProjection(E.space, orth_complement(E.space.times_i(E.basis)))


def intersect_bases(Qa: np.ndarray, Qb: np.ndarray, tol: float = MEET_TOL) -> np.ndarray:
    """Orthonormal basis of range(Qa) & range(Qb) for orthonormal Qa, Qb.

    Null vectors of [Qa, -Qb]; the singular values there are
    sqrt(1 - cos theta) for the principal angles theta, so the cut is on
    approximately theta / sqrt(2).
    """
    d, ka = Qa.shape
    kb = Qb.shape[1]
    if ka == 0 or kb == 0:
        return np.zeros((d, 0))
    M = np.hstack([Qa, -Qb])
    # thin SVD already gives a square Vt when ka + kb <= d
    _, s, Vt = np.linalg.svd(M, full_matrices=ka + kb > d)
    s_full = np.zeros(ka + kb)
    s_full[: s.size] = s
    null = Vt[s_full <= tol]
    if null.shape[0] == 0:
        return np.zeros((d, 0))
    W = Qa @ null[:, :ka].T
    return orthonormal_span(W, 1e-6)


def meet(E: RealProjection, F: RealProjection, tol: float = MEET_TOL) -> RealProjection:
    _check_same(E, F)
    return RealProjection(E.space, intersect_bases(E.basis, F.basis, tol))


def join(E: RealProjection, F: RealProjection, rtol: float = MEET_TOL) -> RealProjection:
    _check_same(E, F)
    B = np.hstack([E.basis, F.basis])
    if B.shape[1] == 0:
        return RealProjection.zero(E.space)
    return RealProjection(E.space, orthonormal_span(B, rtol))


def alternating_meet_trace(E: RealProjection, F: RealProjection, n_iter: int) -> np.ndarray:
    """Norms ||(EF)^n|| for n = 1..n_iter.

    With C = Q_E^T Q_F one has (EF)^n = Q_E (C C^T)^(n-1) C Q_F^T, so the norm
    is the largest singular value of C restricted to the complement of the
    meet, raised to 2n - 1.  The meet itself contributes 1 for all n.
    """
    _check_same(E, F)
    if E.rank == 0 or F.rank == 0:
        return np.zeros(n_iter)
    C = E.basis.T @ F.basis
    s = np.linalg.svd(C, compute_uv=False)
    c = min(float(s[0]), 1.0) if s.size else 0.0  # cosines, clip round-off
    n = np.arange(1, n_iter + 1)
    return c ** (2 * n - 1)


def alternating_meet_iterate(E: RealProjection, F: RealProjection, n_iter: int) -> np.ndarray:
    """The matrix (EF)^n_iter, built by repeated products (cross-check of the meet)."""
    _check_same(E, F)
    P = E.matrix @ F.matrix
    R = np.eye(E.space.dim)
    for _ in range(n_iter):
        R = R @ P
    return R


def leq(E: RealProjection, F: RealProjection, tol: float = 1e-9) -> bool:
    """Range containment E <= F, tested as ||(1 - F) E|| <= tol."""
    _check_same(E, F)
    return containment_residual(E, F) <= tol


def containment_residual(E: RealProjection, F: RealProjection) -> float:
    if E.rank == 0:
        return 0.0
    R = E.basis - F.basis @ (F.basis.T @ E.basis)
    return float(np.linalg.norm(R, 2))


def projection_distance(E: RealProjection, F: RealProjection) -> float:
    """Spectral norm of E - F, computed on the joint span."""
    _check_same(E, F)
    B = np.hstack([E.basis, F.basis])
    if B.shape[1] == 0:
        return 0.0
    Q = orthonormal_span(B, 1e-12)
    A = Q.T @ E.basis
    C = Q.T @ F.basis
    return float(np.linalg.norm(A @ A.T - C @ C.T, 2))


def is_separated(E: RealProjection, F: RealProjection, tol: float = 1e-9) -> bool:
    return separation_residual(E, F) <= tol


def separation_residual(E: RealProjection, F: RealProjection) -> float:
    """||E i F||, zero exactly when the two ranges are sigma-orthogonal."""
    _check_same(E, F)
    if E.rank == 0 or F.rank == 0:
        return 0.0
    G = E.basis.T @ E.space.times_i(F.basis)
    return float(np.linalg.norm(G, 2))


def is_complex_linear(E: RealProjection, tol: float = 1e-10) -> bool:
    if E.rank == 0:
        return True
    iQ = E.space.times_i(E.basis)
    return float(np.linalg.norm(iQ - E.basis @ (E.basis.T @ iQ), 2)) <= tol


class CoreHull(NamedTuple):
    core: RealProjection
    hull: RealProjection
    cyclic: bool
    separating: bool
    standard: bool


def complex_core_hull(H: RealProjection, tol: float = MEET_TOL) -> CoreHull:
    iH = RealProjection(H.space, H.space.times_i(H.basis))
    core = meet(H, iH, tol)
    hull = join(H, iH, tol)
    cyclic = hull.rank == H.space.dim
    separating = core.rank == 0
    return CoreHull(core, hull, cyclic, separating, cyclic and separating)


# -- real-linear operators ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class RealLinearOperator:
    space: ComplexSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.shape != (self.space.dim, self.space.dim):
            raise ValueError("operator shape does not match the space")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def kind(self) -> str:
        return classify_operator(self.space, self.matrix)

    def __matmul__(self, other):
        if isinstance(other, RealLinearOperator):
            return RealLinearOperator(self.space, self.matrix @ other.matrix)
        return self.matrix @ other

    @property
    def T(self) -> "RealLinearOperator":
        return RealLinearOperator(self.space, self.matrix.T)


def classify_operator(space: ComplexSpace, A: np.ndarray, rtol: float = 1e-12) -> str:
    """'linear', 'antilinear' or 'real' depending on how A meets i_map."""
    J = space.i_map
    scale = max(np.linalg.norm(A, 2), 1e-300)
    if np.linalg.norm(A @ J - J @ A, 2) <= rtol * scale * 10:
        return "linear"
    if np.linalg.norm(A @ J + J @ A, 2) <= rtol * scale * 10:
        return "antilinear"
    return "real"


def complex_to_real_operator(A: np.ndarray) -> np.ndarray:
    """Real 2n x 2n matrix of the complex-linear map z -> A z."""
    A = np.asarray(A, dtype=complex)
    return np.block([[A.real, -A.imag], [A.imag, A.real]])


def conjugation(space: ComplexSpace) -> np.ndarray:
    n = space.n
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_projection(space: ComplexSpace, rng: np.random.Generator, rank: int | None = None) -> RealProjection:
    if rank is None:
        rank = int(rng.integers(0, space.dim + 1))
    if rank == 0:
        return RealProjection.zero(space)
    return RealProjection(space, orthonormal_span(rng.standard_normal((space.dim, rank))))


def random_complex_projection(space: ComplexSpace, rng: np.random.Generator, crank: int | None = None) -> RealProjection:
    """Projection onto a random complex subspace (commutes with i_map)."""
    if crank is None:
        crank = int(rng.integers(0, space.n + 1))
    if crank == 0:
        return RealProjection.zero(space)
    Z = rng.standard_normal((space.n, crank)) + 1j * rng.standard_normal((space.n, crank))
    Q, _ = np.linalg.qr(Z)
    B = np.hstack([space.to_real(Q), space.to_real(1j * Q)])
    return RealProjection(space, B)


def random_standard(space: ComplexSpace, rng: np.random.Generator) -> RealProjection:
    """A generic n-dimensional real subspace of C^n; standard with probability one."""
    return RealProjection(space, orthonormal_span(rng.standard_normal((space.dim, space.n))))


def principal_angle_residual(E: RealProjection, F: RealProjection) -> float:
    """max(||(1-F)E||, ||(1-E)F||); zero iff the ranges coincide."""
    return max(containment_residual(E, F), containment_residual(F, E))


def span_of(space: ComplexSpace, vectors: Sequence[np.ndarray]) -> RealProjection:
    return projector_from_span(space, np.column_stack(vectors))


def principal_sines(E: RealProjection, F: RealProjection) -> np.ndarray:
    """Sines of the principal angles from range(E) into range(F), ascending.

    Computed from ||(1 - F) e|| directly, so angles near 0 keep full accuracy.
    """
    _check_same(E, F)
    if E.rank == 0:
        return np.zeros(0)
    R = E.basis - F.basis @ (F.basis.T @ E.basis) if F.rank else E.basis
    return np.sort(np.linalg.svd(R, compute_uv=False))
