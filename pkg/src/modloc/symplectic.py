"""Symplectic subspace algebra and the finite-dimensional Gleason measure.

On a 2n-dimensional symplectic space the unique probability measure on the
subspace lattice is mu(H) = rank_sigma(H) / 2n, where rank_sigma is the rank
of the skew Gram matrix of H.  The Darboux splitting and the plane chains
below follow the constructive route to that statement.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .realspace import ComplexSpace, RealProjection, orthonormal_span

log = logging.getLogger(__name__)

INDEP_RTOL = 1e-10
PIVOT_RTOL = 1e-10
CHAIN_TOL = 1e-9


def standard_omega(n: int) -> np.ndarray:
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    dim: int
    omega: np.ndarray = field(repr=False)

    def __post_init__(self):
        om = np.array(self.omega, dtype=float)
        if om.shape != (self.dim, self.dim) or self.dim % 2:
            raise ValueError("omega must be square of even size")
        if np.linalg.norm(om + om.T) > 1e-12 * max(1.0, np.linalg.norm(om)):
            raise ValueError("omega is not skew")
        s = np.linalg.svd(om, compute_uv=False)
        if s[-1] <= 1e-12 * s[0]:
            raise ValueError("omega is degenerate")
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)

    @classmethod
    def standard(cls, n: int) -> "SymplecticSpace":
        return cls(2 * n, standard_omega(n))

    @classmethod
    def of(cls, space: ComplexSpace) -> "SymplecticSpace":
        return cls(space.dim, space.omega)

    @property
    def condition(self) -> float:
        s = np.linalg.svd(self.omega, compute_uv=False)
        return float(s[0] / s[-1])

    def sigma(self, x, y) -> float:
        return float(x @ self.omega @ y)

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and self.dim == other.dim and np.array_equal(self.omega, other.omega)

    __hash__ = object.__hash__


@dataclass(frozen=True, eq=False)
class SymplecticSubspace:
    space: SymplecticSpace
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        B = np.array(self.basis, dtype=float)
        if B.ndim == 1:
            B = B[:, None]
        if B.shape[0] != self.space.dim:
            raise ValueError("basis rows must match the space dimension")
        if B.shape[1]:
            s = np.linalg.svd(B, compute_uv=False)
            if s[-1] <= INDEP_RTOL * s[0]:
                raise ValueError("basis columns are linearly dependent")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @classmethod
    def span(cls, space: SymplecticSpace, vectors) -> "SymplecticSubspace":
        """Subspace spanned by possibly dependent vectors (orthonormalized)."""
        V = np.asarray(vectors, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        return cls(space, orthonormal_span(V, INDEP_RTOL))

    @classmethod
    def zero(cls, space: SymplecticSpace) -> "SymplecticSubspace":
        return cls(space, np.zeros((space.dim, 0)))

    @classmethod
    def whole(cls, space: SymplecticSpace) -> "SymplecticSubspace":
        return cls(space, np.eye(space.dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def gram(self) -> np.ndarray:
        return self.basis.T @ self.space.omega @ self.basis

    def orthonormal(self) -> np.ndarray:
        return orthonormal_span(self.basis, INDEP_RTOL)

    def __repr__(self):
        return f"SymplecticSubspace(dim={self.dim}, ambient={self.space.dim})"


def _rank_tol(G: np.ndarray, B: np.ndarray, omega: np.ndarray) -> float:
    scale = max(np.linalg.norm(B, 2) ** 2 * np.linalg.norm(omega, 2), 1e-300)
    return INDEP_RTOL * scale * max(G.shape[0], 1)


def symplectic_rank(H: SymplecticSubspace) -> Tuple[int, SymplecticSubspace]:
    """Rank of the skew Gram of H and the center Z(H) = H & H'."""
    if H.dim == 0:
        return 0, H
    B = H.orthonormal()
    G = B.T @ H.space.omega @ B
    _, s, Vt = np.linalg.svd(G)
    r = int(np.sum(s > _rank_tol(G, B, H.space.omega)))
    if r % 2:
        # singular values of a real skew matrix come in pairs
        raise ArithmeticError("odd skew-Gram rank; increase the tolerance")
    center = B @ Vt[r:].T
    return r, SymplecticSubspace(H.space, center)


def sigma_complement(H: SymplecticSubspace) -> SymplecticSubspace:
    """H' = {x : sigma(h, x) = 0 for all h in H}."""
    if H.dim == 0:
        return SymplecticSubspace.whole(H.space)
    A = (H.orthonormal().T @ H.space.omega)
    _, s, Vt = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(s > INDEP_RTOL * max(s[0], 1e-300)))
    return SymplecticSubspace(H.space, Vt[r:].T)


def span_join(H: SymplecticSubspace, K: SymplecticSubspace) -> SymplecticSubspace:
    return SymplecticSubspace.span(H.space, np.hstack([H.basis, K.basis]))


def intersection_dim(H: SymplecticSubspace, K: SymplecticSubspace, tol: float = CHAIN_TOL) -> int:
    """dim(H & K) = dim H + dim K - dim(H + K), the last from a rank at tol."""
    A = H.orthonormal()
    B = K.orthonormal()
    s = np.linalg.svd(np.hstack([A, B]), compute_uv=False)
    r = int(np.sum(s > tol * s[0])) if s.size else 0
    return A.shape[1] + B.shape[1] - r


def gleason_measure(H: SymplecticSubspace) -> Fraction:
    r, _ = symplectic_rank(H)
    return Fraction(r, H.space.dim)


# -- Darboux splitting -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DarbouxDecomposition:
    space: SymplecticSpace
    center_basis: np.ndarray = field(repr=False)
    planes: List[np.ndarray] = field(repr=False)

    @property
    def rank(self) -> int:
        return 2 * len(self.planes)

    def all_columns(self) -> np.ndarray:
        cols = [p for p in self.planes] + [self.center_basis]
        return np.hstack(cols) if cols else np.zeros((self.space.dim, 0))

    def residuals(self) -> dict:
        """Worst deviations from the structural invariants."""
        om = self.space.omega
        worst_cross = 0.0
        worst_pair = 0.0
        blocks = list(self.planes) + [self.center_basis]
        for i, P in enumerate(self.planes):
            g = P[:, 0] @ om @ P[:, 1]
            worst_pair = max(worst_pair, abs(g - 1.0))
            for Q in blocks[i + 1:]:
                if Q.shape[1]:
                    worst_cross = max(worst_cross, float(np.abs(P.T @ om @ Q).max()))
        Z = self.center_basis
        center_iso = float(np.abs(Z.T @ om @ Z).max()) if Z.shape[1] else 0.0
        return {"pair": worst_pair, "cross": worst_cross, "center": center_iso}


def darboux_decompose(H: SymplecticSubspace, pivot_rtol: float = PIVOT_RTOL) -> DarbouxDecomposition:
    """Symplectic Gram-Schmidt: split off planes with sigma(e, f) = 1, the rest is central."""
    om = H.space.omega
    W = H.orthonormal()
    scale = np.linalg.norm(om, 2)
    planes = []
    while W.shape[1] >= 2:
        G = W.T @ om @ W
        i, j = np.unravel_index(np.argmax(np.abs(G)), G.shape)
        piv = G[i, j]
        if abs(piv) <= pivot_rtol * scale:
            if np.any(G):
                log.info("darboux: pivot %.3e below threshold, %d vectors treated as central", abs(piv), W.shape[1])
            break
        e = W[:, i]
        f = W[:, j] / piv
        keep = [k for k in range(W.shape[1]) if k not in (i, j)]
        R = W[:, keep]
        # w -> w + sigma(f, w) e - sigma(e, w) f is sigma-orthogonal to e and f
        se = e @ om @ R
        sf = f @ om @ R
        R = R + np.outer(e, sf) - np.outer(f, se)
        planes.append(np.column_stack([e, f]))
        W = orthonormal_span(R, INDEP_RTOL) if R.shape[1] else R
    return DarbouxDecomposition(H.space, W, planes)


# -- plane chains ------------------------------------------------------------


def _require_plane(P: SymplecticSubspace):
    if P.dim != 2 or symplectic_rank(P)[0] != 2:
        raise ValueError("not a symplectic plane")


def _normalized_pair(P: SymplecticSubspace) -> Tuple[np.ndarray, np.ndarray]:
    B = P.orthonormal()
    s = B[:, 0] @ P.space.omega @ B[:, 1]
    return B[:, 0], B[:, 1] / s


def plane_chain(K: SymplecticSubspace, H: SymplecticSubspace, cross_tol: float = 1e-6) -> List[SymplecticSubspace]:
    """Chain of symplectic planes from K to H, adjacent ones meeting in a line.

    Cases by the geometry of the pair: equal planes, a common line, no common
    line but some sigma(k, h) != 0 (one intermediate plane span{k, h}), and
    the sigma-orthogonal case, routed through span{e1+e2, f1} and
    span{e1+e2, f2} built from Darboux pairs of K and H.
    """
    _require_plane(K)
    _require_plane(H)
    sp = K.space
    d = intersection_dim(K, H)
    if d == 2:
        return [K]
    if d == 1:
        return [K, H]
    Bk = K.orthonormal()
    Bh = H.orthonormal()
    C = Bk.T @ sp.omega @ Bh
    U, s, Vt = np.linalg.svd(C)
    if s[0] > cross_tol * np.linalg.norm(sp.omega, 2):
        k = Bk @ U[:, 0]
        h = Bh @ Vt[0]
        return [K, SymplecticSubspace.span(sp, np.column_stack([k, h])), H]
    e1, f1 = _normalized_pair(K)
    e2, f2 = _normalized_pair(H)
    mid1 = SymplecticSubspace.span(sp, np.column_stack([e1 + e2, f1]))
    mid2 = SymplecticSubspace.span(sp, np.column_stack([e1 + e2, f2]))
    return [K, mid1, mid2, H]


def chain_is_valid(chain: List[SymplecticSubspace], tol: float = CHAIN_TOL) -> bool:
    for P in chain:
        if P.dim != 2 or symplectic_rank(P)[0] != 2:
            return False
    for A, B in zip(chain, chain[1:]):
        if intersection_dim(A, B, tol) != 1:
            return False
    return len(chain) <= 4


# -- factorial part ----------------------------------------------------------


def factorial_part(H: RealProjection) -> RealProjection:
    """F(H) = Z(H)^perp & H, the part of H on which sigma is non-degenerate."""
    sp = SymplecticSpace.of(H.space)
    if H.rank == 0:
        return H
    S = SymplecticSubspace(sp, H.basis)
    r, Z = symplectic_rank(S)
    Zq = Z.orthonormal() if Z.dim else np.zeros((H.space.dim, 0))
    # H minus its center, inside H's own orthonormal basis
    coeff = H.basis.T @ Zq
    if coeff.shape[1]:
        Qc, _ = np.linalg.qr(coeff, mode="complete")
        F = H.basis @ Qc[:, coeff.shape[1]:]
    else:
        F = H.basis
    if F.shape[1] != r:
        raise ArithmeticError(f"factorial part has dimension {F.shape[1]}, symplectic rank is {r}")
    return RealProjection(H.space, F)


# -- random generators for tests and the self-test command ---------------------


def random_subspace(sp: SymplecticSpace, rng: np.random.Generator, k: int | None = None) -> SymplecticSubspace:
    if k is None:
        k = int(rng.integers(0, sp.dim + 1))
    if k == 0:
        return SymplecticSubspace.zero(sp)
    return SymplecticSubspace.span(sp, rng.standard_normal((sp.dim, k)))


def random_plane(sp: SymplecticSpace, rng: np.random.Generator) -> SymplecticSubspace:
    return SymplecticSubspace.span(sp, rng.standard_normal((sp.dim, 2)))


def random_subspace_inside(outer: SymplecticSubspace, rng: np.random.Generator, k: int) -> SymplecticSubspace:
    if k == 0 or outer.dim == 0:
        return SymplecticSubspace.zero(outer.space)
    B = outer.orthonormal()
    return SymplecticSubspace.span(outer.space, B @ rng.standard_normal((B.shape[1], min(k, B.shape[1]))))
