"""Tomita modular data of standard subspaces, the additivity defect and the cluster bound.

For a standard subspace H of C^n (dim_R H = n, H & iH = 0, H + iH = C^n)
the Tomita operator S: h1 + i h2 -> h1 - i h2 is an antilinear involution
on all of R^{2n}.  Its polar decomposition S = J Delta^{1/2} is computed
from one symmetric eigendecomposition of Delta = S^T S.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .realspace import (
    ComplexSpace,
    RealLinearOperator,
    RealProjection,
    complex_core_hull,
    containment_residual,
    join,
    meet,
    orth_complement,
    orthonormal_span,
    principal_angle_residual,
    real_orthocomplement,
)

COND_GUARD = 1e12
SCHEMA = "modloc-1"


class ConditioningWarning(UserWarning):
    pass


class NotStandardError(ValueError):
    pass


class MassGapError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StandardSubspace:
    H: RealProjection

    def __post_init__(self):
        flags = complex_core_hull(self.H)
        if not flags.standard:
            raise NotStandardError("subspace not standard")

    @property
    def space(self) -> ComplexSpace:
        return self.H.space


def tomita_operator(H: RealProjection) -> np.ndarray:
    """S = M diag(1, -1) M^{-1} with M = [Q, iQ]; identity on H, minus identity on iH."""
    sp = H.space
    if H.rank != sp.n:
        raise NotStandardError("subspace not standard")
    Q = H.basis
    M = np.hstack([Q, sp.times_i(Q)])
    D = np.concatenate([np.ones(sp.n), -np.ones(sp.n)])
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > 1e15:
        raise NotStandardError("subspace not standard")
    # S M = M D  =>  S = (M D) M^{-1}, solved as M^T S^T = D M^T
    S = np.linalg.solve(M.T, (M * D).T).T
    return S


@dataclass(frozen=True, eq=False)
class ModularData:
    space: ComplexSpace
    J: np.ndarray = field(repr=False)
    Delta: np.ndarray = field(repr=False)
    evals: np.ndarray = field(repr=False)
    evecs: np.ndarray = field(repr=False)
    condition: float = 1.0

    @classmethod
    def from_operators(cls, space: ComplexSpace, J: np.ndarray, Delta: np.ndarray) -> "ModularData":
        D = (Delta + Delta.T) / 2
        w, V = np.linalg.eigh(D)
        if w[0] <= 0:
            raise ValueError("Delta is not positive definite")
        return cls(space, np.array(J, dtype=float), D, w, V, float(w[-1] / w[0]))

    def _fn(self, f) -> np.ndarray:
        return (self.evecs * f(self.evals)) @ self.evecs.T

    def delta_power(self, s: float) -> np.ndarray:
        return self._fn(lambda w: w ** s)

    def delta_it(self, t: float) -> np.ndarray:
        """Delta^{it} = cos(t log Delta) + i sin(t log Delta); log Delta commutes with i."""
        L = np.log(self.evals)
        C = self._fn(lambda w: np.cos(t * L))
        Sn = self._fn(lambda w: np.sin(t * L))
        return C + self.space.i_map @ Sn

    @cached_property
    def S(self) -> np.ndarray:
        return self.J @ self.delta_power(0.5)

    def invariant_residuals(self) -> dict:
        sp = self.space
        I = np.eye(sp.dim)
        J, D, im = self.J, self.Delta, sp.i_map
        return {
            "J_involution": float(np.linalg.norm(J @ J - I, 2)),
            "J_orthogonal": float(np.linalg.norm(J.T @ J - I, 2)),
            "J_antilinear": float(np.linalg.norm(J @ im + im @ J, 2)),
            "Delta_linear": float(np.linalg.norm(D @ im - im @ D, 2)),
            "Delta_symmetric": float(np.linalg.norm(D - D.T, 2)),
            "JDeltaJ": float(np.linalg.norm(J @ D @ J - self.delta_power(-1.0), 2) / max(1.0, self.evals[-1])),
        }


def modular_data(H, cond_guard: float = COND_GUARD) -> ModularData:
    """Modular data (J, Delta) of a standard subspace.

    Accepts a StandardSubspace or a RealProjection (validated here).
    """
    if isinstance(H, StandardSubspace):
        H = H.H
    if H.rank != H.space.n or not complex_core_hull(H).standard:
        raise NotStandardError("subspace not standard")
    sp = H.space
    S = tomita_operator(H)
    Delta = S.T @ S
    Delta = (Delta + Delta.T) / 2
    w, V = np.linalg.eigh(Delta)
    cond_S = float(np.sqrt(w[-1] / w[0])) if w[0] > 0 else np.inf
    if cond_S > cond_guard:
        warnings.warn(f"ill-conditioned Tomita operator, condition number {cond_S:.3e}", ConditioningWarning, stacklevel=2)
    Dm12 = (V * w ** -0.5) @ V.T
    J = S @ Dm12
    return ModularData(sp, J, Delta, w, V, cond_S)


def fixed_space(md: ModularData, rtol: float = 1e-8) -> RealProjection:
    """Fixed points of J Delta^{1/2}, i.e. the range of (1 + S)/2."""
    S = md.S
    return RealProjection(md.space, orthonormal_span((np.eye(md.space.dim) + S) / 2, rtol))


def projection_from_modular(md: ModularData) -> RealProjection:
    """E = (1 + J Delta^{1/2}) (1 + Delta)^{-1}."""
    sp = md.space
    inv = md._fn(lambda w: 1.0 / (1.0 + w))
    E = (np.eye(sp.dim) + md.S) @ inv
    E = (E + E.T) / 2
    return RealProjection.from_matrix(sp, E, tol=1e-8)


def projection_matrix_from_modular(md: ModularData) -> np.ndarray:
    inv = md._fn(lambda w: 1.0 / (1.0 + w))
    return (np.eye(md.space.dim) + md.S) @ inv


def _check_isometry(space: ComplexSpace, U: np.ndarray) -> str:
    U = np.asarray(U, dtype=float)
    if U.shape != (space.dim, space.dim):
        raise ValueError("operator shape does not match the space")
    if np.linalg.norm(U.T @ U - np.eye(space.dim), 2) > 1e-10:
        raise ValueError("transport operator is not isometric")
    im = space.i_map
    if np.linalg.norm(U @ im - im @ U, 2) <= 1e-10:
        return "linear"
    if np.linalg.norm(U @ im + im @ U, 2) <= 1e-10:
        return "antilinear"
    raise ValueError("transport operator is neither complex-linear nor antilinear")


def covariance_transport(md: ModularData, U) -> ModularData:
    """(U J U^*, U Delta U^*), the modular data of U H."""
    if isinstance(U, RealLinearOperator):
        U = U.matrix
    _check_isometry(md.space, U)
    J = U @ md.J @ U.T
    evecs = U @ md.evecs
    Delta = (evecs * md.evals) @ evecs.T
    return ModularData(md.space, J, (Delta + Delta.T) / 2, md.evals.copy(), evecs, md.condition)


def transport_subspace(H: RealProjection, U: np.ndarray) -> RealProjection:
    return RealProjection(H.space, U @ H.basis)


# -- additivity defect ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DefectReport:
    space: ComplexSpace
    E: RealProjection = field(repr=False)
    F: RealProjection = field(repr=False)
    J: RealProjection = field(repr=False)
    norm_X: float = 0.0
    norm_EF: float = 0.0

    @cached_property
    def X(self) -> RealLinearOperator:
        return RealLinearOperator(self.space, self.E.matrix + self.F.matrix - self.J.matrix)

    @cached_property
    def halmos(self) -> "HalmosBlocks":
        return halmos_decompose(self.E, self.F)

    @property
    def identity_residual(self) -> float:
        return abs(self.norm_X - self.norm_EF)


def product_norm(E: RealProjection, F: RealProjection) -> float:
    if E.rank == 0 or F.rank == 0:
        return 0.0
    return float(np.linalg.norm(E.basis.T @ F.basis, 2))


def defect_operator(E: RealProjection, F: RealProjection) -> DefectReport:
    """X = E + F - (E v F) and its norm, evaluated on the joint span."""
    Jn = join(E, F)
    if Jn.rank == 0:
        return DefectReport(E.space, E, F, Jn, 0.0, 0.0)
    Q = Jn.basis
    A = Q.T @ E.basis
    B = Q.T @ F.basis
    Xc = A @ A.T + B @ B.T - np.eye(Q.shape[1])
    return DefectReport(E.space, E, F, Jn, float(np.linalg.norm(Xc, 2)), product_norm(E, F))


class HalmosBlocks(NamedTuple):
    both: RealProjection       # H1 & H2
    first_only: RealProjection  # H1 & H2^perp
    second_only: RealProjection  # H1^perp & H2
    neither: RealProjection    # (H1 v H2)^perp
    generic: RealProjection    # the remainder

    def as_list(self):
        return list(self)


def halmos_decompose(E: RealProjection, F: RealProjection) -> HalmosBlocks:
    Ec = real_orthocomplement(E)
    Fc = real_orthocomplement(F)
    both = meet(E, F)
    first_only = meet(E, Fc)
    second_only = meet(Ec, F)
    neither = real_orthocomplement(join(E, F))
    taken = np.hstack([both.basis, first_only.basis, second_only.basis, neither.basis])
    generic = RealProjection(E.space, orth_complement(orthonormal_span(taken, 1e-8)) if taken.shape[1] else np.eye(E.space.dim))
    return HalmosBlocks(both, first_only, second_only, neither, generic)


def halmos_residuals(E: RealProjection, F: RealProjection, blocks: HalmosBlocks) -> dict:
    mats = [b.matrix for b in blocks]
    I = np.eye(E.space.dim)
    orth = 0.0
    for i in range(5):
        for j in range(i + 1, 5):
            if blocks[i].rank and blocks[j].rank:
                orth = max(orth, float(np.linalg.norm(blocks[i].basis.T @ blocks[j].basis, 2)))
    total = float(np.linalg.norm(sum(mats) - I, 2))
    comm = 0.0
    for P in mats:
        comm = max(comm, float(np.linalg.norm(E.matrix @ P - P @ E.matrix, 2)),
                   float(np.linalg.norm(F.matrix @ P - P @ F.matrix, 2)))
    return {"orthogonal": orth, "sum": total, "commute": comm}


# -- cluster bound -------------------------------------------------------------


@dataclass
class ClusterReport:
    d: float | None
    norm_EF: float
    norm_X: float
    bound: float
    premise_residual: float
    meet_trivial: bool
    slack: float = 0.0
    tol_premise: float = 1e-6

    @property
    def premise_ok(self) -> bool:
        return self.premise_residual <= self.tol_premise

    @property
    def bound_ok(self) -> bool:
        return self.norm_EF <= self.bound + self.slack and self.norm_X <= self.bound + self.slack

    @property
    def excess(self) -> float:
        return max(0.0, max(self.norm_EF, self.norm_X) - self.bound)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "d": self.d,
            "norm_EF": self.norm_EF,
            "norm_X": self.norm_X,
            "bound": self.bound,
            "premise_residual": self.premise_residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _flow(space: ComplexSpace, gen_evals, gen_evecs, t: float, X: np.ndarray) -> np.ndarray:
    """exp(i t Q) X for Q = V diag(w) V^T complex-linear."""
    if gen_evecs is None:
        # Q diagonal in the block layout: w has length n, acts on both halves
        c = np.cos(t * gen_evals)[:, None]
        s = np.sin(t * gen_evals)[:, None]
        n = space.n
        re, im = X[:n], X[n:]
        return np.vstack([c * re - s * im, s * re + c * im])
    Y = gen_evecs.T @ X
    C = gen_evecs @ (np.cos(t * gen_evals)[:, None] * Y)
    Sn = gen_evecs @ (np.sin(t * gen_evals)[:, None] * Y)
    return C + space.times_i(Sn)


def cluster_check(E: RealProjection, F: RealProjection, generator, m: float, delta: float,
                  n_t: int = 33, tol_premise: float = 1e-6, slack: float = 0.0,
                  d: float | None = None) -> ClusterReport:
    """Check ||EF|| <= exp(-m delta) together with its sampled premise.

    `generator` is the complex-linear symmetric generator Q of V(t) = exp(itQ),
    either a 2n x 2n real matrix or a length-n array of eigenvalues for a Q
    that is diagonal in the canonical basis.
    """
    sp = E.space
    Qg = np.asarray(generator, dtype=float)
    if Qg.ndim == 1:
        if Qg.shape[0] != sp.n:
            raise ValueError("diagonal generator must have length n")
        evals, evecs = Qg, None
        spec_min = float(Qg.min())
    else:
        w, V = np.linalg.eigh((Qg + Qg.T) / 2)
        evals, evecs = w, V
        spec_min = float(w.min())
    if spec_min < m - 1e-9:
        raise MassGapError("mass gap violated")
    premise = 0.0
    if E.rank and F.rank and delta > 0:
        iF = sp.times_i(F.basis)
        for t in np.linspace(-delta, delta, n_t):
            VF = _flow(sp, evals, evecs, t, iF)
            premise = max(premise, float(np.linalg.norm(VF.T @ E.basis, 2)))
    rep = defect_operator(E, F)
    mt = meet(E, F).rank == 0
    return ClusterReport(d, rep.norm_EF, rep.norm_X, float(np.exp(-m * delta)), premise, mt, slack, tol_premise)
