"""Mass-m scalar particle on a periodic position lattice.

States are momentum-space vectors psi_k on p_k = 2 pi k / (N a) with inner
product sum conj(psi_k) phi_k a / (N omega_k), the lattice version of
L^2(dp / omega).  Position test functions f on the sites enter through
psi = FFT(f).  For the real-linear algebra every state is mapped to the
isometric coordinates z_k = sqrt(a / (N omega_k)) psi_k, stacked as
(Re z; Im z) in R^{2N}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..causal1d import region_separated, spatial_completion
from ..modular import ClusterReport, cluster_check, defect_operator
from ..realspace import (
    ComplexSpace,
    RealProjection,
    alternating_meet_trace,
    complex_core_hull,
    containment_residual,
    join,
    orthonormal_span,
    principal_angle_residual,
    projection_distance,
    separation_residual,
)

GUARD_SITES = 8
Intervals = Sequence[Tuple[float, float]]


@dataclass(frozen=True)
class Translation:
    x0: float = 0.0
    x1: float = 0.0


@dataclass(frozen=True)
class Boost:
    t: float = 0.0


class _Named:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


TIME_REFLECTION = _Named("T")
PARITY = _Named("P")


class PositionModel:
    def __init__(self, N: int = 1024, a: float = 0.05, m: float = 1.0):
        if N < 2 or N & (N - 1):
            raise ValueError("N must be a power of two")
        if a <= 0 or m <= 0:
            raise ValueError("a and m must be positive")
        self.N = int(N)
        self.a = float(a)
        self.m = float(m)
        self.x = self.a * np.arange(self.N)
        self.p = 2 * np.pi * np.fft.fftfreq(self.N, d=self.a)
        self.omega = np.sqrt(self.m ** 2 + self.p ** 2)
        self.weights = self.a / (self.N * self.omega)
        self.sw = np.sqrt(self.weights)
        self.space = ComplexSpace(self.N)
        # index of -p_k
        self.neg = (-np.arange(self.N)) % self.N

    def __repr__(self):
        return f"PositionModel(N={self.N}, a={self.a}, m={self.m})"

    @property
    def length(self) -> float:
        return self.N * self.a

    # -- states ------------------------------------------------------------

    def from_position(self, f) -> np.ndarray:
        return np.fft.fft(np.asarray(f, dtype=complex))

    def inner(self, psi, phi) -> complex:
        return complex(np.sum(np.conj(psi) * phi * self.weights))

    def norm(self, psi) -> float:
        return float(np.sqrt(np.sum(np.abs(psi) ** 2 * self.weights)))

    def to_real(self, psi) -> np.ndarray:
        z = self.sw * np.asarray(psi)
        return np.concatenate([z.real, z.imag])

    def from_real(self, x) -> np.ndarray:
        z = x[: self.N] + 1j * x[self.N:]
        return z / self.sw

    def gaussian(self, center: float, width: float, cut: float = 8.0) -> np.ndarray:
        """Real Gaussian on the sites, truncated at `cut` widths."""
        d = self.x - center
        f = np.exp(-0.5 * (d / width) ** 2)
        f[np.abs(d) > cut * width] = 0.0
        return f

    # -- symmetries ----------------------------------------------------------

    def phase(self, x0: float, x1: float) -> np.ndarray:
        return np.exp(1j * (x0 * self.omega - x1 * self.p))

    def apply_symmetry(self, psi, g) -> np.ndarray:
        psi = np.asarray(psi, dtype=complex)
        if isinstance(g, Translation):
            return self.phase(g.x0, g.x1) * psi
        if isinstance(g, Boost):
            raise ValueError("boost requires rapidity model")
        if g is TIME_REFLECTION:
            return np.conj(psi[self.neg])
        if g is PARITY:
            return psi[self.neg]
        raise ValueError(f"unsupported symmetry {g!r}")

    def translate_real(self, X: np.ndarray, x0: float, x1: float) -> np.ndarray:
        """Apply U(x) to real-coordinate vectors (columns of X)."""
        ph = self.phase(x0, x1)
        c, s = ph.real, ph.imag
        if X.ndim == 2:
            c, s = c[:, None], s[:, None]
        n = self.N
        re, im = X[:n], X[n:]
        return np.concatenate([c * re - s * im, s * re + c * im])

    def symmetry_matrix(self, g) -> np.ndarray:
        """Real 2N x 2N matrix of a represented symmetry."""
        n = self.N
        if isinstance(g, Translation):
            return self.translate_real(np.eye(2 * n), g.x0, g.x1)
        P = np.zeros((n, n))
        P[np.arange(n), self.neg] = 1.0
        Z = np.zeros((n, n))
        if g is PARITY:
            return np.block([[P, Z], [Z, P]])
        if g is TIME_REFLECTION:
            return np.block([[P, Z], [Z, -P]])
        if isinstance(g, Boost):
            raise ValueError("boost requires rapidity model")
        raise ValueError(f"unsupported symmetry {g!r}")

    def cauchy_split(self, psi) -> Tuple[np.ndarray, np.ndarray]:
        """psi_+ = (psi + U(T) psi)/2 and psi_- = (psi - U(T) psi)/(2 i omega)."""
        psi = np.asarray(psi, dtype=complex)
        Tpsi = np.conj(psi[self.neg])
        return (psi + Tpsi) / 2, (psi - Tpsi) / (2j * self.omega)

    # -- regions -------------------------------------------------------------

    def sites(self, A: Intervals, guard: bool = True) -> np.ndarray:
        """Indices of sites inside a union of closed intervals."""
        eps = 1e-9 * self.a
        mask = np.zeros(self.N, dtype=bool)
        for lo, hi in A:
            mask |= (self.x >= lo - eps) & (self.x <= hi + eps)
        idx = np.flatnonzero(mask)
        if guard and 0 < idx.size < self.N:
            if idx.min() < GUARD_SITES or idx.max() > self.N - 1 - GUARD_SITES:
                raise ValueError("region too close to the periodic boundary")
        return idx

    def site_interval(self, i: int, j: int) -> Tuple[float, float]:
        return (i * self.a, j * self.a)

    def _plane_waves(self, idx: np.ndarray) -> np.ndarray:
        return np.exp(-1j * np.outer(self.p, self.x[idx]))

    def local_basis(self, idx: np.ndarray) -> np.ndarray:
        """Real vectors of the Cauchy-data pairs (F delta_x, 0) and (0, F delta_x)."""
        W = self._plane_waves(idx)
        Z1 = self.sw[:, None] * W
        Z2 = 1j * (self.sw * self.omega)[:, None] * W
        Z = np.hstack([Z1, Z2])
        return np.vstack([Z.real, Z.imag])

    def local_subspace_sites(self, idx: np.ndarray) -> RealProjection:
        if idx.size == 0:
            raise ValueError("empty region")
        if idx.size == self.N:
            return RealProjection.identity(self.space)
        Q, _ = np.linalg.qr(self.local_basis(idx))
        return RealProjection(self.space, Q)

    def local_subspace(self, A: Intervals, guard: bool = True) -> RealProjection:
        return self.local_subspace_sites(self.sites(A, guard))

    def nw_projection_sites(self, idx: np.ndarray) -> RealProjection:
        if idx.size == 0:
            return RealProjection.zero(self.space)
        U = self._plane_waves(idx) / math.sqrt(self.N)
        Z = np.hstack([U, 1j * U])
        return RealProjection(self.space, np.vstack([Z.real, Z.imag]))

    def nw_projection(self, A: Intervals, guard: bool = True) -> RealProjection:
        return self.nw_projection_sites(self.sites(A, guard))

    def nw_position_density(self, psi) -> np.ndarray:
        """<psi, P(cell_j) psi> for every site j (Newton-Wigner distribution)."""
        z = self.sw * np.asarray(psi)
        amp = np.fft.ifft(z) * math.sqrt(self.N)
        return np.abs(amp) ** 2

    # -- observables -----------------------------------------------------------

    def commutator_function(self, f1, f2, x: Tuple[float, float]) -> float:
        """Im <f1~, U(x) f2~> for real test functions on the sites."""
        psi1 = self.from_position(np.asarray(f1, dtype=float))
        psi2 = self.from_position(np.asarray(f2, dtype=float))
        return float(np.imag(self.inner(psi1, self.phase(*x) * psi2)))

    def fuzzy_measure(self, psi, A: Intervals) -> float:
        nrm = self.norm(psi)
        if abs(nrm - 1.0) > 1e-10:
            raise ValueError("state is not normalized")
        if not A:
            return 0.0
        E = self.local_subspace(A)
        z = self.to_real(psi)
        return float(np.sum((E.basis.T @ z) ** 2))

    def enlarge(self, A: Intervals, r: float) -> List[Tuple[float, float]]:
        out = [(lo - r, hi + r) for lo, hi in A]
        for lo, hi in out:
            if lo < 0 or hi > (self.N - 1) * self.a:
                raise ValueError("enlarged region wraps the periodic box")
        return out

    def propagation_check(self, A: Intervals, t: float, delta: float) -> float:
        """||(1 - E(A + (|t| + delta)[-1, 1])) U(t e0) E(A)||."""
        big = self.enlarge(A, abs(t) + delta)
        E = self.local_subspace(A)
        F = self.local_subspace(big, guard=False)
        UE = self.translate_real(E.basis, t, 0.0)
        R = UE - F.basis @ (F.basis.T @ UE)
        return float(np.linalg.norm(R, 2))

    def nw_incompatibility(self, A: Intervals, B: Intervals, n_iter: int = 200) -> np.ndarray:
        """||(E_mod(A) P_NW(B))^n|| for n = 1..n_iter."""
        return alternating_meet_trace(self.local_subspace(A), self.nw_projection(B), n_iter)

    def cluster_pair(self, d: float, length: float) -> Tuple[List[Tuple[float, float]], List[Tuple[float, float]], float]:
        """Two site-aligned intervals of the given length, gap d, centred in the box."""
        g = max(1, int(round(d / self.a)))
        L = max(1, int(round(length / self.a)))
        mid = self.N // 2
        eA = mid - g // 2
        sA = eA - L
        sB = eA + g
        eB = sB + L
        if sA < GUARD_SITES or eB > self.N - 1 - GUARD_SITES:
            raise ValueError("interval pair does not fit in the box")
        return [self.site_interval(sA, eA)], [self.site_interval(sB, eB)], g * self.a

    def cluster_report(self, d: float, length: float | None = None, n_t: int = 33,
                       slack: float = 0.0) -> ClusterReport:
        length = 1.0 / self.m if length is None else length
        A, B, dd = self.cluster_pair(d, length)
        E = self.local_subspace(A)
        F = self.local_subspace(B)
        return cluster_check(E, F, self.omega, self.m, dd, n_t=n_t, slack=slack, d=dd)

    def cluster_scan(self, ds: Iterable[float], length: float | None = None, n_t: int = 33,
                     slack: float = 0.0) -> List[ClusterReport]:
        return [self.cluster_report(d, length, n_t, slack) for d in ds]

    # -- audit -----------------------------------------------------------------

    def observable_audit(self, family: Sequence[Intervals], shifts: Sequence[int] = (1, 5, -3)) -> dict:
        """Worst residuals of A -> local_subspace(A) against the observable axioms."""
        res = {"normalization": 0.0, "additivity": 0.0, "separation": 0.0,
               "complement": 0.0, "covariance": 0.0, "causal_consistency": 0.0}
        full = self.local_subspace_sites(np.arange(self.N))
        res["normalization"] = float(self.space.dim - full.rank)
        cache = {}
        for k, A in enumerate(family):
            if not A:
                continue  # f(empty) = 0 by definition
            idx = self.sites(A)
            cache[k] = (idx, self.local_subspace_sites(idx))
        keys = sorted(cache)
        for k in keys:
            idx, E = cache[k]
            comp = np.setdiff1d(np.arange(self.N), idx)
            if comp.size:
                Ec = self.local_subspace_sites(comp)
                res["complement"] = max(res["complement"], separation_residual(E, Ec))
            for s in shifts:
                if idx.min() + s < GUARD_SITES or idx.max() + s > self.N - 1 - GUARD_SITES:
                    continue
                UE = RealProjection(self.space, self.translate_real(E.basis, 0.0, s * self.a))
                Es = self.local_subspace_sites(idx + s)
                res["covariance"] = max(res["covariance"], principal_angle_residual(UE, Es))
        for i, k in enumerate(keys):
            for l in keys[i + 1:]:
                (ia, Ea), (ib, Eb) = cache[k], cache[l]
                if np.intersect1d(ia, ib).size:
                    continue
                cA = spatial_completion(family[k])
                cB = spatial_completion(family[l])
                if not region_separated(cA, cB):
                    res["causal_consistency"] = 1.0
                    continue
                res["separation"] = max(res["separation"], separation_residual(Ea, Eb))
                Eu = self.local_subspace_sites(np.union1d(ia, ib))
                res["additivity"] = max(res["additivity"], projection_distance(join(Ea, Eb), Eu))
        return res

    def reeh_schlieder_flags(self, A: Intervals):
        return complex_core_hull(self.local_subspace(A))
