"""One-particle space in rapidity coordinates, with the wedge subspace built
from the modular data of the boosts (Brunetti-Guido-Longo construction).

Wave functions live on a periodic grid theta_j in [-Theta, Theta) and the
model Hilbert space V is spanned by the Fourier modes
e_n(theta) = exp(i kappa_n theta) / sqrt(2 Theta), kappa_n = pi n / Theta,
|kappa_n| <= kappa_max.  Boosts act by exact grid shifts, which are diagonal
on the modes.  Translations act by multiplication and are compressed to V.

For the right wedge the boost generator is K_W = i d/dtheta, so
exp(-pi K_W) e_n = exp(pi kappa_n) e_n, and the wedge subspace is the fixed
space of T = J exp(-pi K_W) with J psi(theta) = conj(psi(-theta)) (on modes
J c_n = conj(c_{-n})).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np

from ..modular import COND_GUARD
from ..realspace import (
    ComplexSpace,
    RealProjection,
    complex_to_real_operator,
    meet,
    orthonormal_span,
    projection_distance,
    symplectic_complement,
)

RANK_TOL = 1e-8


class GridError(ValueError):
    pass


class RapidityModel:
    def __init__(self, M: int = 512, Theta: float = 12.0, m: float = 1.0,
                 kappa_max: float = 8.0, cond_guard: float = COND_GUARD):
        if M < 4 or M % 2:
            raise ValueError("M must be even")
        self.M = int(M)
        self.Theta = float(Theta)
        self.m = float(m)
        self.kappa_max = float(kappa_max)
        if math.pi * self.kappa_max > math.log(cond_guard):
            cap = math.floor(100 * math.log(cond_guard) / math.pi) / 100
            raise GridError(f"kappa_max={kappa_max} exceeds conditioning guard; use kappa_max <= {cap}")
        self.dtheta = 2 * self.Theta / self.M
        self.theta = -self.Theta + self.dtheta * np.arange(self.M)
        self.n_max = int(math.floor(self.kappa_max * self.Theta / math.pi + 1e-12))
        if 2 * self.n_max + 1 >= self.M:
            raise GridError("mode cutoff exceeds grid resolution")
        self.ns = np.arange(-self.n_max, self.n_max + 1)
        self.kappas = math.pi * self.ns / self.Theta
        self.nm = self.ns.size
        self.space = ComplexSpace(self.nm)
        self.B = np.exp(1j * np.outer(self.theta, self.kappas)) / math.sqrt(2 * self.Theta)

    def __repr__(self):
        return f"RapidityModel(M={self.M}, Theta={self.Theta}, m={self.m}, kappa_max={self.kappa_max})"

    # -- coordinates -----------------------------------------------------------

    def to_modes(self, psi_grid) -> np.ndarray:
        return self.B.conj().T @ np.asarray(psi_grid, dtype=complex) * self.dtheta

    def from_modes(self, c) -> np.ndarray:
        return self.B @ np.asarray(c, dtype=complex)

    def to_real(self, c) -> np.ndarray:
        c = np.asarray(c)
        return np.concatenate([c.real, c.imag])

    def from_real(self, x) -> np.ndarray:
        return x[: self.nm] + 1j * x[self.nm:]

    # -- represented symmetries --------------------------------------------------

    def _steps(self, t: float) -> int:
        k = t / self.dtheta
        if abs(k - round(k)) > 1e-9:
            raise GridError("boost rapidity must be a multiple of the grid step")
        return int(round(k))

    def boost_phase(self, t: float) -> np.ndarray:
        """U(Lambda(t)) psi(theta) = psi(theta - t), diagonal on the modes."""
        self._steps(t)
        return np.exp(-1j * self.kappas * t)

    def boost_matrix(self, t: float) -> np.ndarray:
        return complex_to_real_operator(np.diag(self.boost_phase(t)))

    def boost_grid(self, psi_grid, t: float) -> np.ndarray:
        return np.roll(np.asarray(psi_grid), self._steps(t))

    def multiplier(self, x0: float, x1: float) -> np.ndarray:
        th = self.theta
        return np.exp(1j * self.m * (x0 * np.cosh(th) - x1 * np.sinh(th)))

    def translation_complex(self, x0: float, x1: float) -> np.ndarray:
        """Compression P_V U(x) P_V of the translation to the mode space."""
        g = self.multiplier(x0, x1)
        return self.B.conj().T @ (g[:, None] * self.B) * self.dtheta

    def lightlike_translation(self, s: float) -> np.ndarray:
        """U(s (1, 1)); the multiplier is exp(i m s e^{-theta})."""
        return self.translation_complex(s, s)

    def translation_matrix(self, x0: float, x1: float) -> np.ndarray:
        return complex_to_real_operator(self.translation_complex(x0, x1))

    @cached_property
    def J_matrix(self) -> np.ndarray:
        """c_n -> conj(c_{-n}) in real coordinates."""
        n = self.nm
        R = np.eye(n)[::-1]
        Z = np.zeros((n, n))
        return np.block([[R, Z], [Z, -R]])

    @cached_property
    def parity_matrix(self) -> np.ndarray:
        n = self.nm
        R = np.eye(n)[::-1]
        Z = np.zeros((n, n))
        return np.block([[R, Z], [Z, R]])

    def tomita_matrix(self) -> np.ndarray:
        """Real matrix of T = J exp(-pi K_W)."""
        D = np.exp(np.pi * self.kappas)
        Dm = np.concatenate([D, D])
        return self.J_matrix * Dm[None, :]

    # -- wedge subspace -------------------------------------------------------------

    def _right_basis(self) -> np.ndarray:
        n = self.nm
        cols = []
        k0 = self.n_max
        e = np.zeros(2 * n)
        e[k0] = 1.0
        cols.append(e)
        for j in range(1, self.n_max + 1):
            kp, km = k0 + j, k0 - j
            q = math.exp(-math.pi * self.kappas[kp])
            idx = [kp, km, n + kp, n + km]
            # (T c)_{+} = q conj(c_{-}), (T c)_{-} = conj(c_{+}) / q
            T4 = np.array([[0, q, 0, 0],
                           [1 / q, 0, 0, 0],
                           [0, 0, 0, -q],
                           [0, 0, -1 / q, 0]])
            P4 = (np.eye(4) + T4) / 2
            U, s, _ = np.linalg.svd(P4)
            r = int(np.sum(s > RANK_TOL * s[0]))
            for c in range(r):
                v = np.zeros(2 * n)
                v[idx] = U[:, c]
                cols.append(v)
        return np.array(cols).T

    @cached_property
    def right_wedge(self) -> RealProjection:
        Q, _ = np.linalg.qr(self._right_basis())
        return RealProjection(self.space, Q)

    @cached_property
    def left_wedge(self) -> RealProjection:
        return RealProjection(self.space, self.parity_matrix @ self.right_wedge.basis)

    def bgl_wedge_space(self, wedge: str = "right", x: Tuple[float, float] | None = None) -> RealProjection:
        """Wedge subspace H(W + x).  Translated wedges use the compressed U(x),
        so they are only approximately the wedge subspace of the shifted wedge."""
        if wedge == "right":
            H = self.right_wedge
        elif wedge == "left":
            H = self.left_wedge
        else:
            raise ValueError("wedge must be 'right' or 'left'")
        if x is None or (x[0] == 0 and x[1] == 0):
            return H
        Q = orthonormal_span(self.translation_matrix(*x) @ H.basis)
        return RealProjection(self.space, Q)

    def bgl_double_cone(self, a: float, b: float) -> RealProjection:
        """H(W + (0, a)) meet H(W' + (0, b)) for the double cone over [a, b].

        Only the two tangent wedges enter.  Each is half-dimensional in the
        truncated mode space, so the meet is generically {0} here.
        """
        if not a < b:
            raise ValueError("double cone needs a < b")
        return meet(self.bgl_wedge_space("right", (0.0, a)), self.bgl_wedge_space("left", (0.0, b)))

    # -- analytic test states ---------------------------------------------------------

    def wedge_state(self, theta0: float = 0.0, sigma: float = 1.0, k0: float = 0.0) -> np.ndarray:
        """Mode vector of h + T h for a Gaussian packet h; T h(theta) = conj(h(theta - i pi))."""
        def h(z):
            return np.exp(-((z - theta0) ** 2) / (2 * sigma ** 2) - 1j * k0 * z)
        th = self.theta
        psi = h(th) + np.conj(h(th - 1j * np.pi))
        return self.to_modes(psi)

    # -- checks -----------------------------------------------------------------

    def duality_residual(self) -> float:
        return projection_distance(self.left_wedge, symplectic_complement(self.right_wedge))

    def boost_invariance_residual(self, steps: Sequence[int] = (1, 7, 32)) -> float:
        H = self.right_wedge
        worst = 0.0
        for k in steps:
            UH = RealProjection(self.space, self.boost_matrix(k * self.dtheta) @ H.basis)
            worst = max(worst, projection_distance(UH, H))
        return worst

    def inclusion_residual(self, c, s: float) -> float:
        """||(1 - E_H) U(s y+) c|| / ||c|| for a right-wedge state c."""
        Q = self.right_wedge.basis
        x = self.to_real(self.lightlike_translation(s) @ c)
        r = x - Q @ (Q.T @ x)
        return float(np.linalg.norm(r) / np.linalg.norm(c))

    def lightlike_inclusion(self, s_values=(0.1, 0.25, 0.5, 1.0), theta0s=(0.0, 0.5, 1.0, 2.0),
                            k0s=(0.0, 1.0, 2.0), sigma: float = 1.0) -> float:
        """Worst inclusion residual over the analytic state family; s in units of 1/m."""
        worst = 0.0
        for t0 in theta0s:
            for k0 in k0s:
                c = self.wedge_state(t0, sigma, k0)
                for s in s_values:
                    worst = max(worst, self.inclusion_residual(c, s / self.m))
        return worst

    def borchers_residual(self, t_steps: Sequence[int] = (1, 3, 16), s: float = 0.5,
                          theta0s=(0.0, 1.0), k0s=(0.0, 1.0), sigma: float = 1.0) -> float:
        """Delta^{it} U(s y+) Delta^{-it} against U(exp(-2 pi t) s y+), with 2 pi t on the grid.

        Measured on the analytic state family: the multiplier exp(i m s e^{-theta})
        is not periodic, so the operator identity fails at the grid seam.
        """
        worst = 0.0
        V = self.lightlike_translation(s / self.m)
        states = [self.wedge_state(t0, sigma, k0) for t0 in theta0s for k0 in k0s]
        for k in t_steps:
            tau = k * self.dtheta  # tau = 2 pi t
            d = self.boost_phase(-tau)
            W = self.lightlike_translation(math.exp(-tau) * s / self.m)
            for c in states:
                lhs = d * (V @ (np.conj(d) * c))
                worst = max(worst, float(np.linalg.norm(lhs - W @ c) / np.linalg.norm(c)))
        return worst

    def report(self) -> "BGLReport":
        return BGLReport(
            duality=self.duality_residual(),
            boost_invariance=self.boost_invariance_residual(),
            lightlike_inclusion=self.lightlike_inclusion(),
            borchers=self.borchers_residual(),
            negative_control=self.lightlike_inclusion(s_values=(-0.25, -0.5, -1.0)),
        )


@dataclass
class BGLReport:
    duality: float
    boost_invariance: float
    lightlike_inclusion: float
    borchers: float
    negative_control: float
    tol: float = field(default=1e-5)

    def passed(self) -> bool:
        return max(self.duality, self.boost_invariance, self.lightlike_inclusion, self.borchers) <= self.tol

    def rows(self):
        return [
            ("duality", self.duality, self.tol),
            ("boost_invariance", self.boost_invariance, self.tol),
            ("lightlike_inclusion", self.lightlike_inclusion, self.tol),
            ("borchers", self.borchers, self.tol),
            ("negative_control", self.negative_control, float("nan")),
        ]
