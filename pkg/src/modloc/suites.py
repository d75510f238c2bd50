"""Seeded self-test suites shared by the command line and the acceptance tests.

Every suite returns a SuiteResult: rows of (parameter, value, bound, pass)
plus suite-specific extra columns.  Values are worst residuals over the
sampled instances unless stated otherwise.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence

import numpy as np
from scipy.linalg import expm

from . import causal1d as cz
from .modular import (
    ConditioningWarning,
    covariance_transport,
    defect_operator,
    halmos_decompose,
    halmos_residuals,
    modular_data,
    projection_from_modular,
)
from .realspace import (
    ComplexSpace,
    RealProjection,
    complex_to_real_operator,
    containment_residual,
    is_complex_linear,
    join,
    meet,
    projection_distance,
    random_complex_projection,
    random_projection,
    random_standard,
    random_unitary,
    real_orthocomplement,
    symplectic_complement,
)
from .symplectic import (
    SymplecticSpace,
    SymplecticSubspace,
    chain_is_valid,
    gleason_measure,
    intersection_dim,
    plane_chain,
    sigma_complement,
    span_join,
)


@dataclass
class SuiteResult:
    name: str
    rows: List[dict] = field(default_factory=list)
    extra: Sequence[str] = ()
    seconds: float = 0.0

    def add(self, parameter, value, bound, ok, **extra):
        self.rows.append(dict(parameter=parameter, value=value, bound=bound, ok=bool(ok), **extra))

    def check(self, parameter, value, bound, **extra):
        self.add(parameter, value, bound, value <= bound, **extra)

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.rows)

    @property
    def failures(self) -> List[dict]:
        return [r for r in self.rows if not r["ok"]]


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


# -- symplectic ------------------------------------------------------------------


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
    """exp(Omega A) with A symmetric is symplectic for the standard Omega."""
    A = rng.standard_normal((2 * n, 2 * n)) * scale
    A = (A + A.T) / 2
    om = SymplecticSpace.standard(n).omega
    return expm(om @ A)


def structured_subspace(sp: SymplecticSpace, S: np.ndarray, planes, lines) -> SymplecticSubspace:
    """S applied to span{e_i, f_i : i in planes} + span{e_j : j in lines}; rank 2|planes|."""
    n = sp.dim // 2
    cols = [S[:, i] for i in planes] + [S[:, n + i] for i in planes] + [S[:, j] for j in lines]
    if not cols:
        return SymplecticSubspace.zero(sp)
    return SymplecticSubspace.span(sp, np.column_stack(cols))


def gleason_suite(n: int, samples: int = 200, seed: int = 0) -> SuiteResult:
    """Exact checks of mu = rank_sigma / 2n on structured random subspaces of R^{2n}."""
    t0 = time.perf_counter()
    res = SuiteResult(f"gleason-{2 * n}", extra=("dim", "rank"))
    rng = _rng(seed)
    sp = SymplecticSpace.standard(n)
    ok_norm = gleason_measure(SymplecticSubspace.whole(sp)) == 1 and gleason_measure(SymplecticSubspace.zero(sp)) == 0
    bad_oracle = bad_mono = bad_add = 0
    for i in range(samples):
        S = random_symplectic(n, rng)
        perm = rng.permutation(n)
        p = int(rng.integers(0, n + 1))
        q = int(rng.integers(0, n - p + 1))
        H = structured_subspace(sp, S, perm[:p], perm[p:p + q])
        mu = gleason_measure(H)
        expect = Fraction(2 * p, 2 * n)
        bad_oracle += mu != expect
        # monotone: H inside H + one random vector
        K = span_join(H, SymplecticSubspace(sp, rng.standard_normal(2 * n)))
        bad_mono += not (mu <= gleason_measure(K) <= 1)
        # additive: a sigma-orthogonal partner from the unused Darboux indices
        rest = perm[p + q:]
        p2 = int(rng.integers(0, len(rest) + 1))
        G = structured_subspace(sp, S, rest[:p2], ())
        bad_add += gleason_measure(span_join(H, G)) != mu + gleason_measure(G)
        res.add(i, str(mu), str(expect), mu == expect, dim=H.dim, rank=2 * p)
    res.add("normalization", int(not ok_norm), 0, ok_norm, dim=2 * n, rank=2 * n)
    res.add("oracle_mismatches", bad_oracle, 0, bad_oracle == 0, dim="", rank="")
    res.add("monotone_violations", bad_mono, 0, bad_mono == 0, dim="", rank="")
    res.add("additivity_violations", bad_add, 0, bad_add == 0, dim="", rank="")
    res.seconds = time.perf_counter() - t0
    return res


def plane_pair(sp: SymplecticSpace, rng: np.random.Generator, kind: str):
    K = SymplecticSubspace.span(sp, rng.standard_normal((sp.dim, 2)))
    if kind == "equal":
        H = SymplecticSubspace.span(sp, K.basis @ rng.standard_normal((2, 2)))
    elif kind == "line":
        k = K.basis @ rng.standard_normal(2)
        H = SymplecticSubspace.span(sp, np.column_stack([k, rng.standard_normal(sp.dim)]))
    elif kind == "orthogonal":
        Kp = sigma_complement(K)
        H = SymplecticSubspace.span(sp, Kp.basis @ rng.standard_normal((Kp.dim, 2)))
    else:
        H = SymplecticSubspace.span(sp, rng.standard_normal((sp.dim, 2)))
    return K, H


PAIR_KINDS = ("generic", "line", "orthogonal", "equal")


def plane_chain_suite(dim: int, samples: int = 500, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult(f"plane-chain-{dim}", extra=("kind",))
    rng = _rng(seed)
    sp = SymplecticSpace.standard(dim // 2)
    counts = {k: [0, 0, 0] for k in PAIR_KINDS}  # instances, invalid, longest chain
    for i in range(samples):
        kind = PAIR_KINDS[i % len(PAIR_KINDS)]
        K, H = plane_pair(sp, rng, kind)
        chain = plane_chain(K, H)
        c = counts[kind]
        c[0] += 1
        ends = chain[0] is K and intersection_dim(chain[-1], H) == 2
        c[1] += not (chain_is_valid(chain) and ends)
        c[2] = max(c[2], len(chain))
    for kind, (num, bad, longest) in counts.items():
        res.add(f"{kind}_invalid", bad, 0, bad == 0, kind=kind)
        res.add(f"{kind}_max_length", longest, 4, longest <= 4, kind=kind)
    res.seconds = time.perf_counter() - t0
    return res


# -- real lattice ----------------------------------------------------------------


def _nested_pair(sp: ComplexSpace, rng: np.random.Generator):
    """Random E <= F."""
    F = random_projection(sp, rng)
    k = int(rng.integers(0, F.rank + 1))
    if k == 0:
        return RealProjection.zero(sp), F
    E = RealProjection(sp, np.linalg.qr(F.basis @ rng.standard_normal((F.rank, k)))[0])
    return E, F


def _overlapping_pair(sp: ComplexSpace, rng: np.random.Generator):
    """Random E, F sharing a random common part."""
    d = sp.dim
    g = int(rng.integers(0, max(1, d // 3) + 1))
    G = rng.standard_normal((d, g))
    a = int(rng.integers(0, d - g + 1))
    b = int(rng.integers(0, d - g + 1))
    Ea = np.hstack([G, rng.standard_normal((d, a))])
    Fb = np.hstack([G, rng.standard_normal((d, b))])
    E = RealProjection(sp, np.linalg.qr(Ea)[0]) if Ea.shape[1] else RealProjection.zero(sp)
    F = RealProjection(sp, np.linalg.qr(Fb)[0]) if Fb.shape[1] else RealProjection.zero(sp)
    return E, F


def lattice_suite(n_max: int = 8, samples: int = 200, seed: int = 0, tol: float = 1e-8) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("lattice")
    rng = _rng(seed)
    worst: Dict[str, float] = dict.fromkeys(
        ["involution", "de_morgan_meet", "de_morgan_join", "order_reversal", "complex_complement",
         "complex_meet_join"], 0.0)
    for _ in range(samples):
        n = int(rng.integers(1, n_max + 1))
        sp = ComplexSpace(n)
        E, F = _overlapping_pair(sp, rng)
        Ep, Fp = symplectic_complement(E), symplectic_complement(F)
        worst["involution"] = max(worst["involution"], projection_distance(symplectic_complement(Ep), E))
        worst["de_morgan_meet"] = max(worst["de_morgan_meet"],
                                      projection_distance(symplectic_complement(meet(E, F)), join(Ep, Fp)))
        worst["de_morgan_join"] = max(worst["de_morgan_join"],
                                      projection_distance(symplectic_complement(join(E, F)), meet(Ep, Fp)))
        A, B = _nested_pair(sp, rng)
        worst["order_reversal"] = max(worst["order_reversal"],
                                      containment_residual(symplectic_complement(B), symplectic_complement(A)))
        C = random_complex_projection(sp, rng)
        D = random_complex_projection(sp, rng)
        worst["complex_complement"] = max(worst["complex_complement"],
                                          projection_distance(symplectic_complement(C), real_orthocomplement(C)))
        cl = 0.0 if (is_complex_linear(meet(C, D), 1e-8) and is_complex_linear(join(C, D), 1e-8)) else 1.0
        worst["complex_meet_join"] = max(worst["complex_meet_join"], cl)
    for k, v in worst.items():
        res.check(k, v, tol)
    res.seconds = time.perf_counter() - t0
    return res


# -- modular theory -------------------------------------------------------------


def modular_suite(n_values: Sequence[int] = range(2, 9), samples: int = 100, seed: int = 0,
                  tol: float = 1e-8, ts: Sequence[float] = (0.3, 1.0, 2.7)) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("modular")
    rng = _rng(seed)
    n_values = list(n_values)
    worst = dict.fromkeys(["J_duality", "Delta_invariance", "covariance_J", "covariance_Delta",
                           "projection_formula", "invariants"], 0.0)
    guarded = 0
    for i in range(samples):
        n = n_values[i % len(n_values)]
        sp = ComplexSpace(n)
        H = random_standard(sp, rng)
        U = complex_to_real_operator(random_unitary(n, rng))
        with warnings.catch_warnings():
            warnings.simplefilter("error", ConditioningWarning)
            try:
                md = modular_data(H)
                mdU = modular_data(RealProjection(sp, U @ H.basis))
            except ConditioningWarning:
                guarded += 1
                continue
        Hp = symplectic_complement(H)
        worst["J_duality"] = max(worst["J_duality"], projection_distance(RealProjection(sp, md.J @ H.basis), Hp))
        for t in ts:
            Ht = RealProjection(sp, np.linalg.qr(md.delta_it(t) @ H.basis)[0])
            worst["Delta_invariance"] = max(worst["Delta_invariance"], projection_distance(Ht, H))
        tr = covariance_transport(md, U)
        scale = max(1.0, float(md.evals[-1]))
        worst["covariance_J"] = max(worst["covariance_J"], float(np.linalg.norm(tr.J - mdU.J, 2)))
        worst["covariance_Delta"] = max(worst["covariance_Delta"],
                                        float(np.linalg.norm(tr.Delta - mdU.Delta, 2)) / scale)
        worst["projection_formula"] = max(worst["projection_formula"],
                                          projection_distance(projection_from_modular(md), H))
        worst["invariants"] = max(worst["invariants"], max(md.invariant_residuals().values()))
    for k, v in worst.items():
        res.check(k, v, tol)
    frac = guarded / max(samples, 1)
    res.add("guarded_fraction", frac, 0.05, frac < 0.05)
    res.seconds = time.perf_counter() - t0
    return res


def defect_suite(samples: int = 200, seed: int = 0, tol: float = 1e-9, n_max: int = 6) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("defect")
    rng = _rng(seed)
    worst = dict.fromkeys(["norm_identity", "halmos_orthogonal", "halmos_sum", "halmos_commute"], 0.0)
    for i in range(samples):
        sp = ComplexSpace(int(rng.integers(1, n_max + 1)))
        E, F = _overlapping_pair(sp, rng) if i % 2 else (random_projection(sp, rng), random_projection(sp, rng))
        rep = defect_operator(E, F)
        worst["norm_identity"] = max(worst["norm_identity"], rep.identity_residual)
        hr = halmos_residuals(E, F, halmos_decompose(E, F))
        worst["halmos_orthogonal"] = max(worst["halmos_orthogonal"], hr["orthogonal"])
        worst["halmos_sum"] = max(worst["halmos_sum"], hr["sum"])
        worst["halmos_commute"] = max(worst["halmos_commute"], hr["commute"])
    for k, v in worst.items():
        res.check(k, v, tol)
    res.seconds = time.perf_counter() - t0
    return res


# -- causal calculus ------------------------------------------------------------------


def random_staircase(rng: np.random.Generator, k_max: int = 4, span: int = 4) -> cz.CausalRegion:
    """Finite union of closed boxes with integer corners, some degenerate or unbounded."""
    boxes = []
    for _ in range(int(rng.integers(1, k_max + 1))):
        u = np.sort(rng.integers(-span, span + 1, 2)).astype(float)
        v = np.sort(rng.integers(-span, span + 1, 2)).astype(float)
        r = rng.random()
        if r < 0.1:
            u[1] = math.inf
        elif r < 0.2:
            v[0] = -math.inf
        boxes.append(cz.LightconeBox(u[0], u[1], v[0], v[1]))
    return cz.CausalRegion(boxes)


def random_intervals(rng: np.random.Generator, k_max: int = 3, span: int = 8) -> List[tuple]:
    out = []
    for _ in range(int(rng.integers(1, k_max + 1))):
        a, b = np.sort(rng.integers(-span, span + 1, 2)).astype(float)
        out.append((a, b))
    return out


def causal_suite(samples: int = 100, points: int = 10_000, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("causal")
    rng = _rng(seed)
    bad = dict.fromkeys(["triple_complement", "extensive", "de_morgan", "embedding_injective",
                         "embedding_separated", "embedding_join", "embedding_covariant",
                         "poincare_complement", "point_samples"], 0)
    regions = []
    for _ in range(samples):
        O = random_staircase(rng)
        Op = cz.causal_complement(O)
        regions.append((O, Op))
        bad["triple_complement"] += cz.causal_complement(cz.causal_complement(Op)) != Op
        bad["extensive"] += not (O <= cz.causal_complement(Op))
        O1 = cz.causal_completion(random_staircase(rng))
        O2 = cz.causal_completion(random_staircase(rng))
        lhs = cz.causal_complement(cz.region_join(O1, O2))
        rhs = cz.region_meet(cz.causal_complement(O1), cz.causal_complement(O2))
        bad["de_morgan"] += lhs != rhs
        g = cz.PoincareElement1d(float(rng.integers(-2, 3)) * 0.5, float(rng.integers(-3, 4)),
                                 float(rng.integers(-3, 4)), bool(rng.integers(2)), False)
        bad["poincare_complement"] += cz.poincare_apply(g, Op) != cz.causal_complement(cz.poincare_apply(g, O))
        # spatial embedding
        A = random_intervals(rng)
        B = random_intervals(rng)
        cA, cB = cz.spatial_completion(A), cz.spatial_completion(B)
        same = cz._normalize_intervals(A) == cz._normalize_intervals(B)
        bad["embedding_injective"] += (cA == cB) != same
        s = float(rng.integers(-5, 6))
        shifted = [(a + s, b + s) for a, b in A]
        bad["embedding_covariant"] += cz.spatial_completion(shifted) != cz.translate(cA, 0.0, s)
        lo = max(b for _, b in A)
        C = [(lo + 1 + a - min(x for x, _ in B), lo + 1 + b - min(x for x, _ in B)) for a, b in B]
        cC = cz.spatial_completion(C)
        bad["embedding_separated"] += not cz.region_separated(cA, cC)
        bad["embedding_join"] += cz.spatial_completion(A + C) != cz.region_join(cA, cC)
    # pointwise agreement of O' with the defining inequality
    per = max(1, points // samples)
    for O, Op in regions:
        ends = sorted({x for b in O.cells for x in (b.u1, b.u2, b.v1, b.v2) if math.isfinite(x)})
        for _ in range(per):
            if rng.random() < 0.5 and ends:
                u, v = float(rng.choice(ends)), float(rng.choice(ends))
            else:
                u, v = rng.uniform(-6, 6, 2)
            bad["point_samples"] += Op.contains_uv(u, v) != cz.complement_oracle(O, u, v)
    O1, O2, O3 = cz.distributivity_witness()
    lhs = cz.region_meet(O1, cz.region_join(O2, O3))
    rhs = cz.region_join(cz.region_meet(O1, O2), cz.region_meet(O1, O3))
    witness = lhs != rhs
    normalized = cz.spatial_completion([(-math.inf, math.inf)]).is_full()
    for k, v in bad.items():
        res.add(k, v, 0, v == 0)
    res.add("non_distributive_witness", int(witness), 1, witness)
    res.add("embedding_normalized", int(normalized), 1, normalized)
    res.seconds = time.perf_counter() - t0
    return res
