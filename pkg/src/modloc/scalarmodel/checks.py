"""Scalar-model check suites behind the scan subcommands and the acceptance tests."""
from __future__ import annotations

import math
from typing import Callable, Iterable, List, Sequence

import numpy as np

from ..suites import SuiteResult
from .calibration import EPS_LATTICE
from .position import PositionModel
from .rapidity import RapidityModel

DUALITY_TOL = 1e-6
BOOST_TOL = 1e-8
INCLUSION_TOL = 1e-5
NW_TARGET = 0.05


def cluster_scan(pm: PositionModel, ds: Sequence[float], length: float | None = None,
                 slack: float = EPS_LATTICE, n_t: int = 33, mapper: Callable = map) -> SuiteResult:
    """Distance sweep of ||E(A)E(B)|| and the additivity defect; ds in units of 1/m."""
    res = SuiteResult("cluster-scan", extra=("norm_X", "premise_residual"))
    ds = sorted(float(d) for d in ds)
    reps = list(mapper(lambda d: pm.cluster_report(d / pm.m, length, n_t, slack), ds))
    for rep in reps:
        res.add(f"d={rep.d:.6g}", rep.norm_EF, rep.bound + slack, rep.bound_ok,
                norm_X=rep.norm_X, premise_residual=rep.premise_residual)
    ef = np.array([r.norm_EF for r in reps])
    mono = bool(np.all(np.diff(ef) < 0))
    res.add("strictly_decreasing", int(mono), 1, mono, norm_X="", premise_residual="")
    if len(reps) > 1:
        d = np.array([r.d for r in reps])
        slope = float(np.polyfit(d, np.log(ef), 1)[0])
        res.add("log_slope", slope, -0.75 * pm.m, slope <= -0.75 * pm.m, norm_X="", premise_residual="")
    return res


def cluster_residuals(pm: PositionModel, ds: Sequence[float], length: float | None = None) -> List[float]:
    """Bound excesses max(0, norm - e^{-md}) for EF and X, and the premise residuals."""
    out = []
    for d in ds:
        r = pm.cluster_report(d / pm.m, length)
        out += [max(0.0, r.norm_EF - r.bound), max(0.0, r.norm_X - r.bound), r.premise_residual]
    return out


def commutator_scan(pm: PositionModel, samples: int = 100, seed: int = 0, margin_sites: int = 3,
                    width_sites: float = 5.0, gap: float | None = None) -> SuiteResult:
    """Im<f1~, U(x) f2~> at sampled non-timelike x and at a scanned timelike witness."""
    res = SuiteResult("commutator", extra=("kind", "x0", "x1"))
    rng = np.random.default_rng(seed)
    a = pm.a
    w = width_sites * a
    cut = 8 * w
    D = 3.0 / pm.m if gap is None else gap
    c1 = pm.x[pm.N // 2] - D / 2 - cut
    c2 = c1 + 2 * cut + D
    f1, f2 = pm.gaussian(c1, w), pm.gaussian(c2, w)
    scale = pm.norm(pm.from_position(f1)) * pm.norm(pm.from_position(f2))
    for _ in range(samples):
        x1 = float(rng.uniform(-D / 2, D / 2))
        dist = abs(c2 + x1 - c1) - 2 * cut
        x0 = float(rng.uniform(-1, 1) * (dist - margin_sites * a))
        v = abs(pm.commutator_function(f1, f2, (x0, x1))) / scale
        res.add("spacelike", v, 1e-6, v <= 1e-6, kind="spacelike", x0=x0, x1=x1)
    best, bx = 0.0, 0.0
    for x0 in np.linspace(D + 0.1 / pm.m, D + 4 * cut, 60):
        v = abs(pm.commutator_function(f1, f2, (float(x0), 0.0))) / scale
        if v > best:
            best, bx = v, float(x0)
    res.add("timelike_witness", best, 1e-3, best >= 1e-3, kind="timelike", x0=bx, x1=0.0)
    return res


def fuzzy_scan(pm: PositionModel, triples: int = 50, seed: int = 0, slack: float = EPS_LATTICE) -> SuiteResult:
    """Normalization, monotonicity and the e^{-md} additivity defect of mu(A) = ||E(A) psi||^2."""
    res = SuiteResult("fuzzy", extra=("distance",))
    rng = np.random.default_rng(seed)
    mid = pm.N // 2
    worst_norm = worst_mono = 0.0
    worst_excess = 0.0
    for i in range(triples):
        la, lb = (int(x) for x in rng.integers(2, 41, 2))
        g = int(rng.integers(1, 81))
        eA = mid - g // 2
        A = [pm.site_interval(eA - la, eA)]
        B = [pm.site_interval(eA + g, eA + g + lb)]
        d = g * pm.a
        QA = pm.local_subspace(A).basis
        QB = pm.local_subspace(B).basis
        z = QA @ rng.standard_normal(QA.shape[1]) + QB @ rng.standard_normal(QB.shape[1])
        z = z + 0.3 * np.linalg.norm(z) / math.sqrt(z.size) * rng.standard_normal(z.size)
        psi = pm.from_real(z / np.linalg.norm(z))
        muA, muB = pm.fuzzy_measure(psi, A), pm.fuzzy_measure(psi, B)
        muAB = pm.fuzzy_measure(psi, A + B)
        big = [pm.site_interval(eA - la - 3, eA + 2)]
        worst_mono = max(worst_mono, muA - pm.fuzzy_measure(psi, big), muA - muAB, muB - muAB)
        full = pm.local_subspace_sites(np.arange(pm.N))
        worst_norm = max(worst_norm, abs(float(np.sum((full.basis.T @ pm.to_real(psi)) ** 2)) - 1.0),
                         pm.fuzzy_measure(psi, []))
        defect = abs(muAB - muA - muB)
        excess = defect - math.exp(-pm.m * d)
        worst_excess = max(worst_excess, excess)
        res.add(f"triple{i}", defect, math.exp(-pm.m * d) + slack, excess <= slack, distance=d)
    res.add("normalization", worst_norm, 1e-10, worst_norm <= 1e-10, distance="")
    res.add("monotonicity", max(worst_mono, 0.0), 1e-10, worst_mono <= 1e-10, distance="")
    return res


DEFAULT_FAMILY_SITES = [(100, 120), (140, 141), (200, 260), (300, 300), (500, 540)]


def observable_audit(pm: PositionModel, family: Iterable | None = None, tol: float = 1e-9) -> SuiteResult:
    res = SuiteResult("observable-audit")
    if family is None:
        family = [[pm.site_interval(i, j)] for i, j in DEFAULT_FAMILY_SITES] + [[]]
    rep = pm.observable_audit(list(family))
    for k, v in rep.items():
        res.check(k, v, tol)
    return res


def nw_compare(pm: PositionModel, pairs=None, n_iter: int = 200) -> SuiteResult:
    """Alternating-projection traces for E_mod(A) against P_NW(B)."""
    res = SuiteResult("nw-compare", extra=("sites_A", "sites_B", "first"))
    mid = pm.N // 2
    L = int(round(1 / (pm.m * pm.a)))
    if pairs is None:
        pairs = [((mid, mid), (mid, mid)), ((mid, mid + 1), (mid, mid + 1)),
                 ((mid, mid + 3), (mid, mid + 3)), ((mid, mid + L), (mid, mid + L)),
                 ((mid, mid + L), (mid + L // 2, mid + L + L // 2))]
    for (i, j), (k, l) in pairs:
        tr = pm.nw_incompatibility([pm.site_interval(i, j)], [pm.site_interval(k, l)], n_iter)
        last = float(tr[-1])
        res.add(f"A=[{i},{j}] B=[{k},{l}]", last, NW_TARGET, last < NW_TARGET,
                sites_A=j - i + 1, sites_B=l - k + 1, first=float(tr[0]))
    return res


def bgl_wedge(rm: RapidityModel) -> SuiteResult:
    res = SuiteResult("bgl-wedge")
    rep = rm.report()
    res.check("duality", rep.duality, DUALITY_TOL)
    res.check("boost_invariance", rep.boost_invariance, BOOST_TOL)
    res.check("lightlike_inclusion", rep.lightlike_inclusion, INCLUSION_TOL)
    # report-only rows: no pass/fail semantics
    res.add("borchers", rep.borchers, "", True)
    res.add("negative_translation_control", rep.negative_control, "", True)
    return res


def propagation_scan(pm: PositionModel, t: float | None = None, deltas: Sequence[float] = (0.0, 0.5, 1.0, 2.0, 3.0)) -> SuiteResult:
    res = SuiteResult("propagation")
    t = 1.0 / pm.m if t is None else t
    mid = pm.N // 2
    L = int(round(1 / (pm.m * pm.a)))
    A = [pm.site_interval(mid, mid + L)]
    vals = [pm.propagation_check(A, t, dl / pm.m) for dl in deltas]
    for dl, v in zip(deltas, vals):
        res.add(f"delta={dl:g}", v, "", True)
    dec = bool(np.all(np.diff(vals) < 0))
    res.add("decreasing", int(dec), 1, dec)
    if 3.0 in deltas:
        v3 = vals[list(deltas).index(3.0)]
        bound = 10 * math.exp(-3.0)
        res.add("delta3_bound", v3, bound, v3 <= bound)
    return res
