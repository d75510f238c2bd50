"""Frozen lattice slacks from the reference calibration run.

Reference resolution: N = 1024, a m = 0.05, intervals of length 1/m.
`calibrate()` reruns the measurement; the tests compare its output with the
frozen numbers below so that a drift in the model is noticed.
"""
from __future__ import annotations

from ..realspace import principal_sines
from .position import PositionModel

REFERENCE = {"N": 1024, "a": 0.05, "m": 1.0}

# max over d in [a, 6/m] of max(0, ||E(A)E(B)|| - e^{-md}) was 0.0 (the lattice
# norms sit at 0.16-0.73 of the bound); the slack only absorbs round-off.
EPS_LATTICE = 1e-9

# propagation residual at t = 1/m, delta = 3/m for a 1/m interval
PROPAGATION_T1_D3 = 0.0321368

# smallest principal-angle sine between E_mod(A) and P_NW(A), A a 1/m
# interval (21 sites); the alternating-projection trace is cos^(2n-1) of
# that angle, so it stays at 1 - 1e-14 after 200 steps
NW_MIN_SINE_1M = 1.114e-8

CAL_DISTANCES = (0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)


def calibrate(model: PositionModel | None = None) -> dict:
    pm = model or PositionModel(**REFERENCE)
    excess = 0.0
    for d in CAL_DISTANCES:
        r = pm.cluster_report(d / pm.m, n_t=2)
        excess = max(excess, r.excess)
    mid = pm.N // 2
    L = int(round(1 / (pm.m * pm.a)))
    A = [pm.site_interval(mid, mid + L)]
    prop = pm.propagation_check(A, 1 / pm.m, 3 / pm.m)
    sine = float(principal_sines(pm.local_subspace(A), pm.nw_projection(A))[0])
    return {"eps_lattice": excess, "propagation_t1_d3": prop, "nw_min_sine_1m": sine}
