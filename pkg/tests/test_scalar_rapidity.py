import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modloc.modular import modular_data
from modloc.realspace import RealProjection, projection_distance
from modloc.scalarmodel import GridError, RapidityModel


@pytest.fixture(scope="module")
def rm():
    return RapidityModel()


@pytest.fixture(scope="module")
def low():
    return RapidityModel(128, 12.0, 1.0, kappa_max=1.5)


def test_grid_and_modes(rm):
    assert rm.dtheta == pytest.approx(24 / 512)
    assert np.abs(rm.kappas).max() <= rm.kappa_max
    # the mode basis is orthonormal in the flat d theta measure
    G = rm.B.conj().T @ rm.B * rm.dtheta
    assert np.abs(G - np.eye(rm.nm)).max() < 1e-12
    c = np.random.default_rng(0).standard_normal(rm.nm) + 0j
    assert np.allclose(rm.to_modes(rm.from_modes(c)), c)


@given(st.integers(-40, 40), st.integers(0, 2**32 - 1))
def test_grid_shift_is_mode_phase(k, seed):
    rm = RapidityModel(128, 12.0, 1.0, 2.0)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(rm.nm) + 1j * rng.standard_normal(rm.nm)
    t = k * rm.dtheta
    shifted = rm.boost_grid(rm.from_modes(c), t)
    assert np.allclose(rm.to_modes(shifted), rm.boost_phase(t) * c, atol=1e-12)


def test_boost_off_grid_rejected(rm):
    with pytest.raises(GridError, match="multiple of the grid step"):
        rm.boost_phase(0.3 * rm.dtheta)


def test_conditioning_guard():
    with pytest.raises(GridError, match=r"kappa_max <= 8\.79"):
        RapidityModel(kappa_max=9.0)
    RapidityModel(kappa_max=8.79)


def test_tomita_is_an_involution(low):
    T = low.tomita_matrix()
    assert np.abs(T @ T - np.eye(2 * low.nm)).max() < 1e-10


def test_wedge_is_range_of_fixed_point_projector(low):
    # oracle: full 2n x 2n matrix of (1 + T)/2, range by SVD
    P = (np.eye(2 * low.nm) + low.tomita_matrix()) / 2
    U, s, _ = np.linalg.svd(P)
    r = int(np.sum(s > 1e-8 * s[0]))
    oracle = RealProjection(low.space, U[:, :r])
    assert r == low.nm
    assert projection_distance(oracle, low.right_wedge) < 1e-9


def test_wedge_modular_data(low):
    md = modular_data(low.right_wedge)
    D = np.exp(2 * np.pi * low.kappas)
    tol = 1e-8 * md.condition
    assert np.abs(md.J - low.J_matrix).max() < tol
    assert np.abs(md.Delta - np.diag(np.concatenate([D, D]))).max() < tol * D.max()
    assert md.evals.min() == pytest.approx(math.exp(-2 * np.pi * low.kappas.max()), rel=1e-6)


def test_wedge_spaces(rm):
    assert rm.right_wedge.rank == rm.nm
    assert rm.duality_residual() <= 1e-6
    assert rm.boost_invariance_residual() <= 1e-8
    with pytest.raises(ValueError):
        rm.bgl_wedge_space("up")
    assert rm.bgl_wedge_space("right", (0.0, 0.0)) is rm.right_wedge
    # translating by a lightlike vector keeps the subspace rank
    assert rm.bgl_wedge_space("right", (0.5, 0.5)).rank == rm.nm


def test_wedge_states_lie_in_the_wedge(rm):
    Q = rm.right_wedge.basis
    for t0, k0 in ((0.0, 0.0), (1.0, 2.0)):
        x = rm.to_real(rm.wedge_state(t0, 1.0, k0))
        assert np.linalg.norm(x - Q @ (Q.T @ x)) <= 1e-10 * np.linalg.norm(x)


def test_lightlike_inclusion_and_negative_control(rm):
    assert rm.lightlike_inclusion() <= 1e-5
    # translating the wrong way leaves the wedge
    assert rm.lightlike_inclusion(s_values=(-0.5,)) > 1e-2


def test_report(rm):
    rep = rm.report()
    assert rep.passed()
    names = [r[0] for r in rep.rows()]
    assert names == ["duality", "boost_invariance", "lightlike_inclusion", "borchers", "negative_control"]


def test_double_cone_from_two_wedges():
    rm = RapidityModel(256, 12.0, 1.0, 3.0)
    D = rm.bgl_double_cone(0.0, 2.0)
    # finite mode space: two generic half-dimensional subspaces meet trivially
    assert D.rank == 0
    with pytest.raises(ValueError):
        rm.bgl_double_cone(1.0, 1.0)
