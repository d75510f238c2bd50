import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, strategies as st

from modloc.realspace import (
    ComplexSpace,
    RealProjection,
    alternating_meet_iterate,
    alternating_meet_trace,
    classify_operator,
    complex_core_hull,
    complex_to_real_operator,
    conjugation,
    containment_residual,
    is_complex_linear,
    is_separated,
    join,
    leq,
    meet,
    principal_sines,
    projection_distance,
    projector_from_span,
    random_complex_projection,
    random_projection,
    random_standard,
    random_unitary,
    real_orthocomplement,
    separation_residual,
    symplectic_complement,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 6)


def null_abs(A, tol=1e-9):
    _, s, Vt = np.linalg.svd(A)
    s = np.concatenate([s, np.zeros(Vt.shape[0] - s.size)])
    return Vt[s <= tol].T


def proj_oracle(V):
    return V @ np.linalg.solve(V.T @ V, V.T)


def test_sigma_is_imaginary_part(rng):
    sp = ComplexSpace(3)
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    x, y = sp.to_real(z), sp.to_real(w)
    assert sp.sigma(x, y) == pytest.approx(np.imag(np.vdot(z, w)), abs=1e-12)
    assert sp.g(x, y) == pytest.approx(np.real(np.vdot(z, w)), abs=1e-12)
    assert np.allclose(sp.to_complex(sp.times_i(x)), 1j * z)


def test_i_map_squares_to_minus_one():
    sp = ComplexSpace(4)
    assert np.array_equal(sp.i_map @ sp.i_map, -np.eye(8))


def test_projection_matrix_matches_oracle(rng):
    sp = ComplexSpace(3)
    V = rng.standard_normal((6, 4))
    E = projector_from_span(sp, V)
    assert E.rank == 4
    assert np.allclose(E.matrix, proj_oracle(V), atol=1e-12)


def test_projector_errors():
    sp = ComplexSpace(2)
    with pytest.raises(ValueError, match="empty span"):
        projector_from_span(sp, np.zeros((4, 2)))
    with pytest.raises(ValueError, match="dimension mismatch"):
        projector_from_span(sp, np.ones((3, 1)))


def test_dependent_vectors_collapse(rng):
    sp = ComplexSpace(2)
    v = rng.standard_normal(4)
    E = projector_from_span(sp, np.column_stack([v, 2 * v, -v]))
    assert E.rank == 1


def test_from_matrix_roundtrip(rng):
    sp = ComplexSpace(3)
    E = random_projection(sp, rng, rank=3)
    F = RealProjection.from_matrix(sp, E.matrix)
    assert projection_distance(E, F) < 1e-12
    with pytest.raises(ValueError):
        RealProjection.from_matrix(sp, np.diag([1, 0.5, 0, 0, 0, 0]))


@given(seeds, dims)
def test_meet_matches_nullspace_oracle(seed, n):
    rng = np.random.default_rng(seed)
    sp = ComplexSpace(n)
    d = 2 * n
    g = int(rng.integers(0, d + 1))
    G = rng.standard_normal((d, g))
    A = np.hstack([G, rng.standard_normal((d, int(rng.integers(0, d - g + 1))))])
    B = np.hstack([G, rng.standard_normal((d, int(rng.integers(0, d - g + 1))))])
    E = RealProjection(sp, np.linalg.qr(A)[0]) if A.shape[1] else RealProjection.zero(sp)
    F = RealProjection(sp, np.linalg.qr(B)[0]) if B.shape[1] else RealProjection.zero(sp)
    I = np.eye(d)
    N = null_abs(np.vstack([I - E.matrix, I - F.matrix]))
    M = meet(E, F)
    assert M.rank == N.shape[1]
    if M.rank:
        assert np.allclose(M.matrix, N @ N.T, atol=1e-8)
    J = join(E, F)
    AB = np.hstack([A, B])
    assert J.rank == (np.linalg.matrix_rank(AB) if AB.shape[1] else 0)


@given(seeds, dims)
def test_symplectic_complement_oracle(seed, n):
    rng = np.random.default_rng(seed)
    sp = ComplexSpace(n)
    E = random_projection(sp, rng)
    Ep = symplectic_complement(E)
    if E.rank:
        N = sla.null_space(E.basis.T @ sp.omega)
    else:
        N = np.eye(2 * n)
    assert Ep.rank == N.shape[1]
    assert np.allclose(Ep.matrix, N @ N.T, atol=1e-10)
    # E' = 1 + iEi
    assert np.allclose(Ep.matrix, np.eye(2 * n) + sp.i_map @ E.matrix @ sp.i_map, atol=1e-10)


@given(seeds, dims)
def test_involution_and_de_morgan(seed, n):
    rng = np.random.default_rng(seed)
    sp = ComplexSpace(n)
    E, F = random_projection(sp, rng), random_projection(sp, rng)
    c = symplectic_complement
    assert projection_distance(c(c(E)), E) < 1e-9
    assert projection_distance(c(join(E, F)), meet(c(E), c(F))) < 1e-8
    assert projection_distance(c(meet(E, F)), join(c(E), c(F))) < 1e-8


@given(seeds, dims)
def test_order_reversal(seed, n):
    rng = np.random.default_rng(seed)
    sp = ComplexSpace(n)
    F = random_projection(sp, rng)
    if F.rank == 0:
        return
    k = int(rng.integers(1, F.rank + 1))
    E = RealProjection(sp, np.linalg.qr(F.basis @ rng.standard_normal((F.rank, k)))[0])
    assert leq(E, F)
    assert containment_residual(symplectic_complement(F), symplectic_complement(E)) < 1e-9


@given(seeds, dims)
def test_complex_subspaces_form_a_sublattice(seed, n):
    rng = np.random.default_rng(seed)
    sp = ComplexSpace(n)
    C, D = random_complex_projection(sp, rng), random_complex_projection(sp, rng)
    assert is_complex_linear(C)
    # on complex subspaces the symplectic complement is the orthocomplement
    assert projection_distance(symplectic_complement(C), real_orthocomplement(C)) < 1e-10
    assert is_complex_linear(meet(C, D), 1e-8)
    assert is_complex_linear(join(C, D), 1e-8)


def test_separation_examples(rng):
    sp = ComplexSpace(3)
    E = random_projection(sp, rng, rank=2)
    assert is_separated(E, symplectic_complement(E))
    assert separation_residual(E, symplectic_complement(E)) < 1e-12
    C = random_complex_projection(sp, rng, crank=1)
    assert not is_separated(C, C)


def test_core_hull_flags(rng):
    n = 3
    sp = ComplexSpace(n)
    Rn = RealProjection(sp, np.vstack([np.eye(n), np.zeros((n, n))]))
    f = complex_core_hull(Rn)
    assert f.standard and f.core.rank == 0 and f.hull.rank == 2 * n
    C = random_complex_projection(sp, rng, crank=2)
    f = complex_core_hull(C)
    assert f.core.rank == 4 and f.hull.rank == 4
    assert not f.cyclic and not f.separating


@given(seeds, dims)
def test_hull_of_complement_is_complement_of_core(seed, n):
    rng = np.random.default_rng(seed)
    sp = ComplexSpace(n)
    H = random_projection(sp, rng)
    hull_p = complex_core_hull(symplectic_complement(H)).hull
    core = complex_core_hull(H).core
    assert projection_distance(hull_p, real_orthocomplement(core)) < 1e-8


def test_random_standard_is_standard(rng):
    for n in range(1, 6):
        assert complex_core_hull(random_standard(ComplexSpace(n), rng)).standard


def test_alternating_trace_matches_products(rng):
    sp = ComplexSpace(3)
    E, F = random_projection(sp, rng, rank=3), random_projection(sp, rng, rank=4)
    tr = alternating_meet_trace(E, F, 5)
    for n in range(1, 6):
        assert tr[n - 1] == pytest.approx(np.linalg.norm(alternating_meet_iterate(E, F, n), 2), rel=1e-10)
    assert np.all(np.diff(tr) <= 0)


def test_principal_sines_small_angles():
    sp = ComplexSpace(1)
    eps = 1e-9
    E = RealProjection(sp, np.array([[1.0], [0.0]]))
    v = np.array([np.cos(eps), np.sin(eps)])
    F = RealProjection(sp, v[:, None])
    assert principal_sines(E, F)[0] == pytest.approx(np.sin(eps), rel=1e-6)


def test_operator_classification(rng):
    sp = ComplexSpace(3)
    U = complex_to_real_operator(random_unitary(3, rng))
    C = conjugation(sp)
    assert classify_operator(sp, U) == "linear"
    assert classify_operator(sp, C @ U) == "antilinear"
    assert classify_operator(sp, U + C) == "real"
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert np.allclose(sp.to_complex(C @ sp.to_real(z)), np.conj(z))
