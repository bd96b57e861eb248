import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkgdcm import (
    FLAT,
    INVERTIBLE,
    SINGULAR,
    DegenerateGroundStateError,
    HkHamiltonian,
    SparseHermitian,
    assemble,
    certify_flat,
    gdcm,
    ground_state,
    null_space,
    response_matrix,
    verify_null_direction,
)
from hkgdcm.gdcm import gdcm_from_state
from hkgdcm.models import GraphModel, frustration_free_dimer, ising_dimer, kagome_model, nlevel_model


def random_operators(rng, dim, n):
    ops = []
    for _ in range(n):
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        ops.append(SparseHermitian.from_matrix(a + a.conj().T))
    return HkHamiltonian(SparseHermitian.zeros(dim), tuple(ops))


@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_psd_and_quadratic_form_identity(seed, dim, n):
    rng = np.random.default_rng(seed)
    h = random_operators(rng, dim, n)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    res = gdcm_from_state(h, psi)
    assert np.array_equal(res.m, res.m.T)
    assert res.eigenvalues[0] >= -1e-10
    dense = [op.to_dense() for op in h.ops]
    for _ in range(50):
        dg = rng.normal(size=n)
        a = sum(c * o for c, o in zip(dg, dense))
        mean = np.vdot(psi, a @ psi).real
        var = np.vdot(a @ psi, a @ psi).real - mean**2
        scale = max(1.0, abs(var))
        assert dg @ res.m @ dg == pytest.approx(var, abs=1e-10 * scale)


def test_ising_dimer_gdcm_at_one_one():
    res = gdcm(ising_dimer(), [1.0, 1.0])
    np.testing.assert_allclose(res.m, np.full((2, 2), 0.2), atol=1e-14)
    assert abs(np.linalg.det(res.m)) < 1e-15
    assert res.verdict == SINGULAR
    (v,) = null_space(res)
    assert abs(v @ np.array([1, -1]) / np.sqrt(2)) == pytest.approx(1.0, abs=1e-12)


def test_degenerate_ground_state_refused():
    with pytest.raises(DegenerateGroundStateError):
        gdcm(ising_dimer(), [0.0, 0.0])


def test_frustration_free_is_flat():
    h = frustration_free_dimer()
    res = certify_flat(gdcm(h, [0.3, 0.7]))
    assert res.verdict == FLAT
    assert np.max(np.abs(res.m)) == 0.0
    assert len(null_space(res)) == 2


def test_two_level_model():
    h = nlevel_model(GraphModel(2, ((0, 1),), -1))
    res = gdcm(h, [0.0, 0.0])
    np.testing.assert_allclose(res.m, [[0.25, -0.25], [-0.25, 0.25]], atol=1e-15)
    # the ones direction is deflated; the remaining eigenvalue is 1/2
    assert res.lambda_min_nontrivial == pytest.approx(0.5, abs=1e-15)
    assert res.verdict == INVERTIBLE
    assert null_space(res) == []


def test_without_deflation_the_trivial_zero_shows():
    h = nlevel_model(GraphModel(2, ((0, 1),), -1))
    res = gdcm(h, [0.0, 0.0], trivial_directions=())
    assert res.lambda_min_nontrivial == pytest.approx(0.0, abs=1e-15)
    assert res.verdict == SINGULAR


def test_null_directions_certified_ising():
    h = ising_dimer()
    g = np.array([1.0, 1.0])
    gs = ground_state(assemble(h, g))
    (dg,) = null_space(gdcm(h, g, gs))
    assert verify_null_direction(h, g, gs, dg, 0.1)
    assert not verify_null_direction(h, g, gs, np.array([1.0, 1.0]) / np.sqrt(2), 0.1)


def test_random_direction_at_invertible_point_fails():
    h = kagome_model(2, 2, -1)
    rng = np.random.default_rng(4)
    g = rng.uniform(-1, 1, h.n)
    gs = ground_state(assemble(h, g))
    assert gdcm(h, g, gs).verdict == INVERTIBLE
    dg = rng.normal(size=h.n)
    dg /= np.linalg.norm(dg)
    assert not verify_null_direction(h, g, gs, dg, 0.1)


def test_verify_requires_unit_direction():
    h = ising_dimer()
    gs = ground_state(assemble(h, [1, 1]))
    with pytest.raises(ValueError):
        verify_null_direction(h, [1, 1], gs, [1.0, -1.0], 0.1)


def test_response_identity_operator_is_zero():
    h = HkHamiltonian(SparseHermitian.from_matrix([[0, 1], [1, 0]]), (SparseHermitian.identity(2),))
    chi = response_matrix(h, [0.3])
    assert chi.chi.shape == (1, 1)
    assert abs(chi.chi[0, 0]) < 1e-9
    assert not chi.near_degenerate


def test_response_ising_null_direction():
    chi = response_matrix(ising_dimer(), [1.0, 1.0])
    v = chi.null_direction()
    assert abs(v @ np.array([1, -1]) / np.sqrt(2)) == pytest.approx(1.0, abs=1e-8)


def test_response_two_level_perturbation_theory():
    # H = [[g1, -1], [-1, g2]]: n_1 = (1 - d / sqrt(d^2 + 4)) / 2 with d = g1 - g2,
    # so d n_1 / d g1 = -1/4 at g = 0.
    h = nlevel_model(GraphModel(2, ((0, 1),), -1))
    chi = response_matrix(h, [0.0, 0.0])
    np.testing.assert_allclose(chi.chi, [[-0.25, 0.25], [0.25, -0.25]], atol=1e-9)
    np.testing.assert_allclose(chi.chi, chi.chi.T, atol=1e-10)
    assert np.all(np.linalg.eigvalsh(chi.chi) <= 1e-10)
    np.testing.assert_allclose(chi.chi @ np.ones(2), 0, atol=1e-9)


def test_response_flags_degeneracy():
    with pytest.raises(DegenerateGroundStateError):
        response_matrix(ising_dimer(), [0.0, 0.0])
