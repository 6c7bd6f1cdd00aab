import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qseal import matrixcore as mc
from qseal.errors import DimensionMismatch, InvalidDensityMatrix, NoConvergence, NotHermitian

from conftest import random_density_matrix, random_hermitian


def kron_oracle(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), complex)
    for ia in range(a.shape[0]):
        for ja in range(a.shape[1]):
            for ib in range(b.shape[0]):
                for jb in range(b.shape[1]):
                    out[ia * b.shape[0] + ib, ja * b.shape[1] + jb] = a[ia, ja] * b[ib, jb]
    return out


def test_tensor_identity():
    np.testing.assert_array_equal(mc.tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_projector_extension():
    got = mc.tensor_product(np.diag([1, 0]), np.eye(2))
    np.testing.assert_array_equal(got, np.diag([1, 1, 0, 0]))


def test_tensor_hand_expansion():
    got = mc.tensor_product([[0, 1], [1, 0]], [[2]])
    np.testing.assert_array_equal(got, [[0, 2], [2, 0]])


def test_tensor_matches_loop_oracle(rng):
    a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    b = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    np.testing.assert_allclose(mc.tensor_product(a, b), kron_oracle(a, b), atol=1e-15)


def test_tensor_factors_commute(rng):
    a = random_hermitian(rng, 2)
    b = random_hermitian(rng, 3)
    lhs = mc.tensor_product(a, np.eye(3)) @ mc.tensor_product(np.eye(2), b)
    np.testing.assert_allclose(lhs, mc.tensor_product(a, b), atol=1e-12)


def test_eig_diagonal():
    w, _ = mc.hermitian_eigendecomposition(np.diag([0.3, -0.3]))
    np.testing.assert_allclose(w, [-0.3, 0.3], atol=1e-15)


def test_eig_pauli_x():
    w, v = mc.hermitian_eigendecomposition([[0, 1], [1, 0]])
    np.testing.assert_allclose(w, [-1, 1], atol=1e-14)
    s = 1 / np.sqrt(2)
    # eigenvectors up to a global phase
    assert abs(abs(np.vdot(v[:, 0], [s, -s])) - 1) < 1e-12
    assert abs(abs(np.vdot(v[:, 1], [s, s])) - 1) < 1e-12


@pytest.mark.parametrize("dim", [1, 2, 3, 8, 16])
def test_eig_random_reconstruction(rng, dim):
    h = random_hermitian(rng, dim)
    w, v = mc.hermitian_eigendecomposition(h)
    scale = max(1.0, np.abs(h).max())
    assert np.abs(h - v @ np.diag(w) @ v.conj().T).max() <= 1e-10 * scale
    assert np.abs(v.conj().T @ v - np.eye(dim)).max() <= 1e-10
    assert np.all(np.diff(w) >= 0)
    # independent oracle
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-10 * scale)


def test_eig_degenerate():
    h = np.diag([0.5, 0.0, 0.0, -0.5]).astype(complex)
    u = np.linalg.qr(np.arange(16).reshape(4, 4) + 1j * np.eye(4))[0]
    w, _ = mc.hermitian_eigendecomposition(u @ h @ u.conj().T)
    np.testing.assert_allclose(w, [-0.5, 0, 0, 0.5], atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        mc.hermitian_eigendecomposition([[0, 1], [0, 0]])


def test_eig_sweep_budget(rng):
    with pytest.raises(NoConvergence):
        mc.hermitian_eigendecomposition(random_hermitian(rng, 6), max_sweeps=1)


def test_partial_trace_product_state():
    psi = np.kron([1, 0], [1, 0])
    np.testing.assert_allclose(mc.partial_trace_over_a(psi, 2, 2), np.diag([1, 0]))


def test_partial_trace_bell():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(mc.partial_trace_over_a(psi, 2, 2), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mc.partial_trace_over_a(np.ones(5), 2, 3)


def partial_trace_oracle(psi, dim_b, dim_a):
    rho = np.outer(psi, psi.conj())
    out = np.zeros((dim_b, dim_b), complex)
    for b in range(dim_b):
        for bp in range(dim_b):
            out[b, bp] = sum(rho[b * dim_a + a, bp * dim_a + a] for a in range(dim_a))
    return out


@settings(max_examples=40, deadline=None)
@given(dim_b=st.integers(1, 4), dim_a=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_partial_trace_properties(dim_b, dim_a, seed):
    r = np.random.default_rng(seed)
    psi = r.standard_normal(dim_b * dim_a) + 1j * r.standard_normal(dim_b * dim_a)
    rho = mc.partial_trace_over_a(psi, dim_b, dim_a)
    np.testing.assert_allclose(rho, partial_trace_oracle(psi, dim_b, dim_a), atol=1e-12)
    assert abs(np.trace(rho) - np.vdot(psi, psi)) <= 1e-10 * max(1.0, np.vdot(psi, psi).real)
    assert mc.is_hermitian(rho)


def test_trace_distance_examples():
    rho = np.diag([0.7, 0.3])
    assert mc.trace_distance(rho, rho) == 0.0
    assert mc.trace_distance(np.diag([1, 0]), np.diag([0, 1])) == pytest.approx(1.0, abs=1e-15)
    assert mc.trace_distance(np.diag([0.8, 0.2]), np.diag([0.2, 0.8])) == pytest.approx(0.6, abs=1e-15)


def test_trace_distance_pure_states(rng):
    # oracle for pure states: sqrt(1 - |<a|b>|^2)
    for _ in range(20):
        a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        want = np.sqrt(1 - abs(np.vdot(a, b)) ** 2)
        assert mc.trace_distance(mc.projector(a), mc.projector(b)) == pytest.approx(want, abs=1e-10)


def test_trace_distance_validation():
    with pytest.raises(DimensionMismatch):
        mc.trace_distance(np.eye(2) / 2, np.eye(3) / 3)
    with pytest.raises(InvalidDensityMatrix):
        mc.trace_distance(np.eye(2), np.eye(2) / 2)
    with pytest.raises(InvalidDensityMatrix):
        mc.trace_distance(np.diag([1.5, -0.5]), np.eye(2) / 2)


@settings(max_examples=30, deadline=None)
@given(dim=st.integers(2, 4), seed=st.integers(0, 2**32 - 1))
def test_trace_distance_is_a_metric(dim, seed):
    r = np.random.default_rng(seed)
    a, b, c = (random_density_matrix(r, dim) for _ in range(3))
    dab = mc.trace_distance(a, b)
    assert dab >= 0
    assert dab == pytest.approx(mc.trace_distance(b, a), abs=1e-9)
    assert dab <= mc.trace_distance(a, c) + mc.trace_distance(c, b) + 1e-9
    assert dab == pytest.approx(0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum(), abs=1e-9)
