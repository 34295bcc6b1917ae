import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qidlab import linalg as la
from qidlab.errors import DimGuardExceeded, DimMismatch, NotHermitian, NotPsd
from qidlab.rng import derive_rng, haar_vector, random_density

from conftest import KET0, KET1, KETP, PAULI_X


def test_eigh_identity():
    w, v = la.eigh(np.eye(2))
    np.testing.assert_allclose(w, [1, 1])
    np.testing.assert_allclose(v.conj().T @ v, np.eye(2), atol=la.TOL_ORTH)


def test_eigh_diagonal_descending():
    w, v = la.eigh(np.diag([1.0, 3.0]))
    np.testing.assert_allclose(w, [3, 1])
    np.testing.assert_allclose(np.abs(v), [[0, 1], [1, 0]])


def test_eigh_pauli_x():
    w, v = la.eigh(PAULI_X)
    np.testing.assert_allclose(w, [1, -1], atol=1e-14)
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    assert abs(abs(np.vdot(plus, v[:, 0])) - 1) < 1e-12
    assert abs(abs(np.vdot(minus, v[:, 1])) - 1) < 1e-12


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        la.eigh(np.array([[0, 1], [0, 0]]))


def test_eigh_reconstructs_random(rng):
    for dim in (2, 5, 9):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        a = g + g.conj().T
        w, v = la.eigh(a)
        assert np.all(np.diff(w) <= 0)
        assert np.linalg.norm((v * w) @ v.conj().T - a, 2) < la.TOL_RECON
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) < la.TOL_ORTH


def test_inv_sqrt_identity():
    np.testing.assert_allclose(la.inv_sqrt_psd(np.eye(3)), np.eye(3), atol=1e-14)


def test_inv_sqrt_pseudo_inverse_convention():
    np.testing.assert_allclose(la.inv_sqrt_psd(np.diag([4.0, 0.0])), np.diag([0.5, 0.0]), atol=1e-14)


def test_inv_sqrt_qubit_against_eigensolve():
    a = np.eye(2) / 2 + PAULI_X / 4
    # eigenvalues 3/4 on |+>, 1/4 on |->
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    expected = np.outer(plus, plus) / np.sqrt(0.75) + np.outer(minus, minus) / np.sqrt(0.25)
    out = la.inv_sqrt_psd(a)
    np.testing.assert_allclose(out, expected, atol=1e-12)
    np.testing.assert_allclose(out @ a @ out, np.eye(2), atol=1e-12)


def test_func_on_support_rejects_negative():
    with pytest.raises(NotPsd):
        la.func_on_support(np.diag([1.0, -0.5]), np.sqrt)


def test_func_on_support_identity_function_and_commutation(rng):
    rho = random_density(4, rng, rank=2)
    out = la.func_on_support(rho, lambda x: x)
    np.testing.assert_allclose(out, rho, atol=la.TOL_RECON)
    s = la.sqrt_psd(rho)
    assert np.max(np.abs(s @ rho - rho @ s)) < la.TOL_RECON
    np.testing.assert_allclose(s @ s, rho, atol=la.TOL_RECON)


def test_trace_distance_examples():
    r0, r1, rp = (la.projector(k) for k in (KET0, KET1, KETP))
    assert la.trace_distance(r0, r0) == pytest.approx(0, abs=1e-15)
    assert la.trace_distance(r0, r1) == pytest.approx(1)
    assert la.trace_distance(r0, rp) == pytest.approx(0.70710678, abs=1e-8)
    # pure-state closed form
    assert la.trace_distance(r0, rp) == pytest.approx(np.sqrt(1 - abs(np.vdot(KET0, KETP)) ** 2), abs=1e-12)


def test_trace_distance_dim_mismatch():
    with pytest.raises(DimMismatch):
        la.trace_distance(np.eye(2) / 2, np.eye(3) / 3)


def test_fidelity_examples(rng):
    r0, rp = la.projector(KET0), la.projector(KETP)
    assert la.fidelity(r0, r0) == pytest.approx(1)
    assert la.fidelity(r0, rp) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    rho, sigma = random_density(2, rng), random_density(2, rng)
    # oracle: Tr sqrt(sqrt(rho) sigma sqrt(rho)) through two independent eigensolves
    w, v = np.linalg.eigh(rho)
    sr = (v * np.sqrt(w)) @ v.conj().T
    inner = np.linalg.eigvalsh(sr @ sigma @ sr)
    oracle = np.sum(np.sqrt(np.clip(inner, 0, None)))
    assert la.fidelity(rho, sigma) == pytest.approx(oracle, abs=1e-10)
    assert la.fidelity(rho, sigma) == pytest.approx(la.fidelity(sigma, rho), abs=1e-9)


def test_tensor_and_partial_trace():
    np.testing.assert_allclose(la.tensor(np.eye(2), np.eye(2)), np.eye(4))
    r00 = la.projector(np.kron(KET0, KET0))
    np.testing.assert_allclose(la.partial_trace(r00, [2, 2], 1), la.projector(KET0))
    bell = la.projector(np.array([1, 0, 0, 1]) / np.sqrt(2))
    for f in (0, 1):
        np.testing.assert_allclose(la.partial_trace(bell, [2, 2], f), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_factorizes(rng):
    a = random_density(3, rng)
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    ab = la.tensor(a, b)
    assert np.trace(ab) == pytest.approx(np.trace(a) * np.trace(b))
    np.testing.assert_allclose(la.partial_trace(ab, [3, 2], 1), a * np.trace(b), atol=la.TOL_RECON)
    np.testing.assert_allclose(la.partial_trace(ab, [3, 2], 0), b * np.trace(a), atol=la.TOL_RECON)


def test_tensor_power_guard():
    assert la.tensor_power(np.eye(2), 3).shape == (8, 8)
    with pytest.raises(DimGuardExceeded):
        la.tensor_power(np.eye(2), 13)
    with pytest.raises(DimGuardExceeded):
        la.tensor_power(np.eye(2), 3, dim_guard=4)


def test_permute_subsystems_roundtrip(rng):
    v = haar_vector(12, rng)
    w = la.permute_subsystems(v, [2, 3, 2], [2, 0, 1])
    back = la.permute_subsystems(w, [2, 2, 3], [1, 2, 0])
    np.testing.assert_allclose(back, v)
    a = random_density(6, rng)
    b = la.permute_subsystems(a, [2, 3], [1, 0])
    np.testing.assert_allclose(la.partial_trace(b, [3, 2], 0), la.partial_trace(a, [2, 3], 1), atol=1e-14)


def test_entropies():
    assert la.von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    assert la.von_neumann_entropy(la.projector(KETP)) == pytest.approx(0.0, abs=1e-12)
    assert la.shannon_entropy([0.5, 0.5, 0.0]) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 5), rank=st.integers(1, 5))
def test_fuchs_van_de_graaf_property(seed, dim, rank):
    rng = derive_rng(seed)
    rho = random_density(dim, rng, rank=min(rank, dim))
    sigma = random_density(dim, rng)
    f = la.fidelity(rho, sigma)
    t = la.trace_distance(rho, sigma)
    assert 1 - f <= t + la.TOL_FVG
    assert t <= np.sqrt(max(0.0, 1 - f**2)) + la.TOL_FVG


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 6))
def test_pure_state_closed_forms(seed, dim):
    rng = derive_rng(seed)
    a, b = haar_vector(dim, rng), haar_vector(dim, rng)
    ov = abs(np.vdot(a, b))
    assert la.fidelity(la.projector(a), la.projector(b)) == pytest.approx(ov, abs=la.TOL_FVG)
    assert la.trace_distance(la.projector(a), la.projector(b)) == pytest.approx(np.sqrt(1 - ov**2), abs=la.TOL_FVG)
