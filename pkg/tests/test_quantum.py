import numpy as np
import pytest

from qidlab import linalg as la
from qidlab import quantum as q
from qidlab.errors import BadDistribution, DimMismatch, InvalidChannel, InvalidPovm, InvalidState, NotStochastic
from qidlab.rng import derive_rng, haar_unitary, random_density

from conftest import KET0, KET1, KETP


def all_channels(rng):
    return [
        q.make_identity_channel(3),
        q.make_trace_channel(3),
        q.make_extended_channel(2, 2),
        q.make_unitary_channel(haar_unitary(2, rng)),
        q.make_depolarizing_channel(3, 0.3),
        q.make_dephasing_channel(2, 0.2),
        q.make_amplitude_damping_channel(0.4),
        q.make_random_channel(2, 3, 3, rng),
    ]


def test_density_operator_validation():
    with pytest.raises(InvalidState):
        q.DensityOperator(np.diag([0.7, 0.7]))
    with pytest.raises(InvalidState):
        q.DensityOperator(np.diag([1.5, -0.5]))
    rho = q.DensityOperator(la.projector(KETP))
    assert rho.is_pure
    assert not q.DensityOperator.maximally_mixed(2).is_pure


def test_subpovm_validation():
    with pytest.raises(InvalidPovm):
        q.SubPovm((np.eye(2), np.eye(2)))
    with pytest.raises(InvalidPovm):
        q.SubPovm((la.projector(KET0),), complete=True)
    p = q.SubPovm((la.projector(KET0),))
    np.testing.assert_allclose(p.rest_effect(), la.projector(KET1))


def test_channel_requires_trace_preservation():
    with pytest.raises(InvalidChannel):
        q.KrausChannel(np.array([np.eye(2) * 0.5]))


def test_apply_examples(rng):
    rho = q.DensityOperator(random_density(3, rng))
    np.testing.assert_allclose(q.apply(q.make_identity_channel(3), rho).mat, rho.mat, atol=1e-14)
    out = q.apply(q.make_trace_channel(3), rho).mat
    assert out.shape == (1, 1) and out[0, 0] == pytest.approx(1)
    bell = la.projector(np.array([1, 0, 0, 1]) / np.sqrt(2))
    np.testing.assert_allclose(q.apply(q.make_extended_channel(2, 2), bell), np.eye(2) / 2, atol=1e-15)
    with pytest.raises(DimMismatch):
        q.apply(q.make_identity_channel(2), rho)


def test_extended_channel_examples(rng):
    ch = q.make_extended_channel(2, 1)
    for k in (KET0, KET1, KETP):
        np.testing.assert_allclose(q.apply(ch, la.projector(k)), la.projector(k), atol=1e-15)
    a = KETP
    c = np.array([0.6, 0.8j])
    out = q.apply(q.make_extended_channel(2, 2), la.projector(np.kron(a, c)))
    np.testing.assert_allclose(out, la.projector(a), atol=1e-14)


def test_block_apply_matches_explicit_tensor_power(rng):
    ch = q.make_random_channel(2, 2, 2, rng)
    rho = random_density(8, rng)
    explicit = sum(
        la.tensor(a, b, c) @ rho @ la.tensor(a, b, c).conj().T
        for a in ch.ops for b in ch.ops for c in ch.ops
    )
    np.testing.assert_allclose(ch.apply(rho, 3), explicit, atol=1e-12)


def test_outputs_are_states(rng):
    for ch in all_channels(rng):
        for _ in range(50):
            out = ch.apply(random_density(ch.in_dim, rng))
            assert abs(np.trace(out).real - 1) <= la.TOL_NORM
            assert np.linalg.eigvalsh(la.hermitize(out))[0] >= -la.TOL_PSD


def test_adjoint_duality(rng):
    for ch in all_channels(rng):
        dual = q.adjoint(ch)
        np.testing.assert_allclose(dual.apply(np.eye(ch.out_dim)), np.eye(ch.in_dim), atol=la.TOL_RECON)
        for _ in range(20):
            rho = random_density(ch.in_dim, rng)
            g = rng.standard_normal((ch.out_dim,) * 2) + 1j * rng.standard_normal((ch.out_dim,) * 2)
            d = g @ g.conj().T
            d = d / np.linalg.eigvalsh(d)[-1]
            lhs = np.trace(ch.apply(rho) @ d)
            rhs = np.trace(rho @ dual.apply(d))
            assert abs(lhs - rhs) <= la.TOL_FVG


def test_adjoint_block_duality(rng):
    ch = q.make_amplitude_damping_channel(0.3)
    rho = random_density(4, rng)
    d = random_density(4, rng)
    assert np.trace(ch.apply(rho, 2) @ d) == pytest.approx(np.trace(rho @ ch.adjoint().apply(d, 2)), abs=1e-12)


def test_adjoint_examples(rng):
    x = random_density(2, rng)
    np.testing.assert_allclose(q.adjoint(q.make_identity_channel(2)).apply(x), x, atol=1e-15)
    u = haar_unitary(2, rng)
    np.testing.assert_allclose(q.adjoint(q.make_unitary_channel(u)).apply(x), u.conj().T @ x @ u, atol=1e-14)


def test_adjoint_maps_povm_to_povm(rng):
    ch = q.make_random_channel(2, 3, 2, rng)
    w, v = la.eigh(random_density(3, rng))
    povm = q.SubPovm(tuple(la.projector(v[:, i]) for i in range(3)), complete=True)
    dual = ch.adjoint()
    lifted = q.SubPovm(tuple(dual.apply(e) for e in povm.effects), complete=True)
    assert len(lifted) == 3


def test_born_examples(rng):
    rho = random_density(2, rng)
    assert q.born(rho, np.eye(2)) == pytest.approx(1)
    assert q.born(la.projector(KET0), la.projector(KET1)) == pytest.approx(0)
    assert q.born(la.projector(KETP), la.projector(KET0)) == pytest.approx(0.5)
    assert q.clamp01(-1e-12) == 0.0 and q.clamp01(1 + 1e-12) == 1.0


def test_mutual_information_examples():
    assert q.mutual_information([0.5, 0.5], np.eye(2)) == pytest.approx(1.0)
    assert q.mutual_information([0.3, 0.7], np.array([[0.4, 0.6], [0.4, 0.6]])) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(NotStochastic):
        q.mutual_information([0.5, 0.5], np.array([[0.5, 0.6], [0.5, 0.5]]))
    with pytest.raises(BadDistribution):
        q.mutual_information([0.5, 0.6], np.eye(2))


def test_classical_channel_as_cq_matches_mutual_information():
    w = np.array([[0.9, 0.1], [0.2, 0.8]])
    p = np.array([0.4, 0.6])
    ch = q.classical_channel_as_cq(w)
    ens = [(p[x], np.diag(np.eye(2)[x])) for x in range(2)]
    assert q.holevo_information(ens, ch) == pytest.approx(q.mutual_information(p, w), abs=1e-10)


def test_holevo_example():
    ens = [(0.5, la.projector(KET0)), (0.5, la.projector(KETP))]
    # oracle: binary entropy of the average state's eigenvalues 1/2 +- sqrt(2)/4
    ev = np.array([0.5 + np.sqrt(2) / 4, 0.5 - np.sqrt(2) / 4])
    oracle = -np.sum(ev * np.log2(ev))
    assert oracle == pytest.approx(0.600876, abs=1e-6)
    assert q.holevo_information(ens, q.make_identity_channel(2)) == pytest.approx(oracle, abs=1e-12)
    assert q.holevo_information(ens) == pytest.approx(oracle, abs=1e-12)


def test_holevo_identical_states_is_zero(rng):
    rho = random_density(3, rng)
    ens = [(0.2, rho), (0.5, rho), (0.3, rho)]
    assert abs(q.holevo_information(ens, q.make_depolarizing_channel(3, 0.1))) <= la.TOL_FVG


def test_tensor_channel(rng):
    a = q.make_amplitude_damping_channel(0.2)
    b = q.make_dephasing_channel(2, 0.3)
    ab = a.tensor(b)
    r1, r2 = random_density(2, rng), random_density(2, rng)
    np.testing.assert_allclose(ab.apply(np.kron(r1, r2)), np.kron(a.apply(r1), b.apply(r2)), atol=1e-14)


def test_depolarizing_full_noise(rng):
    ch = q.make_depolarizing_channel(3, 1.0)
    np.testing.assert_allclose(ch.apply(random_density(3, derive_rng(5))), np.eye(3) / 3, atol=1e-14)
