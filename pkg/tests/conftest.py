import functools

import numpy as np
import pytest

from qidlab import quantum as q
from qidlab.idcodes import IdCode
from qidlab.orthogonal import orthogonalize_code
from qidlab.rng import derive_rng, haar_vector, random_density
from qidlab.transmission import random_code

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KETP = np.array([1, 1], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)

# every IdCode built anywhere in the session, for the size-bound audit
CONSTRUCTED_ID_CODES = []
_original_post_init = IdCode.__post_init__


def _tracking_post_init(self):
    _original_post_init(self)
    CONSTRUCTED_ID_CODES.append(self)


IdCode.__post_init__ = _tracking_post_init

ACCEPTANCE_LINES = {}


def pytest_collection_modifyitems(session, config, items):
    # the acceptance audit runs last so it sees the codes built by the other modules
    items.sort(key=lambda item: item.module.__name__ == "test_acceptance")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])


# (block_n, messages) combinations admitting average error <= 0.1 for qubit channels
SHAPES = [(2, 4), (3, 4), (3, 8)]


def fixture_channel(seed):
    if seed % 2 == 0:
        return q.make_depolarizing_channel(2, 0.01)
    return q.make_amplitude_damping_channel(0.02)


@functools.lru_cache(maxsize=None)
def orthogonal_fixture(seed):
    """Seeded noisy qubit code with small average error and its orthogonalisation."""
    n, M = SHAPES[seed % len(SHAPES)]
    code = random_code(fixture_channel(seed), n, M, seed, kind="perturbed", spread=0.12, mix=0.02)
    ocode, report = orthogonalize_code(code)
    return code, ocode, report


@pytest.fixture
def rng():
    return derive_rng(12345, "tests")


def random_pair(dim, rng, pure=False):
    if pure:
        return q.DensityOperator.from_vector(haar_vector(dim, rng)), q.DensityOperator.from_vector(haar_vector(dim, rng))
    return q.DensityOperator(random_density(dim, rng)), q.DensityOperator(random_density(dim, rng))


def rotated_decoder_code(M, delta, seed=0):
    """Noiseless basis code whose projective decoder is a rotated basis.

    The rotation ``exp(i t H)`` (``H`` random Hermitian) is scaled by
    bisection so that the maximum decoding error equals ``delta``; this gives
    a pure orthonormal code over the identity channel with engineered,
    non-trivial errors.
    """
    from qidlab import linalg as la
    from qidlab.transmission import TransmissionCode

    rng = derive_rng(seed, "rotated_decoder", M)
    g = rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))
    w, v = np.linalg.eigh((g + g.conj().T) / 2)

    def unitary(t):
        return (v * np.exp(1j * t * w)) @ v.conj().T

    def worst(t):
        return float(np.max(1.0 - np.abs(np.diag(unitary(t))) ** 2))

    hi = 1e-3
    while worst(hi) < delta:
        hi *= 1.5
    lo = 0.0
    for _ in range(80):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if worst(mid) < delta else (lo, mid)
    u = unitary(hi)
    dec = q.SubPovm(tuple(la.projector(u[:, m]) for m in range(M)), complete=True)
    eye = np.eye(M)
    return TransmissionCode(q.make_identity_channel(M), tuple(np.diag(eye[m]) for m in range(M)), dec)


def disjoint_family(M, L):
    from qidlab.designs import family_from_subsets

    return family_from_subsets(M, [tuple(range(k, k + L)) for k in range(0, M - L + 1, L)], lam=0.0)


def basis_code(dim):
    from qidlab.transmission import random_code

    return random_code(q.make_identity_channel(dim), 1, dim, 0, kind="basis", decoder="projective")


@functools.lru_cache(maxsize=None)
def large_pipeline_fixture():
    """Six-qubit noisy code whose orthogonalised version has 32 messages."""
    code = random_code(q.make_depolarizing_channel(2, 0.01), 6, 64, 0, kind="perturbed", spread=0.1, mix=0.01)
    ocode, report = orthogonalize_code(code)
    return ocode, report
