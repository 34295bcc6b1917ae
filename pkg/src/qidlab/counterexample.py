"""An adversarial decoder that defeats fixed-phase superpositions.

With orthonormal ``|phi_1>, ..., |phi_M>`` and the uniform superposition
``|psi> = K^{-1/2} sum_{m<=K} |phi_m>``, the POVM

* ``F_m = |nu_m><nu_m|``, ``|nu_m> = |phi_m> - K^{-1/2} |psi>`` for ``m <= K``,
* ``F_m = |phi_m><phi_m|`` for ``K < m < M``,
* ``F_M = |phi_M><phi_M| + |psi><psi|``

decodes every basis state with success at least ``(1 - 1/K)^2``, yet the
coarse-grained test ``D = sum_{m<=K} F_m`` never fires on ``psi``.
Random phases on the superposition restore detection probability
``1 - |<psi|psi'>|^2``.

Indices in code are 0-based: messages ``0..K-1`` form the subset.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import linalg as la
from .errors import BadParams
from .quantum import SubPovm, born
from .rng import derive_rng


@dataclass(frozen=True, eq=False)
class CounterexampleInstance:
    K: int
    M: int
    basis: np.ndarray
    povm: SubPovm
    psi: np.ndarray
    D: np.ndarray

    @property
    def nus(self):
        return self.basis[: self.K] - self.psi / math.sqrt(self.K)


def build_counterexample(K, M):
    if K < 2 or M < K + 1:
        raise BadParams(f"need K >= 2 and M >= K + 1, got K={K}, M={M}")
    la.check_dim(M)
    basis = np.eye(M, dtype=complex)
    psi = basis[:K].sum(axis=0) / math.sqrt(K)
    effects = []
    for m in range(M):
        if m < K:
            effects.append(la.projector(basis[m] - psi / math.sqrt(K)))
        elif m < M - 1:
            effects.append(la.projector(basis[m]))
        else:
            effects.append(la.projector(basis[m]) + la.projector(psi))
    povm = SubPovm(tuple(effects), complete=True)
    D = np.sum(povm.effects[:K], axis=0)
    return CounterexampleInstance(K, M, basis, povm, psi, D)


def decoding_success(inst):
    """``Tr phi_m F_m`` for every message."""
    return np.array([born(la.projector(inst.basis[m]), inst.povm.effects[m]) for m in range(inst.M)])


def fixed_phase_failure(inst):
    """Detection probability ``Tr psi D`` of the zero-phase superposition (equals 0)."""
    return born(la.projector(inst.psi), inst.D)


def expanded_test(inst):
    """``sum_{m<=K} |phi_m><phi_m| - |psi><psi|``: the closed form of ``D``."""
    return sum(la.projector(inst.basis[m]) for m in range(inst.K)) - la.projector(inst.psi)


def phased_superposition(inst, phases):
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (inst.K,):
        raise BadParams(f"expected {inst.K} phases, got shape {phases.shape}")
    return (np.exp(1j * phases) @ inst.basis[: inst.K]) / math.sqrt(inst.K)


def random_phase_detection(inst, phases):
    """Return ``(Tr psi' D, 1 - |<psi|psi'>|^2)`` for the phased superposition."""
    psi_p = phased_superposition(inst, phases)
    direct = born(la.projector(psi_p), inst.D)
    closed = 1.0 - abs(np.vdot(inst.psi, psi_p)) ** 2
    return direct, closed


def sample_detection(inst, samples, seed=0):
    """Detection probabilities for ``samples`` uniformly random phase vectors."""
    rng = derive_rng(seed, "counterexample", inst.K, inst.M)
    alphas = rng.uniform(0.0, 2 * np.pi, size=(samples, inst.K))
    vals = np.array([random_phase_detection(inst, a) for a in alphas])
    return alphas, vals[:, 0], vals[:, 1]


def summary(inst, phases=None, samples=None, seed=0):
    """JSON-ready record of every quantity of the construction."""
    succ = decoding_success(inst)
    out = {
        "K": inst.K,
        "M": inst.M,
        "success": succ.tolist(),
        "expected_success_subset": (1 - 1 / inst.K) ** 2,
        "povm_completeness_error": float(np.max(np.abs(inst.povm.total - np.eye(inst.M)))),
        "nu_psi_overlaps": [float(abs(np.vdot(nu, inst.psi))) for nu in inst.nus],
        "fixed_phase_detection": fixed_phase_failure(inst),
        "expansion_error": float(np.max(np.abs(inst.D - expanded_test(inst)))),
    }
    if phases is not None:
        direct, closed = random_phase_detection(inst, phases)
        out["phases"] = [float(p) for p in phases]
        out["detection"] = direct
        out["detection_closed_form"] = closed
    if samples:
        _, direct, closed = sample_detection(inst, samples, seed)
        out["samples"] = int(samples)
        out["seed"] = int(seed)
        out["mean_detection"] = float(np.mean(direct))
        out["expected_mean_detection"] = 1 - 1 / inst.K
        out["max_closed_form_gap"] = float(np.max(np.abs(direct - closed)))
    return out
