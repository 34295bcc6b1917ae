"""Identification codes: construction, verification and size bounds.

Two constructions are provided on top of a transmission code and a subset
family ``{M_j}``:

* :func:`build_loeber_code` uses uniform mixtures of the codewords in each
  subset, with tests ``E_j = sum_{m in M_j} D_m``.
* :func:`build_zero_entropy_code` uses random-phase superpositions of
  orthonormal codewords with the same tests, searching phases per message
  until the first/second kind errors fall below ``3 delta`` and ``5 delta``.

Both produce simultaneous codes; the common POVM and the index sets are kept
on the code as a witness.
"""

from dataclasses import asdict, dataclass, field
import math

import numpy as np

from . import linalg as la
from . import serialization as ser
from .errors import (
    BadParams,
    DimMismatch,
    PhaseSearchExhausted,
    RankTooHigh,
    SizeMismatch,
    TrivialRegime,
)
from .quantum import DensityOperator, KrausChannel, SubPovm
from .rng import derive_rng

DEFAULT_TRIALS = 200
# slack on the 3*delta / 5*delta acceptance tests, absorbs rounding when delta = 0
THRESHOLD_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class Simultaneity:
    """Witness that every test is a coarse-graining of one POVM."""

    base: SubPovm
    index_sets: tuple

    def reconstruct(self):
        return [np.sum([self.base.effects[m] for m in s], axis=0) for s in self.index_sets]

    def to_json(self):
        return {"base": ser.povm_to_json(self.base), "index_sets": [list(s) for s in self.index_sets]}

    @classmethod
    def from_json(cls, obj):
        return cls(ser.povm_from_json(obj["base"]), tuple(tuple(s) for s in obj["index_sets"]))


@dataclass(frozen=True, eq=False)
class IdCode:
    channel: KrausChannel
    block_n: int
    states: tuple
    tests: tuple
    simultaneity: Simultaneity = None
    zero_entropy: bool = False
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        states = tuple(s if isinstance(s, DensityOperator) else DensityOperator(s) for s in self.states)
        tests = tuple(la.hermitize(t) for t in self.tests)
        if len(states) != len(tests):
            raise SizeMismatch(f"{len(states)} states but {len(tests)} tests")
        d_in = self.channel.in_dim ** self.block_n
        d_out = self.channel.out_dim ** self.block_n
        for s in states:
            if s.dim != d_in:
                raise DimMismatch(f"state dimension {s.dim}, expected {d_in}")
        for i, t in enumerate(tests):
            if t.shape != (d_out, d_out):
                raise DimMismatch(f"test {i} has shape {t.shape}, expected {(d_out, d_out)}")
            w = np.linalg.eigvalsh(t)
            if w[0] < -la.TOL_PSD or w[-1] > 1.0 + la.TOL_PSD:
                raise BadParams(f"test {i} is not an effect (spectrum [{w[0]:.3g}, {w[-1]:.3g}])")
        if self.simultaneity is not None:
            if len(self.simultaneity.index_sets) != len(tests):
                raise SizeMismatch("simultaneity witness has the wrong number of index sets")
            for i, (t, r) in enumerate(zip(tests, self.simultaneity.reconstruct())):
                if np.max(np.abs(t - r)) > la.TOL_RECON:
                    raise BadParams(f"test {i} is not the coarse-graining named by the witness")
        if self.zero_entropy and not all(s.is_pure for s in states):
            raise BadParams("zero-entropy code with a mixed state")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "tests", tests)

    def __len__(self):
        return len(self.states)

    @property
    def state_dim(self):
        return self.channel.in_dim ** self.block_n

    def lifted_tests(self):
        dual = self.channel.adjoint()
        return np.array([la.hermitize(dual.apply(t, self.block_n)) for t in self.tests])

    def to_json(self):
        return {
            "channel": ser.channel_to_json(self.channel),
            "block_n": int(self.block_n),
            "states": [ser.state_to_json(s) for s in self.states],
            "tests": [ser.matrix_to_json(t) for t in self.tests],
            "simultaneity": None if self.simultaneity is None else self.simultaneity.to_json(),
            "zero_entropy": bool(self.zero_entropy),
            "info": self.info,
        }

    @classmethod
    def from_json(cls, obj):
        sim = obj.get("simultaneity")
        return cls(
            ser.channel_from_json(obj["channel"]),
            int(obj["block_n"]),
            tuple(ser.state_from_json(s) for s in obj["states"]),
            tuple(ser.matrix_from_json(t) for t in obj["tests"]),
            None if sim is None else Simultaneity.from_json(sim),
            bool(obj.get("zero_entropy", False)),
            dict(obj.get("info", {})),
        )


@dataclass
class IdErrorReport:
    lambda1_max: float
    lambda2_max: float
    worst_pair: tuple
    histogram: list
    acceptance: np.ndarray = field(repr=False)

    def to_json(self):
        out = asdict(self)
        out["worst_pair"] = None if self.worst_pair is None else list(self.worst_pair)
        out["acceptance"] = self.acceptance.tolist()
        return out


def acceptance_matrix(code):
    """``P[j, k] = Tr N^{(x)n}(rho_j) E_k`` for all pairs."""
    outs = np.array([code.channel.apply(s.mat, code.block_n) for s in code.states])
    tests = np.array(code.tests)
    return np.real(np.einsum("jab,kba->jk", outs, tests))


def verify_id_code(code):
    """Worst errors of the first and second kind, from all ``N^2`` Born values."""
    p = acceptance_matrix(code)
    n = p.shape[0]
    lam1 = float(np.max(1.0 - np.diag(p)))
    if n > 1:
        off = p.copy()
        np.fill_diagonal(off, -np.inf)
        flat = int(np.argmax(off))
        worst = divmod(flat, n)
        lam2 = float(off[worst])
        vals = p[~np.eye(n, dtype=bool)]
    else:
        worst, lam2, vals = None, 0.0, np.zeros(0)
    hist, _ = np.histogram(np.clip(vals, 0.0, 1.0), bins=10, range=(0.0, 1.0))
    frac = (hist / max(1, vals.size)).tolist()
    return IdErrorReport(
        lambda1_max=min(1.0, max(0.0, lam1)),
        lambda2_max=min(1.0, max(0.0, lam2)),
        worst_pair=None if worst is None else (int(worst[0]), int(worst[1])),
        histogram=frac,
        acceptance=p,
    )


def _check_family(code_size, family):
    if family.ground_M != code_size:
        raise SizeMismatch(f"family ground set has {family.ground_M} elements, code has {code_size}")


def build_loeber_code(tcode, family):
    """Uniform-mixture ID code with tests ``E_j = sum_{m in M_j} D_m``."""
    _check_family(tcode.size, family)
    states, tests = [], []
    for s in family.subsets:
        states.append(DensityOperator(np.mean([tcode.codewords[m].mat for m in s], axis=0)))
        tests.append(np.sum([tcode.decoder.effects[m] for m in s], axis=0))
    code_err = float(np.max(tcode.errors))
    info = {
        "construction": "loeber",
        "code_max_error": code_err,
        "family_lambda": family.lam,
        "lambda": max(code_err, family.lam),
    }
    return IdCode(
        tcode.channel,
        tcode.block_n,
        tuple(states),
        tuple(tests),
        Simultaneity(tcode.decoder, family.subsets),
        zero_entropy=False,
        info=info,
    )


def loeber_bounds(tcode, family):
    """``(lambda, 2 lambda)`` with ``lambda`` covering both code error and overlap fraction."""
    lam = max(float(np.max(tcode.errors)), family.lam)
    return lam, 2.0 * lam


def code_vectors(ocode):
    """State vectors of a pure orthonormal code, as rows."""
    return np.array([w.principal_vector() for w in ocode.codewords])


def _check_orthonormal(vecs):
    g = vecs.conj() @ vecs.T
    if np.max(np.abs(g - np.eye(len(vecs)))) > la.TOL_ORTH:
        raise BadParams("codewords are not pure and mutually orthogonal")


def superposition(vecs, subset, phases):
    """``(1/sqrt L) sum_{m in subset} exp(i alpha_m) |phi_m>``."""
    sub = vecs[list(subset)]
    return (np.exp(1j * np.asarray(phases)) @ sub) / math.sqrt(len(subset))


def phase_average_state(vecs, subset):
    """Exact phase average of the superposition: the uniform mixture."""
    sub = vecs[list(subset)]
    return (sub.T @ sub.conj()) / len(subset)


def _restricted_tests(vecs, subset, lifted):
    """``G_k = V^dagger Etilde_k V`` with ``V`` the columns ``phi_m, m in subset``."""
    v = vecs[list(subset)].T
    return np.einsum("ai,kab,bj->kij", v.conj(), lifted, v, optimize=True)


def _quadratic(g, coeffs):
    return np.real(np.einsum("si,kij,sj->sk", coeffs.conj(), g, coeffs, optimize=True))


def build_zero_entropy_code(
    ocode, family, seed=0, trials=DEFAULT_TRIALS, phase_policy="uniform", delta=None
):
    """Random-phase superposition ID code (pure states, simultaneous decoder).

    For each message ``j`` phase vectors are drawn from
    ``derive_rng(seed, "phases", j, trial)`` until
    ``Tr phi_j (1 - Etilde_j) <= 3 delta`` and
    ``Tr phi_j Etilde_k <= 5 delta`` for every ``k != j``.  The lifted tests
    ``Etilde_k`` do not depend on any phases, so all ``k`` are checked at
    search time.

    Parameters
    ----------
    delta : float, optional
        Maximum error of ``ocode``.  Defaults to the measured value; a
        larger value may be passed (the code is then still a delta-code).
    phase_policy : {"uniform", "zero"}
        ``zero`` fixes every phase to 0 and makes a single attempt.
    """
    vecs = code_vectors(ocode)
    _check_orthonormal(vecs)
    _check_family(ocode.size, family)
    measured = float(np.max(ocode.errors))
    if delta is None:
        delta = measured
    elif delta < measured - la.TOL_FVG:
        raise BadParams(f"delta={delta} is below the code's measured max error {measured}")
    t1, t2 = 3.0 * delta, 5.0 * delta
    lifted_d = np.array(ocode.lifted_effects)
    lifted = np.array([np.sum(lifted_d[list(s)], axis=0) for s in family.subsets])
    L = family.subset_size
    N = len(family)
    states, phases_out, rejections = [], [], []
    for j, subset in enumerate(family.subsets):
        g = _restricted_tests(vecs, subset, lifted)
        others = np.arange(N) != j
        found = None
        budget = 1 if phase_policy == "zero" else trials
        for trial in range(budget):
            if phase_policy == "zero":
                alpha = np.zeros(L)
            elif phase_policy == "uniform":
                alpha = derive_rng(seed, "phases", j, trial).uniform(0.0, 2.0 * np.pi, L)
            else:
                raise BadParams(f"unknown phase policy {phase_policy!r}")
            c = (np.exp(1j * alpha) / math.sqrt(L))[None, :]
            vals = _quadratic(g, c)[0]
            first = 1.0 - vals[j]
            second = float(np.max(vals[others])) if N > 1 else 0.0
            if first <= t1 + THRESHOLD_SLACK and second <= t2 + THRESHOLD_SLACK:
                found = (trial, alpha)
                break
        if found is None:
            raise PhaseSearchExhausted(j, budget)
        trial, alpha = found
        rejections.append(trial)
        phases_out.append([float(a) for a in alpha])
        states.append(DensityOperator(la.projector(superposition(vecs, subset, alpha))))
    tests = tuple(np.sum([ocode.decoder.effects[m] for m in s], axis=0) for s in family.subsets)
    info = {
        "construction": "zero-entropy",
        "delta": float(delta),
        "measured_delta": measured,
        "threshold_first": t1,
        "threshold_second": t2,
        "phase_policy": phase_policy,
        "seed": int(seed),
        "trials": int(trials),
        "rejections": rejections,
        "phases": phases_out,
        "analytic_N_prime": analytic_code_size(N, delta, L),
    }
    return IdCode(
        ocode.channel,
        ocode.block_n,
        tuple(states),
        tests,
        Simultaneity(ocode.decoder, family.subsets),
        zero_entropy=True,
        info=info,
    )


def tail_exponent(delta, L):
    return delta**4 * L / (128.0 * math.pi**2)


def analytic_tail_bound(delta, L):
    """Concentration ceiling ``exp(-delta^4 L / (128 pi^2))``."""
    return math.exp(-tail_exponent(delta, L))


def analytic_code_size(N, delta, L):
    """``min(N, floor(exp(delta^4 L / 128 pi^2)) - 1)``; can be 0 at small L."""
    x = tail_exponent(delta, L)
    guaranteed = math.floor(math.exp(x)) - 1 if x < 700 else N
    return int(min(N, guaranteed))


def torus_distance(alpha, beta):
    """Weighted l1 distance ``(1 / 2 pi L) sum |alpha_m - beta_m|`` on the torus."""
    diff = np.abs(np.mod(np.asarray(alpha) - np.asarray(beta) + np.pi, 2 * np.pi) - np.pi)
    return float(np.sum(diff, axis=-1) / (2 * np.pi * diff.shape[-1]))


@dataclass
class ConcentrationEstimate:
    L: int
    delta: float
    samples: int
    tail_first: float
    tail_second: float
    ceiling: float
    mean_first: float
    mean_second: float
    median_first: float
    median_second: float

    @property
    def sigma_first(self):
        p = self.ceiling
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.samples)

    @property
    def sigma_second(self):
        return self.sigma_first

    def to_json(self):
        out = asdict(self)
        out["sigma_first"] = self.sigma_first
        return out


def sample_errors(ocode, family, j, alphas):
    """Errors ``X_j`` (first kind) and ``X_k`` (second kind, ``k != j``) per phase sample.

    Returns
    -------
    first : ndarray, shape (S,)
    second : ndarray, shape (S, N - 1)
    """
    vecs = code_vectors(ocode)
    lifted_d = np.array(ocode.lifted_effects)
    lifted = np.array([np.sum(lifted_d[list(s)], axis=0) for s in family.subsets])
    subset = family.subsets[j]
    g = _restricted_tests(vecs, subset, lifted)
    coeffs = np.exp(1j * np.atleast_2d(alphas)) / math.sqrt(len(subset))
    vals = _quadratic(g, coeffs)
    others = np.arange(len(family)) != j
    return 1.0 - vals[:, j], vals[:, others]


def estimate_concentration(ocode, family, j, delta, samples, seed=0):
    """Monte Carlo tails and medians of the errors for message ``j``."""
    _check_orthonormal(code_vectors(ocode))
    _check_family(ocode.size, family)
    L = family.subset_size
    rng = derive_rng(seed, "concentration", j)
    alphas = rng.uniform(0.0, 2.0 * np.pi, size=(samples, L))
    first, second = sample_errors(ocode, family, j, alphas)
    if second.shape[1] == 0:
        second = np.zeros((samples, 1))
    return ConcentrationEstimate(
        L=L,
        delta=float(delta),
        samples=int(samples),
        tail_first=float(np.mean(first > 3 * delta)),
        tail_second=float(np.max(np.mean(second > 5 * delta, axis=0))),
        ceiling=analytic_tail_bound(delta, L),
        mean_first=float(np.mean(first)),
        mean_second=float(np.max(np.mean(second, axis=0))),
        median_first=float(np.median(first)),
        median_second=float(np.max(np.median(second, axis=0))),
    )


@dataclass
class SizeBoundCheck:
    N: int
    d: int
    lambda1: float
    lambda2: float
    pure_bound: float
    general_bound: float
    log_pure_bound: float
    log_general_bound: float
    satisfied: bool

    def to_json(self):
        return asdict(self)


def _exp_or_inf(x):
    return math.exp(x) if x < 700 else math.inf


def size_bounds(N, d, lambda1, lambda2, pure=True):
    """Dimension bounds ``(5/(1-l1-l2))^{2d}`` and ``(5/(1-l1-l2))^{2d^2}``.

    Log values are natural logarithms so that large exponents stay finite.
    """
    gap = 1.0 - lambda1 - lambda2
    if gap <= 0.0:
        raise TrivialRegime(f"lambda1 + lambda2 = {lambda1 + lambda2:.6g} >= 1")
    base = math.log(5.0 / gap)
    log_pure = 2.0 * d * base
    log_gen = 2.0 * d * d * base
    cap = log_pure if pure else log_gen
    return SizeBoundCheck(
        N=int(N),
        d=int(d),
        lambda1=float(lambda1),
        lambda2=float(lambda2),
        pure_bound=_exp_or_inf(log_pure),
        general_bound=_exp_or_inf(log_gen),
        log_pure_bound=log_pure,
        log_general_bound=log_gen,
        satisfied=bool(math.log(N) <= cap + 1e-12),
    )


def check_size_bounds(code, report=None, d=None):
    """Compare the code size with the dimension bound that applies to it.

    ``d`` defaults to the dimension of the code states; the pure-state bound
    is used when every state is pure, the general one otherwise.
    """
    if report is None:
        report = verify_id_code(code)
    dim = code.state_dim if d is None else int(d)
    pure = all(s.is_pure for s in code.states)
    return size_bounds(len(code), dim, report.lambda1_max, report.lambda2_max, pure=pure)


def extend_channel(channel, dC):
    """``N (x) Tr_C`` in Kraus form."""
    eye_c = np.eye(dC)
    ops = [np.kron(k, eye_c[c][None, :]) for k in channel.ops for c in range(dC)]
    return KrausChannel(np.array(ops))


def purify_state(rho, dA, dC, n):
    """Purification of ``rho`` on ``A^n`` into ``(A C)^{(x) n}`` with interleaved factors."""
    w, v = la.eigh(np.asarray(rho))
    keep = la.support_mask(w)
    rank = int(np.count_nonzero(keep))
    dim_c = dC**n
    if rank > dim_c:
        raise RankTooHigh(f"state rank {rank} exceeds purifying dimension {dim_c}")
    psi = np.zeros((dA**n, dim_c), dtype=complex)
    psi[:, :rank] = v[:, keep] * np.sqrt(w[keep])
    vec = psi.reshape(-1)
    vec = vec / np.linalg.norm(vec)
    perm = [i for pair in zip(range(n), range(n, 2 * n)) for i in pair]
    return la.permute_subsystems(vec, [dA] * n + [dC] * n, perm)


def purify_and_extend(code, dC):
    """Purify every state into an ancilla that the channel then discards.

    The new channel is ``N (x) Tr_C``; tests act on the unchanged output
    space, so in the Heisenberg picture they become ``Etilde_j (x) 1_C``.
    """
    n = code.block_n
    dA = code.channel.in_dim
    new_states = tuple(
        DensityOperator(la.projector(purify_state(s.mat, dA, dC, n))) for s in code.states
    )
    info = dict(code.info)
    info["purified_from"] = info.get("construction", "unknown")
    info["ancilla_dim"] = int(dC)
    return IdCode(
        extend_channel(code.channel, dC),
        n,
        new_states,
        code.tests,
        code.simultaneity,
        zero_entropy=True,
        info=info,
    )
