"""Validated quantum objects: states, (sub-)POVMs and Kraus maps.

Objects are immutable once constructed.  Validation happens in
``__post_init__`` and raises the specific :mod:`qidlab.errors` subclass that
describes the defect.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import (
    BadDistribution,
    DimMismatch,
    InvalidChannel,
    InvalidPovm,
    InvalidState,
    NotHermitian,
    NotPsd,
    NotStochastic,
)


def _freeze(a):
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def _check_psd(mat, what):
    w = np.linalg.eigvalsh(mat)
    top = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    if w.size and w[0] < -la.TOL_PSD * top:
        raise NotPsd(f"{what} has eigenvalue {w[0]:.3e} < 0")
    return w


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive semidefinite, unit-trace matrix."""

    mat: np.ndarray

    def __post_init__(self):
        try:
            m = la.hermitize(self.mat)
        except NotHermitian as exc:
            raise InvalidState(str(exc)) from exc
        try:
            _check_psd(m, "state")
        except NotPsd as exc:
            raise InvalidState(str(exc)) from exc
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > la.TOL_NORM * max(1, m.shape[0]):
            raise InvalidState(f"trace {tr!r} differs from 1")
        object.__setattr__(self, "mat", _freeze(m))

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)

    @classmethod
    def from_vector(cls, vec):
        v = np.asarray(vec, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > la.TOL_NORM * 10:
            raise InvalidState(f"vector norm {nrm!r} is not 1")
        return cls(la.projector(v / nrm))

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim) / dim)

    @property
    def dim(self):
        return self.mat.shape[0]

    @property
    def purity(self):
        return float(np.real(np.einsum("ij,ji->", self.mat, self.mat)))

    @property
    def is_pure(self):
        return self.purity >= 1.0 - la.TOL_PURE

    def principal_vector(self):
        """Eigenvector of the largest eigenvalue (the state vector if pure)."""
        _, v = la.eigh(self.mat)
        return v[:, 0]


@dataclass(frozen=True, eq=False)
class SubPovm:
    """Finite list of effects ``0 <= E <= 1`` with ``sum E <= 1``.

    ``complete=True`` additionally demands ``sum E = 1``.
    """

    effects: tuple
    complete: bool = False

    def __post_init__(self):
        effects = tuple(_freeze(la.hermitize(e)) for e in self.effects)
        if not effects:
            raise InvalidPovm("a POVM needs at least one effect")
        dim = effects[0].shape[0]
        for i, e in enumerate(effects):
            if e.shape != (dim, dim):
                raise DimMismatch(f"effect {i} has shape {e.shape}, expected {(dim, dim)}")
            w = np.linalg.eigvalsh(e)
            if w[0] < -la.TOL_PSD or w[-1] > 1.0 + la.TOL_PSD:
                raise InvalidPovm(f"effect {i} has spectrum outside [0, 1]")
        total = np.sum(effects, axis=0)
        w = np.linalg.eigvalsh(la.hermitize(total))
        if w[-1] > 1.0 + la.TOL_PSD * max(1, len(effects)):
            raise InvalidPovm(f"effects sum exceeds identity (max eig {w[-1]:.12g})")
        if self.complete and np.max(np.abs(total - np.eye(dim))) > la.TOL_RECON:
            raise InvalidPovm("complete POVM does not sum to the identity")
        object.__setattr__(self, "effects", effects)

    def __len__(self):
        return len(self.effects)

    def __getitem__(self, i):
        return self.effects[i]

    @property
    def dim(self):
        return self.effects[0].shape[0]

    @property
    def total(self):
        return np.sum(self.effects, axis=0)

    def rest_effect(self):
        """``1 - sum E``: the outcome that completes the sub-POVM."""
        return la.hermitize(np.eye(self.dim) - self.total)

    def subset(self, indices):
        return SubPovm(tuple(self.effects[i] for i in indices), complete=False)

    def as_array(self):
        return np.stack(self.effects)


@dataclass(frozen=True, eq=False)
class KrausMap:
    """Completely positive map ``X -> sum_k A_k X A_k^dagger``.

    This is the common base of :class:`KrausChannel` (trace preserving) and
    :class:`UnitalMap` (identity preserving).  The operators are stored as a
    stacked array of shape ``(k, out_dim, in_dim)``.
    """

    ops: np.ndarray

    def __post_init__(self):
        ops = np.array(self.ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise InvalidChannel("Kraus operators must form a non-empty (k, out, in) stack")
        ops.setflags(write=False)
        object.__setattr__(self, "ops", ops)
        self._validate()

    def _validate(self):
        pass

    @property
    def in_dim(self):
        return self.ops.shape[2]

    @property
    def out_dim(self):
        return self.ops.shape[1]

    @property
    def kraus_ops(self):
        return list(self.ops)

    def __call__(self, x):
        return self.apply(x)

    def apply(self, x, n=1):
        """Apply the ``n``-fold tensor power of the map to the operator ``x``.

        The power map acts site by site, so the number of Kraus operators
        never grows as ``k**n``.
        """
        x = np.asarray(x, dtype=complex)
        dim_in = self.in_dim ** n
        if x.shape != (dim_in, dim_in):
            raise DimMismatch(f"operand shape {x.shape}, map expects {(dim_in, dim_in)}")
        if n == 1:
            return np.sum(self.ops @ x @ dagger_stack(self.ops), axis=0)
        return _apply_local_power(self.ops, x, n)

    def _compose_ops(self, other_ops):
        return np.array([np.kron(a, b) for a in self.ops for b in other_ops])


def _apply_local_power(ops, x, n):
    di = ops.shape[2]
    do = ops.shape[1]
    shape = [di] * n
    t = x.reshape(shape + shape)
    for s in range(n):
        y = np.moveaxis(t, (s, n + s), (0, 1))
        rest = y.shape[2:]
        y = y.reshape(di, di, -1)
        z = np.einsum("kab,bcr,kdc->adr", ops, y, ops.conj(), optimize=True)
        z = z.reshape((do, do) + rest)
        t = np.moveaxis(z, (0, 1), (s, n + s))
    d_out = do ** n
    return t.reshape(d_out, d_out)


class KrausChannel(KrausMap):
    """CPTP map: ``sum_k K_k^dagger K_k = 1_in``."""

    def _validate(self):
        s = np.einsum("kba,kbc->ac", self.ops.conj(), self.ops)
        if np.max(np.abs(s - np.eye(self.in_dim))) > la.TOL_RECON:
            raise InvalidChannel("Kraus operators are not trace preserving")

    def adjoint(self):
        """Heisenberg-picture map ``D -> sum_k K_k^dagger D K_k``."""
        return UnitalMap(dagger_stack(self.ops))

    def tensor(self, other):
        return KrausChannel(self._compose_ops(other.ops))

    def tensor_power(self, n, dim_guard=None):
        """Explicit Kraus form of ``N^{(x) n}`` (``k**n`` operators)."""
        la.check_dim(max(self.in_dim, self.out_dim) ** n, dim_guard)
        ch = self
        for _ in range(n - 1):
            ch = ch.tensor(self)
        return ch

    def apply_state(self, rho, n=1):
        """Apply to a :class:`DensityOperator` and return a validated state."""
        return DensityOperator(self.apply(np.asarray(rho), n))


class UnitalMap(KrausMap):
    """Completely positive unital map: ``sum_k A_k A_k^dagger = 1_out``."""

    def _validate(self):
        s = np.einsum("kab,kcb->ac", self.ops, self.ops.conj())
        if np.max(np.abs(s - np.eye(self.out_dim))) > la.TOL_RECON:
            raise InvalidChannel("operators do not define a unital map")

    def adjoint(self):
        return KrausChannel(dagger_stack(self.ops))


def dagger_stack(ops):
    return np.conj(np.swapaxes(ops, 1, 2))


def apply(channel, rho, n=1):
    """``N^{(x) n}(rho)`` as a :class:`DensityOperator`."""
    return channel.apply_state(rho, n)


def adjoint(channel):
    return channel.adjoint()


def born(rho, effect):
    """Born-rule probability ``Tr rho E`` (not clamped)."""
    rho = np.asarray(rho, dtype=complex)
    effect = np.asarray(effect, dtype=complex)
    if rho.shape != effect.shape:
        raise DimMismatch(f"state {rho.shape} and effect {effect.shape} differ")
    return float(np.real(np.einsum("ij,ji->", rho, effect)))


def clamp01(p):
    return min(1.0, max(0.0, float(p)))


def make_identity_channel(d):
    la.check_dim(d)
    return KrausChannel(np.eye(d)[None])


def make_trace_channel(d):
    """``Tr: S(C^d) -> S(C^1)`` with Kraus operators ``<i|``."""
    la.check_dim(d)
    return KrausChannel(np.eye(d)[:, None, :])


def make_extended_channel(dA, dC):
    """``id_A (x) Tr_C`` acting on ``S(A (x) C)`` with output on ``S(A)``."""
    if dA < 1 or dC < 1:
        raise ValueError("dimensions must be positive")
    la.check_dim(dA * dC)
    eye_a = np.eye(dA)
    ops = [np.kron(eye_a, np.eye(dC)[c][None, :]) for c in range(dC)]
    return KrausChannel(np.array(ops))


def make_unitary_channel(u):
    u = np.asarray(u, dtype=complex)
    return KrausChannel(u[None])


def make_depolarizing_channel(d, p):
    """``rho -> (1 - p) rho + p Tr(rho) 1/d`` via generalised Pauli Kraus ops."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("depolarizing parameter must be in [0, 1]")
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    ops = []
    for a in range(d):
        for b in range(d):
            w = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            coef = 1.0 - p + p / d**2 if (a, b) == (0, 0) else p / d**2
            ops.append(np.sqrt(coef) * w)
    return KrausChannel(np.array(ops))


def make_dephasing_channel(d, p):
    """Complete dephasing with probability ``p`` in the computational basis."""
    ops = [np.sqrt(1.0 - p) * np.eye(d)]
    for i in range(d):
        e = np.zeros((d, d))
        e[i, i] = np.sqrt(p)
        ops.append(e)
    return KrausChannel(np.array(ops))


def make_amplitude_damping_channel(gamma):
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]])
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]])
    return KrausChannel(np.array([k0, k1]))


def make_random_channel(d_in, d_out, rank, rng):
    """Random channel from a Haar-like isometry ``C^d_in -> C^d_out (x) C^rank``."""
    g = rng.standard_normal((d_out * rank, d_in)) + 1j * rng.standard_normal((d_out * rank, d_in))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    ops = q.reshape(d_out, rank, d_in).transpose(1, 0, 2)
    return KrausChannel(ops)


def classical_channel_as_cq(w):
    """Embed a row-stochastic matrix ``W[x, y]`` as a measure-and-prepare channel.

    Kraus operators ``sqrt(W(y|x)) |y><x|`` map ``|x><x|`` to ``diag(W(.|x))``.
    """
    w = _check_stochastic(w)
    nx, ny = w.shape
    ops = []
    for x in range(nx):
        for y in range(ny):
            if w[x, y] > 0.0:
                k = np.zeros((ny, nx))
                k[y, x] = np.sqrt(w[x, y])
                ops.append(k)
    return KrausChannel(np.array(ops))


def _check_stochastic(w):
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or np.any(w < -la.TOL_NORM) or np.any(np.abs(w.sum(axis=1) - 1.0) > la.TOL_NORM * 10):
        raise NotStochastic("W must be a row-stochastic matrix")
    return np.clip(w, 0.0, None)


def _check_distribution(p, n=None):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < -la.TOL_NORM) or abs(p.sum() - 1.0) > la.TOL_NORM * 10:
        raise BadDistribution("probabilities must be non-negative and sum to 1")
    if n is not None and p.size != n:
        raise BadDistribution(f"expected {n} probabilities, got {p.size}")
    return np.clip(p, 0.0, None)


def mutual_information(p, w):
    """``I(P; W) = H(PW) - sum_x P(x) H(W(.|x))`` in bits."""
    w = _check_stochastic(w)
    p = _check_distribution(p, w.shape[0])
    out = p @ w
    cond = sum(px * la.shannon_entropy(row) for px, row in zip(p, w))
    return la.shannon_entropy(out) - cond


def holevo_information(ensemble, channel=None, n=1):
    """Holevo quantity of the output ensemble ``{p_x, N(rho_x)}`` in bits.

    Parameters
    ----------
    ensemble : sequence of (float, state)
        Prior probabilities and input states.
    channel : KrausChannel, optional
        Defaults to the identity.
    """
    probs = _check_distribution([p for p, _ in ensemble])
    outs = []
    for _, rho in ensemble:
        r = np.asarray(rho, dtype=complex)
        outs.append(r if channel is None else channel.apply(r, n))
    avg = sum(p * o for p, o in zip(probs, outs))
    return la.von_neumann_entropy(avg) - sum(
        p * la.von_neumann_entropy(o) for p, o in zip(probs, outs)
    )

