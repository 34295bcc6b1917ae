"""Transmission codes over memoryless quantum channels.

A code is a list of codeword states on ``A^n`` paired with decoding effects
on ``B^n``.  Success of message ``m`` is ``Tr N^{(x)n}(pi_m) D_m``; the
evaluation is done in the Heisenberg picture by lifting each ``D_m`` through
the channel adjoint once and reusing it.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from . import linalg as la
from .errors import BadParams, DimMismatch, EmptyCode, SizeMismatch
from .pgm import pgm
from .quantum import DensityOperator, KrausChannel, SubPovm, born
from .rng import derive_rng, haar_vector
from . import serialization as ser


@dataclass(frozen=True, eq=False)
class TransmissionCode:
    channel: KrausChannel
    codewords: tuple
    decoder: SubPovm
    block_n: int = 1
    labels: tuple = None

    def __post_init__(self):
        words = tuple(
            w if isinstance(w, DensityOperator) else DensityOperator(w) for w in self.codewords
        )
        if not words:
            raise EmptyCode("a transmission code needs at least one message")
        if len(words) != len(self.decoder):
            raise SizeMismatch(f"{len(words)} codewords but {len(self.decoder)} decoding effects")
        d_in = self.channel.in_dim ** self.block_n
        d_out = self.channel.out_dim ** self.block_n
        la.check_dim(max(d_in, d_out))
        if any(w.dim != d_in for w in words):
            raise DimMismatch(f"codewords must live in dimension {d_in}")
        if self.decoder.dim != d_out:
            raise DimMismatch(f"decoder must act on dimension {d_out}")
        labels = tuple(range(len(words))) if self.labels is None else tuple(int(x) for x in self.labels)
        if len(labels) != len(words):
            raise SizeMismatch("labels must match the number of messages")
        object.__setattr__(self, "codewords", words)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self):
        return len(self.codewords)

    def __len__(self):
        return self.size

    @cached_property
    def lifted_effects(self):
        """``N*^{(x)n}(D_m)`` for each message, acting on the input space."""
        dual = self.channel.adjoint()
        return tuple(la.hermitize(dual.apply(d, self.block_n)) for d in self.decoder.effects)

    @cached_property
    def success_probabilities(self):
        probs = [born(w.mat, e) for w, e in zip(self.codewords, self.lifted_effects)]
        return np.clip(np.array(probs), 0.0, 1.0)

    @property
    def errors(self):
        return 1.0 - self.success_probabilities

    def output_states(self):
        return [self.channel.apply(w.mat, self.block_n) for w in self.codewords]

    def subcode(self, indices):
        idx = list(indices)
        return TransmissionCode(
            self.channel,
            tuple(self.codewords[i] for i in idx),
            self.decoder.subset(idx),
            self.block_n,
            tuple(self.labels[i] for i in idx),
        )

    def with_codewords(self, codewords):
        return TransmissionCode(self.channel, tuple(codewords), self.decoder, self.block_n, self.labels)

    @property
    def is_pure(self):
        return all(w.is_pure for w in self.codewords)

    def gram_matrix(self):
        """Gram matrix of the principal vectors of the codewords."""
        vecs = np.array([w.principal_vector() for w in self.codewords])
        return vecs.conj() @ vecs.T

    def to_json(self):
        return {
            "channel": ser.channel_to_json(self.channel),
            "block_n": int(self.block_n),
            "codewords": [ser.state_to_json(w) for w in self.codewords],
            "decoder": ser.povm_to_json(self.decoder),
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            ser.channel_from_json(obj["channel"]),
            tuple(ser.state_from_json(w) for w in obj["codewords"]),
            ser.povm_from_json(obj["decoder"]),
            int(obj.get("block_n", 1)),
            tuple(obj["labels"]) if "labels" in obj else None,
        )


def max_error(code):
    return float(np.max(code.errors))


def avg_error(code):
    return float(np.mean(code.errors))


def expurgate(code, eps=None):
    """Keep the better half of a code.

    Messages are sorted by error (stable, ascending) and the first
    ``ceil(M/2)`` are kept, which bounds the maximum error of the result by
    twice the input average.  Decoding effects are carried over untouched.
    """
    if code.size == 0:
        raise EmptyCode("cannot expurgate an empty code")
    errs = code.errors
    if eps is not None and float(np.mean(errs)) > eps + la.TOL_FVG:
        raise BadParams(f"average error {np.mean(errs):.6g} exceeds eps={eps}")
    order = np.argsort(errs, kind="stable")
    keep = sorted(order[: math.ceil(code.size / 2)].tolist())
    return code.subcode(keep)


def _orthonormalise(vecs):
    """Symmetric (Loewdin) orthonormalisation of the rows of ``vecs``."""
    g = vecs.conj() @ vecs.T
    return (la.inv_sqrt_psd(g).T @ vecs) if vecs.shape[0] > 1 else vecs / np.linalg.norm(vecs)


def random_code(channel, n, M, seed, kind="haar", decoder="pgm", spread=0.1, mix=0.0, dim_guard=None):
    """Generate a seeded transmission code for tests and experiments.

    Parameters
    ----------
    kind : {"basis", "haar", "perturbed"}
        ``basis`` uses computational basis states, ``haar`` Haar-random pure
        states, ``perturbed`` basis states plus a complex Gaussian
        perturbation of relative size ``spread``.
    decoder : {"pgm", "projective"}
        Pretty-good measurement of the channel outputs, or rank-one
        projectors onto the orthonormalised principal output vectors.
    mix : float
        Weight of a random pure state mixed into every codeword (rank-2
        codewords when positive).
    """
    d_in = channel.in_dim ** n
    d_out = channel.out_dim ** n
    la.check_dim(max(d_in, d_out), dim_guard)
    if M < 1:
        raise BadParams("need at least one message")
    if kind in ("basis", "perturbed") and M > d_in:
        raise BadParams(f"{kind} code with {M} messages needs input dimension >= {M}")
    if not 0.0 <= mix < 1.0:
        raise BadParams("mix must lie in [0, 1)")
    rng = derive_rng(seed, "random_code", kind)
    eye = np.eye(d_in)
    vecs = []
    for m in range(M):
        if kind == "basis":
            v = eye[m].astype(complex)
        elif kind == "haar":
            v = haar_vector(d_in, rng)
        elif kind == "perturbed":
            v = eye[m] + spread * haar_vector(d_in, rng)
            v = v / np.linalg.norm(v)
        else:
            raise BadParams(f"unknown code kind {kind!r}")
        vecs.append(v)
    words = []
    for v in vecs:
        rho = la.projector(v)
        if mix > 0.0:
            rho = (1.0 - mix) * rho + mix * la.projector(haar_vector(d_in, rng))
        words.append(DensityOperator(rho))
    outs = [channel.apply(w.mat, n) for w in words]
    if decoder == "pgm":
        dec = pgm(outs)
    elif decoder == "projective":
        if M > d_out:
            raise BadParams("projective decoder needs M <= output dimension")
        principal = np.array([la.eigh(o)[1][:, 0] for o in outs])
        dec = SubPovm(tuple(la.projector(u) for u in _orthonormalise(principal)))
    else:
        raise BadParams(f"unknown decoder {decoder!r}")
    return TransmissionCode(channel, tuple(words), dec, n)
