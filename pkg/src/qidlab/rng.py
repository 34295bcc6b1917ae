"""Seed derivation and random-state samplers.

All randomness in the package flows from integer root seeds.  Child
generators are derived from a root seed plus a tuple of labels so that the
numbers drawn for one task never depend on the order in which other tasks
were executed.
"""

import hashlib

import numpy as np


def _label_to_int(label):
    if isinstance(label, (int, np.integer)):
        if label < 0:
            raise ValueError("integer labels must be non-negative")
        return int(label)
    digest = hashlib.sha256(str(label).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(seed, *labels):
    """Return a ``numpy.random.Generator`` keyed by ``(seed, *labels)``.

    >>> a = derive_rng(3, "code", 1).random()
    >>> b = derive_rng(3, "code", 1).random()
    >>> a == b
    True
    """
    entropy = [_label_to_int(seed)] + [_label_to_int(lab) for lab in labels]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def haar_vector(dim, rng):
    """Haar-random unit vector in C^dim (normalised complex Gaussian)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def haar_unitary(dim, rng):
    """Haar-random unitary via QR of a Ginibre matrix with phase fix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(dim, rng, rank=None):
    """Random mixed state drawn from the induced (Hilbert-Schmidt-like) measure."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
