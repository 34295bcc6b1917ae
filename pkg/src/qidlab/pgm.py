"""Pretty-good (square-root) measurement."""

import numpy as np

from . import linalg as la
from .errors import AllZero
from .quantum import SubPovm


def pgm(states):
    """Pretty-good measurement ``F_m = S^{-1/2} rho_m S^{-1/2}``, ``S = sum rho_m``.

    The effects sum to the projector onto the support of ``S``; the returned
    sub-POVM is marked complete only when that projector is the identity.
    Inputs may be unnormalised PSD matrices.
    """
    mats = [np.asarray(s, dtype=complex) for s in states]
    if not mats or all(np.trace(m).real <= 0.0 for m in mats):
        raise AllZero("pretty-good measurement needs a state with positive trace")
    total = np.sum(mats, axis=0)
    s_inv_half = la.inv_sqrt_psd(total)
    effects = tuple(la.hermitize(s_inv_half @ m @ s_inv_half) for m in mats)
    full = la.numerical_rank(total) == total.shape[0]
    return SubPovm(effects, complete=full)
