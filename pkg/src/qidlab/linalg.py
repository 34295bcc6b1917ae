"""Dense complex linear algebra for finite-dimensional quantum objects.

Everything here works on plain ``numpy`` arrays.  Hermitian inputs are
checked against ``TOL_HERM`` and then symmetrised as ``(A + A^dagger) / 2``
before any spectral routine touches them, so tiny representation noise never
leaks into eigenvectors.
"""

import math
from functools import reduce

import numpy as np

from .errors import DimGuardExceeded, DimMismatch, NotHermitian, NotPsd

#: relative eigenvalue cutoff (w.r.t. the largest eigenvalue) defining the support
RANK_TOL = 1e-10
TOL_HERM = 1e-9
TOL_PSD = 1e-9
TOL_RECON = 1e-8
TOL_ORTH = 1e-8
TOL_FVG = 1e-7
TOL_NORM = 1e-9
TOL_PURE = 1e-9
DIM_GUARD = 4096


def check_dim(dim, dim_guard=None):
    """Raise :class:`DimGuardExceeded` if ``dim`` is above the guard."""
    guard = DIM_GUARD if dim_guard is None else dim_guard
    if dim > guard:
        raise DimGuardExceeded(f"dimension {dim} exceeds guard {guard}")
    return dim


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def hermitize(a, tol=TOL_HERM):
    """Return ``(A + A^dagger)/2`` after checking ``A`` is Hermitian.

    The check is relative to ``max(1, ||A||_max)``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if np.max(np.abs(a - a.conj().T), initial=0.0) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return 0.5 * (a + a.conj().T)


def eigh(a):
    """Hermitian eigendecomposition with eigenvalues in descending order.

    Returns
    -------
    w : ndarray, shape (d,)
        Real eigenvalues, largest first.
    v : ndarray, shape (d, d)
        Orthonormal eigenvectors as columns, ``v[:, i]`` belongs to ``w[i]``.
    """
    h = hermitize(a)
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def support_mask(w, rank_tol=RANK_TOL):
    """Boolean mask of eigenvalues treated as non-zero."""
    top = float(np.max(np.abs(w), initial=0.0))
    if top == 0.0:
        return np.zeros(w.shape, dtype=bool)
    return w > rank_tol * top


def func_on_support(a, f, rank_tol=RANK_TOL, tol_psd=TOL_PSD):
    """Apply ``f`` to the spectrum of a PSD matrix on its support.

    Eigenvalues at or below ``rank_tol * lambda_max`` are mapped to zero
    regardless of ``f``; this is the pseudo-inverse convention, so
    ``f = x**-0.5`` yields the generalised inverse square root.
    """
    w, v = eigh(a)
    top = float(np.max(np.abs(w), initial=0.0))
    if w.size and w[-1] < -tol_psd * max(top, 1.0):
        raise NotPsd(f"minimum eigenvalue {w[-1]:.3e} below tolerance")
    keep = support_mask(w, rank_tol)
    fw = np.zeros_like(w)
    if np.any(keep):
        fw[keep] = np.asarray(f(w[keep]), dtype=float)
    vk = v[:, keep]
    return (vk * fw[keep]) @ vk.conj().T


def sqrt_psd(a):
    return func_on_support(a, np.sqrt)


def inv_sqrt_psd(a):
    """Moore-Penrose inverse square root of a PSD matrix."""
    return func_on_support(a, lambda x: 1.0 / np.sqrt(x))


def support_projector(a):
    return func_on_support(a, np.ones_like)


def numerical_rank(a, rank_tol=RANK_TOL):
    w, _ = eigh(a)
    return int(np.count_nonzero(support_mask(w, rank_tol)))


def min_eigenvalue(a):
    return float(np.linalg.eigvalsh(hermitize(a))[0])


def projector(vec):
    """Rank-one operator ``|v><v|``."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def _square_pair(rho, sigma):
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimMismatch(f"shapes differ: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def trace_norm_hermitian(a):
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(a)))))


def trace_distance(rho, sigma):
    """Half the trace norm of ``rho - sigma``, clipped to [0, 1]."""
    rho, sigma = _square_pair(rho, sigma)
    return min(1.0, max(0.0, 0.5 * trace_norm_hermitian(rho - sigma)))


def fidelity(rho, sigma):
    """Root fidelity ``|| sqrt(rho) sqrt(sigma) ||_1``.

    Evaluated as ``Tr sqrt(sqrt(rho) sigma sqrt(rho))`` with negative
    round-off eigenvalues clipped to zero.
    """
    rho, sigma = _square_pair(rho, sigma)
    sr = sqrt_psd(rho)
    inner = np.linalg.eigvalsh(hermitize(sr @ hermitize(sigma) @ sr))
    val = float(np.sum(np.sqrt(np.clip(inner, 0.0, None))))
    return min(1.0, max(0.0, val))


def tensor(*ops, dim_guard=None):
    """Kronecker product of any number of arrays."""
    if not ops:
        raise ValueError("tensor() needs at least one operand")
    out = reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])
    check_dim(max(out.shape), dim_guard)
    return out


def tensor_power(a, n, dim_guard=None):
    a = np.asarray(a, dtype=complex)
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    check_dim(max(a.shape) ** n, dim_guard)
    return tensor(*([a] * n), dim_guard=dim_guard)


def partial_trace(a, dims, trace_out):
    """Trace out the subsystems listed in ``trace_out`` (0-based).

    Parameters
    ----------
    a : array_like, shape (D, D)
        Operator on ``H_0 x H_1 x ... x H_{k-1}`` with ``D = prod(dims)``.
    dims : sequence of int
        Local dimensions.
    trace_out : int or sequence of int
        Indices of the factors to discard.
    """
    a = np.asarray(a, dtype=complex)
    dims = [int(d) for d in dims]
    total = math.prod(dims)
    if a.shape != (total, total):
        raise DimMismatch(f"operator shape {a.shape} does not match dims {dims}")
    if isinstance(trace_out, (int, np.integer)):
        trace_out = [int(trace_out)]
    trace_out = sorted(set(trace_out))
    k = len(dims)
    if any(i < 0 or i >= k for i in trace_out):
        raise DimMismatch(f"trace_out {trace_out} out of range for {k} factors")
    keep = [i for i in range(k) if i not in trace_out]
    t = a.reshape(dims + dims)
    # contract row/column legs of each traced factor, highest index first
    for i in reversed(trace_out):
        cur = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + cur)
    dk = math.prod(dims[i] for i in keep)
    return t.reshape(dk, dk)


def permute_subsystems(vec_or_op, dims, perm):
    """Reorder tensor factors: new factor ``i`` is old factor ``perm[i]``.

    Works on state vectors (1-D) and on operators (2-D).
    """
    x = np.asarray(vec_or_op, dtype=complex)
    dims = list(dims)
    k = len(dims)
    new_dims = [dims[p] for p in perm]
    total = math.prod(dims)
    if x.ndim == 1:
        return x.reshape(dims).transpose(perm).reshape(total)
    t = x.reshape(dims + dims).transpose(list(perm) + [k + p for p in perm])
    return t.reshape(math.prod(new_dims), math.prod(new_dims))


def von_neumann_entropy(rho, base=2.0):
    """Entropy ``-Tr rho log rho`` with the convention ``0 log 0 = 0``."""
    w = np.linalg.eigvalsh(hermitize(rho))
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)) / math.log(base))


def shannon_entropy(p, base=2.0):
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)) / math.log(base))
