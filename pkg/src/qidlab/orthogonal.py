"""Turning an average-error transmission code into a pure orthogonal code.

Pipeline stages, in order:

1. replace each codeword by its best eigenvector (pure code),
2. keep a maximal linearly independent subset, best messages first,
3. orthonormalise the kept vectors with ``T^{-1/2}``, ``T = sum psi_m``,
4. expurgate the worse half.

The decoder is never modified: every stage only drops messages or replaces
codewords, and the final code reuses the original effects.
"""

from dataclasses import asdict, dataclass, field
import math

import numpy as np

from . import linalg as la
from .errors import PipelineFailure, QidError, RankDeficient
from .pgm import pgm  # noqa: F401  (re-exported)
from .quantum import DensityOperator
from .transmission import TransmissionCode, avg_error, expurgate, max_error


def orthogonal_delta_bound(eps):
    """``2 sqrt(5 eps) / (1 - eps)^2``, the guaranteed maximum error."""
    if eps >= 1.0:
        return math.inf
    return 2.0 * math.sqrt(5.0 * eps) / (1.0 - eps) ** 2


def orthogonal_mean_bound(eps):
    """Mean-error bound after orthogonalisation, before expurgation."""
    if eps >= 1.0:
        return math.inf
    return eps / (1.0 - eps) ** 2 + math.sqrt(2.0 * eps) / (1.0 - eps)


@dataclass
class OrthogonalizationReport:
    M: int
    L: int
    M_prime: int
    eps_in: float
    delta_out: float
    bound_delta: float
    gram_deviation: float
    per_stage_errors: list = field(default_factory=list)
    selected: list = field(default_factory=list)
    kept: list = field(default_factory=list)
    mean_overlap: float = float("nan")

    @property
    def bound_delta_clamped(self):
        return min(1.0, self.bound_delta)

    @property
    def size_floor(self):
        return math.floor((1.0 - self.eps_in) ** 2 * self.M / 2)

    def to_json(self):
        out = asdict(self)
        out["bound_delta_clamped"] = self.bound_delta_clamped
        return out


def purify_codewords(code):
    """Replace every codeword by the support eigenvector with the best success.

    Since ``Tr pi E = sum_i p_i <v_i|E|v_i>``, some eigenvector in the
    support does at least as well as the mixture.
    """
    words = []
    for w, e in zip(code.codewords, code.lifted_effects):
        vals, vecs = la.eigh(w.mat)
        support = la.support_mask(vals)
        cand = vecs[:, support]
        scores = np.real(np.einsum("im,ij,jm->m", cand.conj(), e, cand, optimize=True))
        best = cand[:, int(np.argmax(scores))]
        words.append(DensityOperator(la.projector(best)))
    return code.with_codewords(words)


def select_linearly_independent(vectors, success=None, rank_tol=la.RANK_TOL):
    """Greedy maximal linearly independent subset of unit vectors.

    Candidates are visited by decreasing ``success`` (ties by index) and a
    vector is kept when the Gram matrix of the kept set stays non-singular,
    i.e. its smallest eigenvalue exceeds ``rank_tol``.

    Returns
    -------
    list of int
        Selected indices in increasing order.
    """
    vecs = np.atleast_2d(np.asarray(vectors, dtype=complex))
    m = vecs.shape[0]
    if success is None:
        order = list(range(m))
    else:
        order = np.argsort(-np.asarray(success, dtype=float), kind="stable").tolist()
    chosen = []
    for i in order:
        trial = vecs[chosen + [i]]
        gram = trial.conj() @ trial.T
        if la.min_eigenvalue(gram) > rank_tol:
            chosen.append(i)
        if len(chosen) == vecs.shape[1]:
            break
    return sorted(chosen)


def orthogonalize(vectors):
    """Symmetric orthonormalisation ``|phi_m> = T^{-1/2} |psi_m>``.

    Each output vector is multiplied by a unit phase so that
    ``<psi_m|phi_m>`` is real and non-negative.
    """
    vecs = np.atleast_2d(np.asarray(vectors, dtype=complex))
    gram = vecs.conj() @ vecs.T
    if la.min_eigenvalue(gram) <= la.RANK_TOL:
        raise RankDeficient("input vectors are not linearly independent")
    t = vecs.T @ vecs.conj()  # sum_m |psi_m><psi_m|
    phis = (la.inv_sqrt_psd(t) @ vecs.T).T
    overlaps = np.einsum("md,md->m", vecs.conj(), phis)
    phases = np.where(np.abs(overlaps) > 0, np.conj(overlaps) / np.abs(overlaps), 1.0)
    return phis * phases[:, None]


def orthogonalize_code(code, min_rank=2):
    """Full orthogonalisation pipeline.

    Returns
    -------
    ocode : TransmissionCode
        Pure, mutually orthogonal codewords with the original decoding
        effects of the surviving messages; ``ocode.labels`` are indices into
        the input code.
    report : OrthogonalizationReport
    """
    stage = "evaluate"
    try:
        eps = avg_error(code)
        if eps >= 1.0:
            raise RankDeficient("average error is 1; nothing to orthogonalise")
        stage = "purify"
        pure = purify_codewords(code)
        stage = "select"
        vecs = np.array([w.principal_vector() for w in pure.codewords])
        sel = select_linearly_independent(vecs, pure.success_probabilities)
        if len(sel) < min_rank:
            raise RankDeficient(f"only {len(sel)} linearly independent codewords")
        indep = pure.subcode(sel)
        stage = "orthogonalize"
        phis = orthogonalize(vecs[sel])
        ortho = indep.with_codewords([DensityOperator(la.projector(p)) for p in phis])
        overlap = float(np.mean(np.abs(np.einsum("md,md->m", vecs[sel].conj(), phis)) ** 2))
        stage = "expurgate"
        final = expurgate(ortho)
    except QidError as exc:
        raise PipelineFailure(stage, exc) from exc
    fvecs = np.array([w.principal_vector() for w in final.codewords])
    gram = fvecs.conj() @ fvecs.T
    report = OrthogonalizationReport(
        M=code.size,
        L=len(sel),
        M_prime=final.size,
        eps_in=eps,
        delta_out=max_error(final),
        bound_delta=orthogonal_delta_bound(eps),
        gram_deviation=float(np.max(np.abs(gram - np.eye(final.size)))),
        per_stage_errors=[eps, avg_error(pure), avg_error(indep), avg_error(ortho), max_error(final)],
        selected=list(indep.labels),
        kept=list(final.labels),
        mean_overlap=overlap,
    )
    return final, report


def orthonormal_code(code):
    """True when all codewords are pure and pairwise orthogonal."""
    if not isinstance(code, TransmissionCode) or not code.is_pure:
        return False
    g = code.gram_matrix()
    return bool(np.max(np.abs(np.abs(g) - np.eye(code.size))) <= la.TOL_ORTH)
