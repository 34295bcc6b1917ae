"""Families of equal-size subsets with small pairwise intersections.

Subsets are 0-based sorted index lists over ``range(M)``.  The size is
``floor(eps * M)`` and any two members may share at most
``floor(lambda * size)`` elements.
"""

from dataclasses import dataclass
from itertools import combinations
import math
import warnings

import numpy as np

from .errors import BadParams, TargetUnreachable
from .rng import derive_rng

EXHAUSTIVE_LIMIT = 20


def subset_size(M, eps):
    # guard against eps*M landing a hair below an integer
    return int(math.floor(eps * M + 1e-9))


def overlap_cap(size, lam):
    return int(math.floor(lam * size + 1e-9))


@dataclass(frozen=True)
class SubsetFamily:
    ground_M: int
    subset_size: int
    subsets: tuple
    eps: float
    lam: float

    def __post_init__(self):
        subs = tuple(tuple(sorted(int(x) for x in s)) for s in self.subsets)
        for s in subs:
            if len(s) != self.subset_size or len(set(s)) != len(s):
                raise BadParams(f"subset {s} does not have {self.subset_size} distinct members")
            if s and (s[0] < 0 or s[-1] >= self.ground_M):
                raise BadParams(f"subset {s} leaves the ground set range({self.ground_M})")
        object.__setattr__(self, "subsets", subs)

    def __len__(self):
        return len(self.subsets)

    @property
    def max_overlap(self):
        return overlap_cap(self.subset_size, self.lam)

    def incidence(self):
        """Boolean ``(N, M)`` membership matrix."""
        inc = np.zeros((len(self.subsets), self.ground_M), dtype=bool)
        for j, s in enumerate(self.subsets):
            inc[j, list(s)] = True
        return inc

    def to_json(self):
        return {
            "M": self.ground_M,
            "size": self.subset_size,
            "subsets": [list(s) for s in self.subsets],
            "eps": self.eps,
            "lambda": self.lam,
        }

    @classmethod
    def from_json(cls, obj):
        M = int(obj["M"])
        size = int(obj["size"])
        lam = obj.get("lambda")
        eps = obj.get("eps", size / M)
        if lam is None:
            # infer the tightest cap the family satisfies
            worst = verify_overlaps(obj["subsets"])[1]
            lam = worst / size if size else 0.0
        return cls(M, size, tuple(tuple(s) for s in obj["subsets"]), float(eps), float(lam))


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    worst_pair: tuple
    worst_overlap: int


def verify_overlaps(subsets):
    """Return ``(worst_pair, worst_overlap)`` by exhaustive pairwise check."""
    sets = [frozenset(s) for s in subsets]
    worst, pair = -1, None
    for j, k in combinations(range(len(sets)), 2):
        c = len(sets[j] & sets[k])
        if c > worst:
            worst, pair = c, (j, k)
    return pair, max(worst, 0)


def verify_family(family):
    pair, worst = verify_overlaps(family.subsets)
    return FamilyCheck(worst <= family.max_overlap, pair, worst)


def ad_condition(eps, lam):
    """Sufficient condition ``lam * log2(1/eps - 1) > 2`` for the existence bound."""
    if not 0.0 < eps < 0.5:
        return False
    return lam * math.log2(1.0 / eps - 1.0) > 2.0


def generate_family(M, eps, lam, N_target, seed=0, max_attempts=None, mode="random", warn=True):
    """Build ``N_target`` subsets of ``range(M)`` with bounded overlaps.

    ``mode="random"`` draws uniform subsets and accepts a draw when it
    respects the overlap cap against every subset accepted so far.
    ``mode="exhaustive"`` (``M <= 20``) scans all subsets in lexicographic
    order with the same greedy acceptance rule.  A ``UserWarning`` is issued
    when the sufficient existence condition fails, unless ``warn=False``.

    Raises
    ------
    TargetUnreachable
        When fewer than ``N_target`` subsets were accepted.
    """
    size = subset_size(M, eps)
    if size < 1:
        raise BadParams(f"floor(eps*M) = {size}; subsets would be empty")
    if N_target < 1:
        raise BadParams("N_target must be positive")
    if warn and not ad_condition(eps, lam):
        warnings.warn(
            f"lambda*log2(1/eps-1) > 2 fails for eps={eps}, lambda={lam}; "
            "existence of a large family is not guaranteed",
            stacklevel=2,
        )
    cap = overlap_cap(size, lam)
    inc = np.zeros((0, M), dtype=np.int32)
    accepted = []

    def try_add(members):
        nonlocal inc
        row = np.zeros(M, dtype=np.int32)
        row[list(members)] = 1
        if inc.shape[0] and int(np.max(inc @ row)) > cap:
            return False
        inc = np.vstack([inc, row])
        accepted.append(tuple(sorted(members)))
        return True

    if mode == "exhaustive":
        if M > EXHAUSTIVE_LIMIT:
            raise BadParams(f"exhaustive mode is limited to M <= {EXHAUSTIVE_LIMIT}")
        for cand in combinations(range(M), size):
            try_add(cand)
            if len(accepted) == N_target:
                break
    elif mode == "random":
        attempts = 1000 * N_target if max_attempts is None else max_attempts
        rng = derive_rng(seed, "subset_family", M, size)
        for _ in range(attempts):
            cand = rng.choice(M, size=size, replace=False)
            try_add(cand.tolist())
            if len(accepted) == N_target:
                break
    else:
        raise BadParams(f"unknown mode {mode!r}")
    if len(accepted) < N_target:
        raise TargetUnreachable(
            f"found {len(accepted)} of {N_target} subsets (M={M}, size={size}, cap={cap})"
        )
    return SubsetFamily(M, size, tuple(accepted), float(eps), float(lam))


def family_from_subsets(M, subsets, lam=None):
    """Wrap explicit subsets; ``lam`` defaults to the tightest valid value."""
    subsets = [tuple(sorted(s)) for s in subsets]
    size = len(subsets[0])
    if lam is None:
        lam = verify_overlaps(subsets)[1] / size
    return SubsetFamily(M, size, tuple(subsets), size / M, float(lam))
