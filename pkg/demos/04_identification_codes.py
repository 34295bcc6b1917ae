"""
Identification codes: mixtures and random-phase superpositions
==============================================================

Orthogonalise a six-qubit code, pick 16 disjoint pairs of messages and
build both identification codes over the same decoder.
"""

import warnings

from qidlab import quantum as q
from qidlab.designs import generate_family
from qidlab.idcodes import (
    build_loeber_code,
    build_zero_entropy_code,
    check_size_bounds,
    loeber_bounds,
    purify_and_extend,
    verify_id_code,
)
from qidlab.orthogonal import orthogonalize_code
from qidlab.transmission import random_code

ch = q.make_depolarizing_channel(2, 0.01)
code = random_code(ch, 6, 64, seed=0, kind="perturbed", spread=0.1, mix=0.01)
ocode, rep = orthogonalize_code(code)
delta = rep.delta_out
print(f"orthogonal code: {ocode.size} messages, max error {delta:.4f}")

with warnings.catch_warnings():
    warnings.simplefilter("ignore", UserWarning)
    fam = generate_family(ocode.size, 2 / ocode.size, delta, 16, seed=0)

# uniform mixtures over each subset
mix = build_loeber_code(ocode, fam)
r = verify_id_code(mix)
print("mixture code:   lambda1=%.4f lambda2=%.4f  bounds %s" % (r.lambda1_max, r.lambda2_max, loeber_bounds(ocode, fam)))

# pure superpositions with phases searched per message
pure = build_zero_entropy_code(ocode, fam, seed=0)
r = verify_id_code(pure)
print("zero-entropy:   lambda1=%.4f lambda2=%.4f  thresholds (%.4f, %.4f)" % (r.lambda1_max, r.lambda2_max, 3 * delta, 5 * delta))
print("phase draws rejected per message:", pure.info["rejections"])
print("size bound satisfied:", check_size_bounds(pure, r).satisfied)

# over the noiseless channel a mixed code can be purified into a discarded ancilla
small = random_code(q.make_identity_channel(2), 2, 4, seed=1, kind="haar")
with warnings.catch_warnings():
    warnings.simplefilter("ignore", UserWarning)
    fam4 = generate_family(4, 0.5, 0.5, 4, seed=0)
lo = build_loeber_code(small, fam4)
ext = purify_and_extend(lo, 2)
print("purified report equal:", abs(verify_id_code(lo).lambda2_max - verify_id_code(ext).lambda2_max) < 1e-12)
