"""
From an average-error code to a pure orthogonal code
====================================================

Generate a noisy three-qubit code, then purify, select, orthonormalise and
expurgate it.  The decoder is never changed.
"""

import math

from qidlab import quantum as q
from qidlab.orthogonal import orthogonalize_code, orthogonal_delta_bound
from qidlab.transmission import avg_error, random_code

ch = q.make_depolarizing_channel(2, 0.01)
code = random_code(ch, n=3, M=8, seed=2, kind="perturbed", spread=0.12, mix=0.02)
eps = avg_error(code)
print(f"input: M={code.size}, average error {eps:.4f}")

ocode, rep = orthogonalize_code(code)
print("errors per stage (avg, avg, avg, avg, max):", [round(e, 4) for e in rep.per_stage_errors])
print(f"kept messages {rep.kept} out of the {rep.L} linearly independent ones")
print(f"M' = {rep.M_prime} >= floor((1-eps)^2 M/2) = {math.floor((1 - eps) ** 2 * code.size / 2)}")
print(f"max error {rep.delta_out:.4f} <= {min(1.0, orthogonal_delta_bound(eps)):.4f}")
print(f"Gram deviation from identity: {rep.gram_deviation:.1e}")
