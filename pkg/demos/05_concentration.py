"""
Concentration of the identification errors over random phases
==============================================================

Sample the first-kind error of a random-phase superposition and compare
the tail with the analytic ceiling and the Markov medians.
"""

import numpy as np

from qidlab import linalg as la
from qidlab import quantum as q
from qidlab.designs import family_from_subsets
from qidlab.idcodes import analytic_code_size, estimate_concentration
from qidlab.rng import derive_rng
from qidlab.transmission import TransmissionCode

# noiseless basis code decoded in a slightly rotated basis
M, L = 64, 16
rng = derive_rng(0, "rotation")
g = rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))
w, v = np.linalg.eigh((g + g.conj().T) / 2)
u = (v * np.exp(0.05j * w)) @ v.conj().T
dec = q.SubPovm(tuple(la.projector(u[:, m]) for m in range(M)), complete=True)
code = TransmissionCode(q.make_identity_channel(M), tuple(np.diag(np.eye(M)[m]) for m in range(M)), dec)
delta = float(np.max(code.errors))
print(f"code max error delta = {delta:.3f}")

fam = family_from_subsets(M, [tuple(range(k, k + L)) for k in range(0, M, L)], lam=0.0)
est = estimate_concentration(code, fam, 0, delta, samples=5000, seed=1)
print(f"Pr[X_j > 3 delta] = {est.tail_first:.4f}, ceiling {est.ceiling:.4f}")
print(f"median X_j = {est.median_first:.3f} (<= 2 delta = {2 * delta:.3f})")
print(f"median X_k = {est.median_second:.3f} (<= 4 delta = {4 * delta:.3f})")
print("analytic code size at this L:", analytic_code_size(len(fam), delta, L))
