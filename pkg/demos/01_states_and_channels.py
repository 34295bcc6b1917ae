"""
States, channels and the Heisenberg picture
===========================================

Build a few qubit channels, push states through them and check that the
adjoint map gives the same Born probabilities.
"""

import numpy as np

from qidlab import linalg as la
from qidlab import quantum as q
from qidlab.rng import derive_rng, random_density

rng = derive_rng(0, "demo")

# a noisy qubit channel and a random mixed input
ch = q.make_amplitude_damping_channel(0.3)
rho = random_density(2, rng)
out = ch.apply(rho)
print("output trace:", np.trace(out).real)

# Tr N(rho) D == Tr rho N*(D)
D = la.projector(np.array([1, 0]))
print("Schroedinger:", q.born(out, D))
print("Heisenberg:  ", q.born(rho, ch.adjoint().apply(D)))

# two uses of the channel act site by site
rho2 = random_density(4, rng)
print("two-use output trace:", np.trace(ch.apply(rho2, n=2)).real)

# distances and the Fuchs-van de Graaf sandwich
sigma = random_density(2, rng)
F, T = la.fidelity(rho, sigma), la.trace_distance(rho, sigma)
print(f"1-F={1 - F:.4f} <= T={T:.4f} <= sqrt(1-F^2)={np.sqrt(1 - F**2):.4f}")

# Holevo information of {|0>, |+>} through the noiseless channel
ens = [(0.5, la.projector(np.array([1, 0]))), (0.5, la.projector(np.array([1, 1]) / np.sqrt(2)))]
print("Holevo information:", q.holevo_information(ens, q.make_identity_channel(2)))
