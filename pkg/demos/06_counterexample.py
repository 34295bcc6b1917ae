"""
Why the phases have to be random
================================

A decoder that identifies every basis state reasonably well yet never
accepts the uniform superposition; random phases restore detection.
"""

import numpy as np

from qidlab import counterexample as cx

inst = cx.build_counterexample(K=5, M=8)
print("success per message:", np.round(cx.decoding_success(inst), 4))
print("Tr psi D with all phases zero:", cx.fixed_phase_failure(inst))

alphas, direct, closed = cx.sample_detection(inst, 10000, seed=0)
print(f"mean detection with random phases {direct.mean():.4f} (expected {1 - 1 / inst.K:.4f})")
print("largest gap to 1 - |<psi|psi'>|^2:", np.max(np.abs(direct - closed)))
