"""
Seeded pipelines and sweeps
===========================

Run the whole chain from one JSON-style config, then sweep delta.
"""

import tempfile
from pathlib import Path

from qidlab.harness import run_pipeline, sweep

config = {
    "seed": 11,
    "channel": {"kind": "depolarizing", "dim": 2, "p": 0.01},
    "block_n": 3,
    "M": 8,
    "code": {"kind": "perturbed", "spread": 0.1},
    "family": {"eps": 0.25, "lambda": 0.0, "count": 2},
    "mc_samples": 500,
}

with tempfile.TemporaryDirectory() as tmp:
    rep = run_pipeline(config, out_dir=tmp)
    print("exit code", rep.exit_code, "artifacts", sorted(p.name for p in Path(tmp).iterdir()))
print("orthogonal code max error:", rep.stages["orthogonalize"]["delta_out"])
print("zero-entropy errors:", rep.stages["zero_entropy"]["report"]["lambda1_max"], rep.stages["zero_entropy"]["report"]["lambda2_max"])

print(sweep(config, {"delta": [0.05, 0.1, 0.2]}))
