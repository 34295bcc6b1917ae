"""JSON encoding of matrices, states, POVMs, channels and codes.

Matrices are stored row-major as separate real and imaginary lists:
``{"dim": d, "re": [...], "im": [...]}``.  Non-square matrices (Kraus
operators between different dimensions) use ``"rows"``/``"cols"`` instead
of ``"dim"``.  Python's ``json`` writes floats with ``repr``, which
round-trips IEEE-754 doubles exactly.
"""

import json
from pathlib import Path

import numpy as np

from .quantum import DensityOperator, KrausChannel, SubPovm


def matrix_to_json(a):
    a = np.asarray(a, dtype=complex)
    rows, cols = a.shape
    out = {"dim": rows} if rows == cols else {"rows": rows, "cols": cols}
    flat = a.reshape(-1)
    out["re"] = [float(x) for x in flat.real]
    out["im"] = [float(x) for x in flat.imag]
    return out


def matrix_from_json(obj):
    if "dim" in obj:
        rows = cols = int(obj["dim"])
    else:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError("matrix payload length does not match its shape")
    return (re + 1j * im).reshape(rows, cols)


def state_to_json(rho):
    return {"kind": "density", "mat": matrix_to_json(np.asarray(rho))}


def state_from_json(obj):
    if obj.get("kind", "density") != "density":
        raise ValueError(f"unsupported state kind {obj.get('kind')!r}")
    return DensityOperator(matrix_from_json(obj["mat"]))


def povm_to_json(povm):
    return {"effects": [matrix_to_json(e) for e in povm.effects], "complete": bool(povm.complete)}


def povm_from_json(obj):
    return SubPovm(tuple(matrix_from_json(e) for e in obj["effects"]), complete=bool(obj.get("complete", False)))


def channel_to_json(ch):
    return {
        "in_dim": int(ch.in_dim),
        "out_dim": int(ch.out_dim),
        "kraus": [matrix_to_json(k) for k in ch.ops],
    }


def channel_from_json(obj):
    ops = np.array([matrix_from_json(k) for k in obj["kraus"]])
    ch = KrausChannel(ops)
    if ch.in_dim != int(obj["in_dim"]) or ch.out_dim != int(obj["out_dim"]):
        raise ValueError("declared channel dimensions do not match Kraus operators")
    return ch


def dumps(obj):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
