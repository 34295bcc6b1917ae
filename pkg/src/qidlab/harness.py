"""Seeded end-to-end experiments and parameter sweeps.

A configuration is one JSON document.  Every random draw is derived from the
root ``seed`` plus a stage label, so a rerun with the same configuration
writes byte-identical artifacts.  Wall-clock timings are only recorded when
``record_timings`` is set, because they would otherwise break that property.
"""

from concurrent.futures import ThreadPoolExecutor
import copy
import csv
from dataclasses import dataclass, field
import io
import itertools
import logging
import math
import os
from pathlib import Path
import time

import numpy as np

from . import __version__
from . import linalg as la
from . import quantum as q
from . import serialization as ser
from .designs import ad_condition, generate_family, verify_family
from .errors import BadParams, DimGuardExceeded, PipelineFailure, QidError
from .idcodes import (
    build_loeber_code,
    build_zero_entropy_code,
    check_size_bounds,
    estimate_concentration,
    loeber_bounds,
    verify_id_code,
)
from .orthogonal import orthogonalize_code
from .rng import derive_rng
from .transmission import avg_error, max_error, random_code

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 2
EXIT_CONFIG_ERROR = 3
EXIT_NUMERICAL_FAILURE = 4

BOUND_SLACK = 1e-9


class ConfigError(QidError, ValueError):
    pass


def thread_cap():
    """Parallelism cap from ``QIDLAB_THREADS`` (default: CPU count)."""
    raw = os.environ.get("QIDLAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring non-integer QIDLAB_THREADS=%r", raw)
    return os.cpu_count() or 1


def build_channel(spec, seed=0):
    """Construct a channel from a config dict."""
    if "kraus" in spec:
        return ser.channel_from_json(spec)
    kind = spec.get("kind")
    if kind == "file":
        return ser.channel_from_json(ser.read_json(spec["path"]))
    if kind == "identity":
        return q.make_identity_channel(int(spec.get("dim", 2)))
    if kind == "trace":
        return q.make_trace_channel(int(spec["dim"]))
    if kind == "extended":
        return q.make_extended_channel(int(spec["dA"]), int(spec["dC"]))
    if kind == "depolarizing":
        return q.make_depolarizing_channel(int(spec.get("dim", 2)), float(spec["p"]))
    if kind == "dephasing":
        return q.make_dephasing_channel(int(spec.get("dim", 2)), float(spec["p"]))
    if kind == "amplitude_damping":
        return q.make_amplitude_damping_channel(float(spec["gamma"]))
    if kind == "random":
        rng = derive_rng(int(spec.get("seed", seed)), "channel")
        return q.make_random_channel(int(spec["d_in"]), int(spec["d_out"]), int(spec.get("rank", 2)), rng)
    raise ConfigError(f"unknown channel kind {kind!r}")


@dataclass
class ExperimentConfig:
    seed: int
    channel: dict
    block_n: int = 1
    M: int = 4
    code: dict = field(default_factory=lambda: {"kind": "basis"})
    family: dict = field(default_factory=dict)
    delta: float = None
    phase_trials: int = 200
    mc_samples: int = 0
    record_timings: bool = False

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        if "seed" not in raw or not isinstance(raw["seed"], int) or raw["seed"] < 0:
            raise ConfigError("config needs a non-negative integer 'seed'")
        if "channel" not in raw:
            raise ConfigError("config needs a 'channel'")
        known = set(cls.__dataclass_fields__)
        extra = set(raw) - known - {"outputs"}
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = cls(**{k: copy.deepcopy(v) for k, v in raw.items() if k in known})
        cfg.validate()
        return cfg

    def validate(self):
        if self.block_n < 1 or self.M < 1:
            raise ConfigError("block_n and M must be positive")
        if self.phase_trials < 1 or self.mc_samples < 0:
            raise ConfigError("phase_trials must be >= 1 and mc_samples >= 0")
        fam = self.family
        if "eps" not in fam or "count" not in fam:
            raise ConfigError("family needs 'eps' and 'count'")
        if self.delta is not None and self.delta < 0:
            raise ConfigError("delta must be non-negative")

    def to_dict(self):
        return {k: copy.deepcopy(getattr(self, k)) for k in self.__dataclass_fields__}


@dataclass
class ExperimentReport:
    config: dict
    stages: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    error: dict = None
    exit_code: int = EXIT_OK
    timings_ms: dict = None

    def to_json(self):
        out = {
            "config": self.config,
            "stages": self.stages,
            "violations": self.violations,
            "error": self.error,
            "exit_code": self.exit_code,
            "seed": self.config.get("seed"),
            "versions": {"qidlab": __version__, "numpy": np.__version__},
        }
        if self.timings_ms is not None:
            out["timings_ms"] = self.timings_ms
        return out


def _check(report, name, value, bound):
    ok = value <= bound + BOUND_SLACK
    if not ok:
        report.violations.append({"check": name, "value": value, "bound": bound})
    return ok


def run_pipeline(config, out_dir=None):
    """Transmission code -> orthogonal code -> subset family -> ID codes.

    Returns an :class:`ExperimentReport`; ``exit_code`` is 0 on success, 2
    when a proven bound is violated, 3 for configuration problems and 4 for
    numerical failures.  With ``out_dir`` every artifact is written as JSON
    next to ``report.json``.
    """
    if isinstance(config, dict):
        try:
            config = ExperimentConfig.from_dict(config)
        except (ConfigError, TypeError) as exc:
            rep = ExperimentReport(config=dict(config) if isinstance(config, dict) else {})
            rep.error = {"stage": "config", "type": type(exc).__name__, "message": str(exc)}
            rep.exit_code = EXIT_CONFIG_ERROR
            return rep
    report = ExperimentReport(config=config.to_dict())
    timings = {}
    artifacts = {}
    stage = "channel"
    clock = time.perf_counter()

    def mark(name):
        nonlocal clock
        now = time.perf_counter()
        timings[name] = round(1000.0 * (now - clock), 3)
        clock = now

    try:
        channel = build_channel(config.channel, config.seed)
        la.check_dim(max(channel.in_dim, channel.out_dim) ** config.block_n)
        report.stages["channel"] = {"in_dim": channel.in_dim, "out_dim": channel.out_dim, "kraus_rank": len(channel.ops)}
        mark("channel")

        stage = "transmission"
        ck = dict(config.code)
        tcode = random_code(
            channel,
            config.block_n,
            config.M,
            seed=int(derive_rng(config.seed, "transmission").integers(2**31)),
            kind=ck.get("kind", "basis"),
            decoder=ck.get("decoder", "pgm"),
            spread=float(ck.get("spread", 0.1)),
            mix=float(ck.get("mix", 0.0)),
        )
        artifacts["tcode"] = tcode.to_json()
        report.stages["transmission"] = {
            "M": tcode.size,
            "avg_error": avg_error(tcode),
            "max_error": max_error(tcode),
            "errors": tcode.errors.tolist(),
        }
        mark("transmission")

        stage = "orthogonalize"
        ocode, orep = orthogonalize_code(tcode)
        artifacts["ocode"] = ocode.to_json()
        report.stages["orthogonalize"] = orep.to_json()
        _check(report, "orthogonal_gram", orep.gram_deviation, la.TOL_ORTH)
        _check(report, "orthogonal_delta", orep.delta_out, orep.bound_delta_clamped)
        _check(report, "orthogonal_size", -orep.M_prime, -orep.size_floor)
        mark("orthogonalize")

        delta = orep.delta_out if config.delta is None else float(config.delta)
        stage = "family"
        fam_cfg = config.family
        lam = fam_cfg.get("lambda")
        lam = delta if lam is None else float(lam)
        family = generate_family(
            ocode.size,
            float(fam_cfg["eps"]),
            lam,
            int(fam_cfg["count"]),
            seed=int(derive_rng(config.seed, "family").integers(2**31)),
            max_attempts=fam_cfg.get("max_attempts"),
            mode=fam_cfg.get("mode", "random"),
            warn=False,
        )
        fcheck = verify_family(family)
        artifacts["family"] = family.to_json()
        report.stages["family"] = {
            "N": len(family),
            "size": family.subset_size,
            "lambda": family.lam,
            "ok": fcheck.ok,
            "worst_overlap": fcheck.worst_overlap,
            "sufficient_condition": ad_condition(float(fam_cfg["eps"]), lam),
        }
        _check(report, "family_overlap", fcheck.worst_overlap, family.max_overlap)
        mark("family")

        stage = "loeber"
        lcode = build_loeber_code(ocode, family)
        lrep = verify_id_code(lcode)
        lb1, lb2 = loeber_bounds(ocode, family)
        lsize = check_size_bounds(lcode, lrep) if lrep.lambda1_max + lrep.lambda2_max < 1 else None
        artifacts["loeber_id"] = lcode.to_json()
        report.stages["loeber"] = {
            "report": lrep.to_json(),
            "bound_first": lb1,
            "bound_second": lb2,
            "size_bounds": None if lsize is None else lsize.to_json(),
        }
        _check(report, "loeber_first", lrep.lambda1_max, lb1)
        _check(report, "loeber_second", lrep.lambda2_max, lb2)
        if lsize is not None and not lsize.satisfied:
            report.violations.append({"check": "loeber_size", "value": lsize.N, "bound": lsize.general_bound})
        mark("loeber")

        stage = "zero_entropy"
        zcode = build_zero_entropy_code(ocode, family, seed=int(derive_rng(config.seed, "phases").integers(2**31)), trials=config.phase_trials, delta=delta)
        zrep = verify_id_code(zcode)
        zsize = check_size_bounds(zcode, zrep) if zrep.lambda1_max + zrep.lambda2_max < 1 else None
        artifacts["zero_entropy_id"] = zcode.to_json()
        report.stages["zero_entropy"] = {
            "report": zrep.to_json(),
            "delta": delta,
            "threshold_first": 3 * delta,
            "threshold_second": 5 * delta,
            "rejections": zcode.info["rejections"],
            "analytic_N_prime": zcode.info["analytic_N_prime"],
            "size_bounds": None if zsize is None else zsize.to_json(),
        }
        _check(report, "zero_entropy_first", zrep.lambda1_max, 3 * delta)
        _check(report, "zero_entropy_second", zrep.lambda2_max, 5 * delta)
        if zsize is not None and not zsize.satisfied:
            report.violations.append({"check": "zero_entropy_size", "value": zsize.N, "bound": zsize.pure_bound})
        mark("zero_entropy")

        if config.mc_samples:
            stage = "concentration"
            est = estimate_concentration(
                ocode, family, 0, delta, config.mc_samples, seed=int(derive_rng(config.seed, "concentration").integers(2**31))
            )
            report.stages["concentration"] = est.to_json()
            mark("concentration")
    except ConfigError as exc:
        report.error = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
        report.exit_code = EXIT_CONFIG_ERROR
    except (BadParams, DimGuardExceeded) as exc:
        report.error = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
        report.exit_code = EXIT_CONFIG_ERROR
    except PipelineFailure as exc:
        report.error = {"stage": f"{stage}/{exc.stage}", "type": type(exc.cause).__name__, "message": str(exc.cause)}
        report.exit_code = EXIT_NUMERICAL_FAILURE
    except QidError as exc:
        report.error = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
        report.exit_code = EXIT_NUMERICAL_FAILURE
    else:
        report.exit_code = EXIT_BOUND_VIOLATION if report.violations else EXIT_OK
    if config.record_timings:
        report.timings_ms = timings
    if out_dir is not None:
        out = Path(out_dir)
        for name, obj in artifacts.items():
            ser.write_json(out / f"{name}.json", obj)
        ser.write_json(out / "report.json", report.to_json())
    return report


def _set_path(d, dotted, value):
    keys = dotted.split(".")
    for k in keys[:-1]:
        d = d.setdefault(k, {})
    d[keys[-1]] = value


def grid_points(grid):
    """Cartesian product of ``{dotted.key: [values]}`` in lexicographic index order."""
    if not grid:
        raise BadParams("sweep grid is empty")
    keys = list(grid)
    for k in keys:
        if not isinstance(grid[k], (list, tuple)) or not grid[k]:
            raise BadParams(f"grid entry {k!r} needs a non-empty list")
    return keys, list(itertools.product(*(grid[k] for k in keys)))


SWEEP_COLUMNS = [
    "status",
    "exit_code",
    "M_prime",
    "delta_used",
    "bound_delta",
    "lambda1_max",
    "lambda2_max",
    "threshold_first",
    "threshold_second",
    "loeber_lambda1_max",
    "loeber_lambda2_max",
    "rejections",
    "analytic_N_prime",
    "runtime_ms",
]


def _format(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def _sweep_row(base, keys, values):
    cfg = copy.deepcopy(base)
    for k, v in zip(keys, values):
        _set_path(cfg, k, v)
    start = time.perf_counter()
    rep = run_pipeline(cfg)
    elapsed = 1000.0 * (time.perf_counter() - start)
    row = {"status": "ok" if rep.exit_code == 0 else ("violation" if rep.exit_code == 2 else f"error:{rep.error['type']}"),
           "exit_code": rep.exit_code}
    st = rep.stages
    if "orthogonalize" in st:
        row["M_prime"] = st["orthogonalize"]["M_prime"]
        row["bound_delta"] = st["orthogonalize"]["bound_delta"]
    if "zero_entropy" in st:
        z = st["zero_entropy"]
        row.update(
            delta_used=z["delta"],
            lambda1_max=z["report"]["lambda1_max"],
            lambda2_max=z["report"]["lambda2_max"],
            threshold_first=z["threshold_first"],
            threshold_second=z["threshold_second"],
            rejections=sum(z["rejections"]),
            analytic_N_prime=z["analytic_N_prime"],
        )
    if "loeber" in st:
        row["loeber_lambda1_max"] = st["loeber"]["report"]["lambda1_max"]
        row["loeber_lambda2_max"] = st["loeber"]["report"]["lambda2_max"]
    if base.get("record_timings"):
        row["runtime_ms"] = round(elapsed, 3)
    return row


def sweep(base_config, grid, threads=None):
    """Run the pipeline over a parameter grid and return CSV text.

    Rows follow the lexicographic order of the grid regardless of which
    worker finishes first.  Failing grid points are reported in the
    ``status`` column and do not stop the sweep.
    """
    keys, points = grid_points(grid)
    workers = min(thread_cap() if threads is None else threads, len(points))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(lambda vals: _sweep_row(base_config, keys, vals), points))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys + SWEEP_COLUMNS)
    for vals, row in zip(points, rows):
        writer.writerow([_format(v) for v in vals] + [_format(row.get(c)) for c in SWEEP_COLUMNS])
    return buf.getvalue()
