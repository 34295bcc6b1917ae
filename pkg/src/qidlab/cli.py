"""Command line interface: ``qidlab <subcommand> ...``.

Exit codes: 0 success, 2 bound violation, 3 configuration error,
4 numerical failure.
"""

import argparse
import json
import logging
import sys

import numpy as np

from . import counterexample as cx
from . import serialization as ser
from .designs import SubsetFamily, generate_family, verify_family
from .errors import BadParams, DimGuardExceeded, PipelineFailure, QidError
from .harness import (
    EXIT_BOUND_VIOLATION,
    EXIT_CONFIG_ERROR,
    EXIT_NUMERICAL_FAILURE,
    EXIT_OK,
    ConfigError,
    build_channel,
    run_pipeline,
    sweep,
)
from .idcodes import (
    IdCode,
    build_loeber_code,
    build_zero_entropy_code,
    check_size_bounds,
    verify_id_code,
)
from .orthogonal import orthogonalize_code
from .transmission import TransmissionCode, random_code

log = logging.getLogger("qidlab")


def _emit(obj, path):
    if path:
        ser.write_json(path, obj)
    else:
        sys.stdout.write(ser.dumps(obj))


def cmd_gen_channel(args):
    spec = {"kind": args.kind, "dim": args.dim}
    for key in ("p", "gamma", "dA", "dC", "d_in", "d_out", "rank"):
        val = getattr(args, key)
        if val is not None:
            spec[key] = val
    _emit(ser.channel_to_json(build_channel(spec, args.seed)), args.out)
    return EXIT_OK


def cmd_gen_code(args):
    ch = ser.channel_from_json(ser.read_json(args.channel))
    code = random_code(
        ch, args.n, args.messages, args.seed, kind=args.kind, decoder=args.decoder, spread=args.spread, mix=args.mix
    )
    _emit(code.to_json(), args.out)
    return EXIT_OK


def cmd_orthogonalize(args):
    code = TransmissionCode.from_json(ser.read_json(args.code))
    ocode, rep = orthogonalize_code(code)
    _emit(ocode.to_json(), args.out)
    if args.report:
        ser.write_json(args.report, rep.to_json())
    ok = rep.delta_out <= rep.bound_delta_clamped + 1e-9 and rep.M_prime >= rep.size_floor
    return EXIT_OK if ok else EXIT_BOUND_VIOLATION


def cmd_gen_family(args):
    fam = generate_family(args.M, args.eps, args.lam, args.count, seed=args.seed, mode=args.mode)
    _emit(fam.to_json(), args.out)
    return EXIT_OK if verify_family(fam).ok else EXIT_BOUND_VIOLATION


def cmd_build_id(args):
    code = TransmissionCode.from_json(ser.read_json(args.code))
    fam = SubsetFamily.from_json(ser.read_json(args.family))
    if args.mode == "loeber":
        idc = build_loeber_code(code, fam)
    else:
        idc = build_zero_entropy_code(code, fam, seed=args.seed, trials=args.trials, delta=args.delta)
    _emit(idc.to_json(), args.out)
    return EXIT_OK


def cmd_verify_id(args):
    idc = IdCode.from_json(ser.read_json(args.code))
    rep = verify_id_code(idc)
    out = rep.to_json()
    status = EXIT_OK
    info = idc.info
    if "threshold_first" in info:
        out["threshold_first"] = info["threshold_first"]
        out["threshold_second"] = info["threshold_second"]
        if rep.lambda1_max > info["threshold_first"] + 1e-9 or rep.lambda2_max > info["threshold_second"] + 1e-9:
            status = EXIT_BOUND_VIOLATION
    if rep.lambda1_max + rep.lambda2_max < 1:
        size = check_size_bounds(idc, rep, d=args.d)
        out["size_bounds"] = size.to_json()
        if not size.satisfied:
            status = EXIT_BOUND_VIOLATION
    else:
        out["size_bounds"] = None
    out["N"] = len(idc)
    out["zero_entropy"] = idc.zero_entropy
    out["simultaneous"] = idc.simultaneity is not None
    _emit(out, args.report)
    return status


def cmd_counterexample(args):
    inst = cx.build_counterexample(args.K, args.M)
    phases = None
    if args.phases:
        phases = [float(p) for p in args.phases.split(",")]
    rec = cx.summary(inst, phases=phases, samples=args.samples, seed=args.seed)
    sys.stdout.write(json.dumps(rec, sort_keys=True) + "\n")
    return EXIT_OK if rec["fixed_phase_detection"] <= 1e-7 else EXIT_BOUND_VIOLATION


def cmd_pipeline(args):
    cfg = ser.read_json(args.config)
    rep = run_pipeline(cfg, out_dir=args.out_dir)
    if args.out_dir is None:
        sys.stdout.write(ser.dumps(rep.to_json()))
    if rep.error:
        log.error("pipeline failed in %s: %s", rep.error["stage"], rep.error["message"])
    return rep.exit_code


def cmd_sweep(args):
    base = ser.read_json(args.config)
    grid = ser.read_json(args.grid)
    text = sweep(base, grid, threads=args.threads)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="qidlab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-channel", help="write a channel in Kraus form")
    s.add_argument("--kind", required=True,
                   choices=["identity", "trace", "extended", "depolarizing", "dephasing", "amplitude_damping", "random"])
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--p", type=float)
    s.add_argument("--gamma", type=float)
    s.add_argument("--dA", type=int)
    s.add_argument("--dC", type=int)
    s.add_argument("--d-in", dest="d_in", type=int)
    s.add_argument("--d-out", dest="d_out", type=int)
    s.add_argument("--rank", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen_channel)

    s = sub.add_parser("gen-code", help="generate a seeded transmission code")
    s.add_argument("--channel", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--messages", type=int, required=True)
    s.add_argument("--kind", choices=["haar", "basis", "perturbed"], default="haar")
    s.add_argument("--decoder", choices=["pgm", "projective"], default="pgm")
    s.add_argument("--spread", type=float, default=0.1)
    s.add_argument("--mix", type=float, default=0.0)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen_code)

    s = sub.add_parser("orthogonalize", help="pure orthogonal code from an average-error code")
    s.add_argument("--code", required=True)
    s.add_argument("--out")
    s.add_argument("--report")
    s.set_defaults(func=cmd_orthogonalize)

    s = sub.add_parser("gen-family", help="subset family with bounded overlaps")
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=["random", "exhaustive"], default="random")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen_family)

    s = sub.add_parser("build-id", help="build an identification code")
    s.add_argument("--mode", choices=["loeber", "zero-entropy"], required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--family", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--delta", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_build_id)

    s = sub.add_parser("verify-id", help="error report of an identification code")
    s.add_argument("--code", required=True)
    s.add_argument("--report")
    s.add_argument("--d", type=int, help="dimension used in the size bound")
    s.set_defaults(func=cmd_verify_id)

    s = sub.add_parser("counterexample", help="fixed-phase failure instance")
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--M", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--phases")
    g.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("pipeline", help="seeded end-to-end experiment")
    s.add_argument("--config", required=True)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("sweep", help="pipeline over a parameter grid, CSV output")
    s.add_argument("--config", required=True)
    s.add_argument("--grid", required=True)
    s.add_argument("--threads", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, BadParams, DimGuardExceeded, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG_ERROR
    except PipelineFailure as exc:
        log.error("%s", exc)
        return EXIT_NUMERICAL_FAILURE
    except (QidError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
