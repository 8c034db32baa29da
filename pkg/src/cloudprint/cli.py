"""Command-line front end.

Exit codes for ``verify``: 0 when the verdict is "stolen", 1 when it is
"not-proven", 2 on any error. Other commands exit 0 on success and 2 on error.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import attacksim, fileio, synth, wmvuln
from .geometry import (RstParams, apply_rst, multiplane_rotation, random_rotation_in_plane,
                       random_unit_direction)
from .verifier import FingerprintVerifier

EXIT_STOLEN, EXIT_NOT_PROVEN, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _emit(d, out):
    if out:
        with open(out, "w") as fh:
            fileio.dump_report(d, fh)
    else:
        fileio.dump_report(d, sys.stdout)


def cmd_synth(args):
    try:
        cfg = synth.SynthConfig(N=args.n, n=args.dim, clusters=args.clusters,
                                suspect_noise=args.suspect_noise, innocent_noise=args.ref_noise,
                                seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    victim = synth.gen_victim(cfg)
    files = {"victim.ecf": victim,
             "suspect.ecf": synth.gen_suspect(victim, cfg.suspect_noise, [cfg.seed, 9])}
    for i, ref in enumerate(synth.gen_references(cfg, args.refs), start=1):
        files[f"ref_{i}.ecf"] = ref
    if args.innocent:
        files["innocent.ecf"] = synth.gen_innocent(cfg)
    for name, X in files.items():
        fileio.write_ecf(out / name, X)
    print(json.dumps({"written": sorted(files), "seed": cfg.seed}))
    return 0


def cmd_attack(args):
    X = fileio.read_ecf(args.input)
    try:
        spec = attacksim.AttackSpec(args.kind, args.degrees, args.scale, args.translate_len,
                                    args.order, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    Y, params = attacksim.attack(X, spec)
    fileio.write_ecf(args.output, Y)
    sidecar = args.params_out or f"{args.output}.params.json"
    with open(sidecar, "w") as fh:
        json.dump({"kind": spec.kind, "seed": spec.seed, "params": params.to_dict()}, fh)
    return 0


def cmd_verify(args):
    t0 = time.perf_counter()
    victim = fileio.read_ecf(args.victim)
    suspect = fileio.read_ecf(args.suspect)
    refs = [fileio.read_ecf(p) for p in args.refs]
    t1 = time.perf_counter()
    report = FingerprintVerifier(threshold=args.threshold).fit(victim, refs).verify(suspect)
    t2 = time.perf_counter()
    d = fileio.report_to_dict(report, seeds={},
                              timings_ms={"load": 1e3 * (t1 - t0), "verify": 1e3 * (t2 - t1)})
    _emit(d, args.out)
    return EXIT_STOLEN if report.stolen else EXIT_NOT_PROVEN


def _wm_embmarker(args, rng):
    n = args.dim
    scheme = wmvuln.EmbMarkerScheme.random(n, args.mix, rng)
    normal = np.array([random_unit_direction(n, rng) for _ in range(args.count)])
    trigger = np.array([wmvuln.embmarker_insert(e, scheme)
                        for e in (random_unit_direction(n, rng) for _ in range(args.count))])
    R = multiplane_rotation(n, args.degrees, rng)
    params = RstParams(R, args.scale, args.translate_len * random_unit_direction(n, rng))
    before = wmvuln.distribution_distance(normal, trigger, scheme.target)
    after = wmvuln.distribution_distance(apply_rst(normal, params),
                                         apply_rst(trigger, params), scheme.target)
    return {"statistic": "distribution_distance", "before": before, "after": after,
            "rotation": "multiplane"}


def _wm_linear(args, rng):
    scheme = wmvuln.LinearDecoderScheme.random(args.dim, args.bits, rng)
    e_m = random_unit_direction(args.dim, rng)
    rate = wmvuln.rotation_bit_flip_rate(scheme, e_m, args.trials, rng)
    return {"statistic": "bit_flip_rate", "before": 0.0, "after": rate,
            "bits": args.bits, "trials": args.trials, "expected_hamming": rate * args.bits}


def _wm_matrixkey(args, rng):
    n = args.dim
    scheme = wmvuln.MatrixKeyScheme.random(n, seed=rng)
    e_o = random_unit_direction(n, rng)
    d = args.translate_len * random_unit_direction(n, rng)
    R = random_rotation_in_plane(n, args.degrees, rng)
    return {
        "statistic": "decode_residual",
        "before": wmvuln.matrixkey_residual(scheme, e_o),
        "rotation": wmvuln.matrixkey_residual(scheme, e_o, RstParams(R)),
        "scaling": wmvuln.matrixkey_residual(scheme, e_o, wmvuln.scaling_attack(n, args.scale)),
        "translation": wmvuln.matrixkey_residual(scheme, e_o, wmvuln.translation_attack(d)),
        "scaling_predicted": abs(args.scale - 1.0) * float(np.linalg.norm(e_o)),
        "translation_predicted": float(np.linalg.norm(scheme.key_pinv @ d)),
    }


def cmd_wm_analyze(args):
    rng = np.random.default_rng(args.seed)
    handler = {"embmarker": _wm_embmarker, "linear": _wm_linear,
               "matrixkey": _wm_matrixkey}[args.scheme]
    d = {"schema_version": fileio.REPORT_SCHEMA_VERSION, "scheme": args.scheme,
         "dim": args.dim, "degrees": args.degrees, "scale": args.scale,
         "translate_len": args.translate_len, **handler(args, rng), "seeds": {"seed": args.seed}}
    _emit(d, args.out)
    return 0


def cmd_csv_import(args):
    fileio.write_ecf(args.output, fileio.read_csv(args.input))
    return 0


def cmd_csv_export(args):
    fileio.write_csv(args.output, fileio.read_ecf(args.input))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="cloudprint",
                                description="Embedding-cloud fingerprint verification under RST attacks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="write synthetic victim, suspect and reference clouds")
    s.add_argument("--n", type=int, default=5000, help="number of points N")
    s.add_argument("--dim", type=int, default=128)
    s.add_argument("--clusters", type=int, default=10)
    s.add_argument("--suspect-noise", type=float, default=0.01)
    s.add_argument("--ref-noise", type=float, default=0.3)
    s.add_argument("--refs", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--innocent", action="store_true", help="also write innocent.ecf")
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_synth)

    a = sub.add_parser("attack", help="apply a seeded RST attack to a cloud")
    a.add_argument("input")
    a.add_argument("output")
    a.add_argument("--kind", choices=attacksim.KINDS, default="mixed")
    a.add_argument("--degrees", type=float)
    a.add_argument("--scale", type=float)
    a.add_argument("--translate-len", type=float)
    a.add_argument("--order", default="R-S-T")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--params-out", help="ground-truth parameter JSON (default OUTPUT.params.json)")
    a.set_defaults(func=cmd_attack)

    v = sub.add_parser("verify", help="run alignment and the t-test; exit 0 stolen, 1 not proven")
    v.add_argument("--suspect", required=True)
    v.add_argument("--victim", required=True)
    v.add_argument("--refs", nargs="+", required=True)
    v.add_argument("--threshold", type=float, default=1e-3)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("wm-analyze", help="show how an RST attack breaks a watermark scheme")
    w.add_argument("--scheme", choices=("embmarker", "linear", "matrixkey"), required=True)
    w.add_argument("--dim", type=int, default=128)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--degrees", type=float, default=180.0)
    w.add_argument("--scale", type=float, default=1.0)
    w.add_argument("--translate-len", type=float, default=0.0)
    w.add_argument("--trials", type=int, default=10_000)
    w.add_argument("--bits", type=int, default=32)
    w.add_argument("--count", type=int, default=200, help="embeddings per set (embmarker)")
    w.add_argument("--mix", type=float, default=0.5)
    w.add_argument("--out")
    w.set_defaults(func=cmd_wm_analyze)

    ci = sub.add_parser("csv-import", help="convert CSV to ECF")
    ci.add_argument("input")
    ci.add_argument("output")
    ci.set_defaults(func=cmd_csv_import)

    ce = sub.add_parser("csv-export", help="convert ECF to CSV")
    ce.add_argument("input")
    ce.add_argument("output")
    ce.set_defaults(func=cmd_csv_export)
    return p


def _run(args):
    threads = os.environ.get("ECF_THREADS")
    if threads:
        from threadpoolctl import threadpool_limits
        with threadpool_limits(int(threads)):
            return args.func(args)
    return args.func(args)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        return _run(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"cloudprint {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
