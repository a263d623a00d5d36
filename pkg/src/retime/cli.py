"""Command-line interface: generate, align, verify, bench.

Exit codes: 0 on success, 1 when `verify` misses its optimality threshold,
2 on any input error (unreadable/malformed CSV, shape mismatch, bad config).
Results go to stdout in shortest round-trip float form so repeated runs
diff cleanly; progress and notices go to stderr, and --quiet silences
progress but never results.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np

from .bench import (
    ExperimentConfig,
    SignalSpec,
    comparison_experiment,
    derive_seed,
    emit_report,
    optimality_experiment,
)
from .dtw import dtw_full, fastdtw
from .errors import RetimeError
from .generate import TemplateSpec, generate_template, warped_pair
from .reparam import align_pair
from .signals import read_csv, write_csv

VERIFY_THRESHOLD = 95.0  # required optimality percentage at T >= 100


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master RNG seed")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument(
        "--quiet", action="store_true", help="suppress progress output (never results)"
    )

    parser = argparse.ArgumentParser(
        prog="retime",
        description="Signal alignment by constant-speed reparameterization, "
        "with DP-based baselines and a benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate synthetic signals")
    p.add_argument("--kind", choices=("trajectory3d", "highdim"), default="trajectory3d")
    p.add_argument("--T", type=int, required=True, help="samples per signal")
    p.add_argument("--n", type=int, default=None, help="dimensions (default 3 for trajectory3d)")
    p.add_argument("--modes", type=int, default=6, help="Fourier modes per dimension")
    p.add_argument("--pairs", type=int, default=0, help="warped pairs to emit alongside the template")
    p.add_argument("--roughness", type=float, default=0.5, help="warp roughness in (0, 1]")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("align", parents=[common], help="align two CSV signals and print the error")
    p.add_argument("a", help="first signal CSV")
    p.add_argument("b", help="second signal CSV")
    p.add_argument("--method", choices=("gora", "dtw", "fastdtw"), default="gora")
    p.add_argument("--radius", type=int, default=None, help="fastdtw search radius")
    p.add_argument("--emit", default=None, metavar="DIR", help="write warps/paths to DIR")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("verify", parents=[common], help="optimality-rate verification experiment")
    p.add_argument("--trials", type=int, default=100, help="trials per T (rounded up to a grid)")
    p.add_argument(
        "--T", type=int, nargs="+", default=list(range(20, 151, 10)), help="signal lengths to test"
    )
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="run the method-comparison benchmark")
    p.add_argument("--config", default=None, help="experiment config JSON")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RetimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _progress(args):
    if args.quiet:
        return None
    return lambda msg: print(msg, file=sys.stderr)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_gen(args) -> int:
    seed = 0 if args.seed is None else args.seed
    out = args.out or "."
    n = args.n if args.n is not None else (3 if args.kind == "trajectory3d" else None)
    if n is None:
        print("error: --n is required for highdim signals", file=sys.stderr)
        return 2
    spec = TemplateSpec(args.kind, args.T, n, seed, args.modes)
    template = generate_template(spec)
    os.makedirs(out, exist_ok=True)
    files = {"template": "template.csv"}
    write_csv(template, os.path.join(out, files["template"]))
    for p in range(args.pairs):
        a, b = warped_pair(template, derive_seed(seed, p), roughness=args.roughness)
        fa, fb = f"pair{p:02d}_a.csv", f"pair{p:02d}_b.csv"
        write_csv(a, os.path.join(out, fa))
        write_csv(b, os.path.join(out, fb))
        files[f"pair{p:02d}"] = [fa, fb]
    manifest = {
        "kind": spec.kind,
        "T": spec.T,
        "n": spec.n,
        "seed": spec.seed,
        "modes": spec.modes,
        "pairs": args.pairs,
        "roughness": args.roughness,
        "files": files,
    }
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    if not args.quiet:
        _note(f"wrote template + {args.pairs} pair(s) + manifest to {out}")
    return 0


def cmd_align(args) -> int:
    a = read_csv(args.a)
    b = read_csv(args.b)
    if a.T != b.T or a.n != b.n:
        print(
            f"error: signals have different shapes: ({a.T}, {a.n}) vs ({b.T}, {b.n})",
            file=sys.stderr,
        )
        return 2
    if args.radius is not None and args.method != "fastdtw":
        print("error: --radius only applies to --method fastdtw", file=sys.stderr)
        return 2

    if args.method == "gora":
        error, r1, r2 = align_pair(a, b)
        if args.emit:
            r1.save(os.path.join(args.emit, "a"))
            r2.save(os.path.join(args.emit, "b"))
    else:
        if args.method == "dtw":
            path = dtw_full(a, b)
        else:
            radius = args.radius
            if radius is None:
                radius = 1
                _note("notice: --radius not given, using fastdtw radius 1")
            path = fastdtw(a, b, radius)
        error = path.normalized
        if args.emit:
            os.makedirs(args.emit, exist_ok=True)
            np.savetxt(
                os.path.join(args.emit, "path.csv"), path.pairs, fmt="%d", delimiter=","
            )
    print(repr(float(error)))
    return 0


def cmd_verify(args) -> int:
    seed = 0 if args.seed is None else args.seed
    # Factor the requested trial count into a templates x warps grid; the
    # grid may round the total up, never down.
    templates = max(1, math.isqrt(args.trials - 1) + 1) if args.trials > 1 else 1
    warps = max(1, -(-args.trials // templates))
    config = ExperimentConfig(
        t_values=tuple(args.T),
        templates_per_t=templates,
        warps_per_template=warps,
        methods=("gora",),
        signal=SignalSpec(),
        master_seed=seed,
        threads=args.threads,
    )
    report = optimality_experiment(config, progress=_progress(args))
    print("T,percentage,trials")
    ok = True
    for row in report.optimality:
        print(f"{row.T},{float(row.percentage)!r},{row.trials}")
        if row.T >= 100 and row.percentage < VERIFY_THRESHOLD:
            ok = False
    if args.out:
        emit_report(report, args.out)
    return 0 if ok else 1


def cmd_bench(args) -> int:
    config = ExperimentConfig() if args.config is None else ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.threads is not None:
        config = replace(config, threads=args.threads)
    out = args.out or config.output_dir
    if out is None:
        print(
            "error: no output directory; pass --out or set output_dir in the config",
            file=sys.stderr,
        )
        return 2
    report = comparison_experiment(config, progress=_progress(args))
    emit_report(report, out)
    print(out)
    return 0
