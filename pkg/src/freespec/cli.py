"""Command-line interface.

Every subcommand prints a JSON report (also written to ``--out`` when given).
Exit codes: 0 pass, 1 fail or forbidden witness found, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import autanalysis as aut
from . import jsonio
from .cstar import check_hypotheses
from .errors import FreespecError
from .freesets import (
    DEFAULT_EPS,
    example_context_s2,
    fp_membership_quad,
    in_row_ball,
    in_spectraball,
    make_E,
    make_Ec,
    make_Er,
    pseudo_ellipse_context,
)
from .linalg import random_complex
from .sampling import gaussian_tuple, trial_rng
from .suites import SUITES, RunConfig, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PENCILS = ("fP", "BE", "BEr", "BEc", "row-ball")


def _levels(text: str) -> list[int]:
    try:
        levels = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from exc
    if not levels or min(levels) < 1:
        raise argparse.ArgumentTypeError("levels must be positive integers")
    return levels


def _emit(report, out) -> None:
    text = jsonio.dumps(report)
    sys.stdout.write(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text)


def _config(args) -> RunConfig:
    return RunConfig(eps=args.eps, seed=args.seed, samples=args.samples, levels=args.levels, workers=args.workers)


def cmd_check_hypotheses(args) -> int:
    ctx = jsonio.decode_context(jsonio.load_json(args.context))
    report = check_hypotheses(ctx)
    _emit(report, args.out)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def cmd_membership(args) -> int:
    ctx = jsonio.decode_context(jsonio.load_json(args.context))
    X = jsonio.decode_tuple(jsonio.load_json(args.tuple))
    if X.shape[0] != 2:
        raise FreespecError(f"expected a pair (g=2), got g={X.shape[0]}")
    report = {"pencil": args.pencil}
    if args.pencil == "fP":
        quad = fp_membership_quad(ctx, X, args.eps)
        report["tests"] = quad
        report["classification"] = quad["L"]
    elif args.pencil == "row-ball":
        report["delta"] = args.delta
        report["classification"] = in_row_ball(X, args.delta, args.eps)
    else:
        G = {"BE": make_E, "BEr": make_Er, "BEc": make_Ec}[args.pencil](ctx)
        report["classification"] = in_spectraball(G, X, args.eps)
    _emit(report, args.out)
    return EXIT_PASS


def cmd_verify(args) -> int:
    ctx = jsonio.decode_context(jsonio.load_json(args.context))
    report = run_suite(args.suite, ctx, _config(args))
    _emit(report, args.out)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def cmd_jet_analyze(args) -> int:
    ctx = jsonio.decode_context(jsonio.load_json(args.context))
    jet = jsonio.decode_jet(jsonio.load_json(args.jet))
    report = {"jet": jet, "b_margin": aut.b_margin(jet, ctx)}
    if report["b_margin"] <= 0:
        report["verdict"] = "invalid-jet"
        report["reason"] = "b lies outside the level-one domain"
        _emit(report, args.out)
        return EXIT_FAIL
    cls = aut.classify_jet(jet, ctx)
    report["classification"] = cls
    if ctx.invertible():
        report["pres1_residual"] = aut.residual_pres1(jet, ctx)
    residuals = []
    for i in range(args.samples):
        rng = trial_rng(args.seed, "jet-analyze:althfp", i)
        n = args.levels[i % len(args.levels)]
        residuals.append(aut.verify_althfP(jet, ctx, random_complex((2, n, n), rng)))
    report["althfP_max_residual"] = max(residuals)
    probe = aut.ball_agreement_probe(
        jet, ctx, levels=args.levels, trials=args.samples * len(args.levels), seed=args.seed,
        eps=args.eps, workers=args.workers,
    )
    report["probe"] = probe
    verdict = cls["verdict"]
    if verdict == "undetermined" and probe["witness"] is not None:
        verdict = "refuted-by-probe"
    report["verdict"] = verdict
    forbidden = cls["verdict"] == "trivial" and probe["witness"] is not None
    _emit(report, args.out)
    if forbidden or verdict in ("violates-necessary-conditions", "refuted-by-probe"):
        return EXIT_FAIL
    return EXIT_PASS


def cmd_gen_random(args) -> int:
    rng = trial_rng(args.seed, f"gen-random:{args.kind}")
    if args.kind == "context":
        if args.s == 1:
            ctx = pseudo_ellipse_context()
        elif args.s == 2 and args.example:
            ctx = example_context_s2()
        else:
            from .freesets import PencilContext

            ctx = PencilContext(random_complex((args.s, args.s), rng), random_complex((args.s, args.s), rng))
        payload = jsonio.encode_context(ctx)
    elif args.kind == "tuple":
        payload = jsonio.encode_tuple(args.scale * gaussian_tuple(2, args.n, rng))
    else:
        ctx = jsonio.decode_context(jsonio.load_json(args.context)) if args.context else pseudo_ellipse_context()
        payload = jsonio.encode_jet(aut.random_jet(ctx, rng))
    _emit(payload, args.out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freespec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, run=False):
        p.add_argument("--out", help="also write the JSON report here")
        p.add_argument("--eps", type=float, default=DEFAULT_EPS, help="classification margin band")
        if run:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--levels", type=_levels, default=[1, 2, 3], help="comma-separated, e.g. 1,2,3")
            p.add_argument("--workers", type=int, default=1, help="trial-level threads")

    p = sub.add_parser("check-hypotheses", help="invertibility and generation hypotheses of a context")
    p.add_argument("context")
    common(p)
    p.set_defaults(func=cmd_check_hypotheses)

    p = sub.add_parser("membership", help="classify a pair against one of the pencils")
    p.add_argument("context")
    p.add_argument("tuple")
    p.add_argument("--pencil", choices=PENCILS, default="fP")
    p.add_argument("--delta", type=float, default=1.0, help="radius for --pencil row-ball")
    common(p)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("context")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    common(p, run=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("jet-analyze", help="necessary conditions and probes for an automorphism jet")
    p.add_argument("context")
    p.add_argument("jet")
    common(p, run=True)
    p.set_defaults(func=cmd_jet_analyze)

    p = sub.add_parser("gen-random", help="emit a sample context, tuple or jet")
    p.add_argument("kind", choices=("context", "tuple", "jet"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=int, default=1, help="context size")
    p.add_argument("--example", action="store_true", help="with --s 2, the fixed example pair")
    p.add_argument("--n", type=int, default=2, help="tuple level")
    p.add_argument("--scale", type=float, default=0.3, help="tuple entry scale")
    p.add_argument("--context", help="context file for jet sampling")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (FreespecError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
