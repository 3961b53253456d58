"""Command-line front end: prepare environments, evaluate, solve, export data.

Exit codes: 0 success, 1 verification failures, 2 domain error,
3 convergence error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__, superlog
from .approx import (
    Candidate,
    SolverConfig,
    TargetFn,
    additive_correct,
    genetic_solve,
    ica_solve,
    result_to_dict,
    riemann_loss,
)
from .errors import ConvergenceError, DomainError
from .expressions import compile_expression
from .spline import LinearSpline
from .verify import run_all

_TARGET_SPECS = {
    "sin": (np.sin, (-math.pi, math.pi)),
    "exp": (np.exp, (-2.0, 2.0)),
    "shift": (lambda x: x + 1.0, (0.0, 3.0)),
    "quad": (lambda x: 1.0 + x * x, (-1.0, 1.0)),
}


def _g17(value) -> str:
    return format(float(value), ".17g")


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else _g17(cell) for cell in row])


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ": "), indent=1)
        fh.write("\n")


def _build_target(args) -> TargetFn:
    if args.target == "expr":
        if not args.expr:
            raise DomainError("--target expr requires --expr with the expression text")
        if args.interval is None:
            raise DomainError("--target expr requires an explicit --interval")
        fn = compile_expression(args.expr)
        label = args.expr
        domain = tuple(args.interval)
    else:
        fn, default_domain = _TARGET_SPECS[args.target]
        label = args.target
        domain = tuple(args.interval) if args.interval else default_domain
    return TargetFn(fn=fn, label=label, domain=domain)


def _parse_k(text) -> int:
    k = Fraction(text)
    if k.denominator != 1 or k < 1:
        raise DomainError(f"solvers need an integer iterate order k >= 1, got {text!r}")
    return int(k)


# --- subcommands --------------------------------------------------------------


def cmd_prepare(args) -> int:
    env = superlog.prepare(base=args.base, order=args.order)
    superlog.save_env(env, args.out)
    residual = superlog.abel_residual(env)
    print(f"environment written to {args.out}")
    print(f"base {_g17(env.base)}, order {env.order}")
    print(f"shift-identity gate residual {residual:.3e} (tolerance {1e-5 if env.order >= 10 else 1e-3:.0e})")
    return 0


def cmd_eval(args) -> int:
    env = superlog.load_env(args.env)
    if args.fn == "slog":
        value = superlog.slog(env, args.x)
    elif args.fn == "tet":
        value = superlog.tetrate(env, args.x)
    else:
        if args.n is None:
            raise DomainError("--fn iterate requires --n")
        value = superlog.iterate(env, args.n, args.x)
    print(f"{value:.15g}")
    return 0


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        grid_points=args.grid,
        iterations=args.iterations,
        population=args.population,
        elite_fraction=args.elite_fraction,
        temperature=args.temperature,
        temperature_decay=args.temperature_decay,
        tau=args.tau,
        seed=args.seed,
    )


def cmd_solve(args) -> int:
    target = _build_target(args)
    cfg = _solver_config(args)
    history = []

    if args.method == "genetic":
        if not args.repr or not args.terms:
            raise DomainError("genetic solving requires --repr and --terms")
        k = _parse_k(args.k)
        cand, report, history = genetic_solve(
            target, args.repr, args.terms, k, cfg, log_every=args.log_every
        )
        history_rows = list(enumerate(history))
    elif args.method == "ica":
        cand, report, x_star, w_star = ica_solve(
            target, cfg, on_round=lambda rnd, loss: history.append((rnd, loss))
        )
        print(f"best seed pair x_i* = {x_star:.6g}, w* = {w_star:.6g}")
        history_rows = history
    else:
        a, b = target.domain
        g0 = Candidate.from_spline(LinearSpline([a, b], [a, b]), k=2)
        cand, report = additive_correct(
            target, g0, cfg, on_iteration=lambda it, loss: history.append((it, loss))
        )
        history_rows = history

    result = result_to_dict(cand, report, cfg)
    result["config"]["method"] = args.method
    result["config"]["target"] = target.label
    result["config"]["interval"] = list(target.domain)

    history_path = os.path.splitext(args.out)[0] + ".history.csv"
    manifest_path = os.path.splitext(args.out)[0] + ".manifest.json"
    written = []
    try:
        _write_json(args.out, result)
        written.append(args.out)
        _write_csv(history_path, ["generation", "best_loss"], history_rows)
        written.append(history_path)
        manifest = {
            "command": "solve",
            "parameters": {key: value for key, value in sorted(vars(args).items()) if key != "func"},
            "seed": cfg.seed,
            "outputs": [args.out, history_path],
            "tool_version": __version__,
        }
        _write_json(manifest_path, manifest)
        written.append(manifest_path)
    except BaseException:
        for path in written:
            try:
                os.unlink(path)
            except OSError:
                pass
        raise
    print(f"final loss {report.loss:.6e}")
    print(f"result written to {args.out}")
    return 0


def _candidate_from_result(payload) -> Candidate:
    k_raw = payload["k"]
    k = int(k_raw) if isinstance(k_raw, int) else Fraction(k_raw)
    if payload["repr"] == "spline":
        knots = payload["knots"]
        spline = LinearSpline([p[0] for p in knots], [p[1] for p in knots])
        return Candidate.from_spline(spline, k=k)
    return Candidate(kind=payload["repr"], coeffs=np.array(payload["coeffs"]), k=k)


def _target_from_result(payload) -> TargetFn:
    config = payload.get("config", {})
    label = config.get("target")
    interval = tuple(config.get("interval", ()))
    if label is None or not interval:
        raise DomainError("result file does not record its target; cannot rebuild f")
    fn = _TARGET_SPECS[label][0] if label in _TARGET_SPECS else compile_expression(label)
    return TargetFn(fn=fn, label=label, domain=interval)


def cmd_plotdata(args) -> int:
    if args.what == "loss-history":
        with open(args.source, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0][:2] != ["generation", "best_loss"]:
            raise DomainError(f"{args.source} is not a loss-history CSV")
        _write_csv(args.out, ["generation", "best_loss"], [(int(r[0]), float(r[1])) for r in rows[1:]])
        print(f"plot data written to {args.out}")
        return 0

    with open(args.source, "r", encoding="utf-8") as fh:
        payload = json.load(fh)

    if "coeffs" in payload and "base" in payload:
        env = superlog.env_from_json(json.dumps(payload))
        interval = tuple(args.interval) if args.interval else (0.0, 2.0)
        xs = np.linspace(interval[0], interval[1], args.points)
        f_vals = [math.exp(float(x)) for x in xs]
        gg_vals = [
            superlog.iterate(env, 0.5, superlog.iterate(env, 0.5, float(x))) for x in xs
        ]
    else:
        cand = _candidate_from_result(payload)
        target = _target_from_result(payload)
        interval = tuple(args.interval) if args.interval else target.domain
        xs = np.linspace(interval[0], interval[1], args.points)
        f_vals = [float(target.fn(float(x))) for x in xs]
        k = cand.k if isinstance(cand.k, int) else 2
        gg_vals = [float(cand.iterated(float(x), k)) for x in xs]

    if args.what == "overlay":
        _write_csv(args.out, ["x", "f", "gg"], zip(xs.tolist(), f_vals, gg_vals))
    else:
        residuals = [abs(gg - fv) / (1.0 + abs(fv)) for gg, fv in zip(gg_vals, f_vals)]
        _write_csv(
            args.out,
            ["x", "f", "gg", "residual"],
            zip(xs.tolist(), f_vals, gg_vals, residuals),
        )
    print(f"plot data written to {args.out}")
    return 0


def cmd_verify(args) -> int:
    env = superlog.load_env(args.env) if args.env else None
    results = run_all(env)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failures += 1
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    if env is None:
        print("(no environment supplied; slog suites skipped)")
    return 1 if failures else 0


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraciter",
        description="Fractional function iteration: super-logarithm tetration and functional-root solvers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="build and persist a super-logarithm environment")
    p.add_argument("--base", type=float, default=math.e)
    p.add_argument("--order", type=int, default=30)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("eval", help="evaluate slog, tetration, or a fractional iterate")
    p.add_argument("--env", required=True)
    p.add_argument("--fn", choices=["slog", "tet", "iterate"], required=True)
    p.add_argument("--n", type=float, default=None, help="iterate order (for --fn iterate)")
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("solve", help="approximate a functional root of a target")
    p.add_argument("--method", choices=["ica", "additive", "genetic"], required=True)
    p.add_argument("--target", choices=["sin", "exp", "shift", "quad", "expr"], required=True)
    p.add_argument("--expr", default=None, help="expression text for --target expr")
    p.add_argument("--repr", choices=["fourier", "taylor", "spline"], default=None)
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--k", default="2", help="iterate order (integer)")
    p.add_argument("--interval", type=float, nargs=2, default=None, metavar=("A", "B"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--iterations", "--generations", type=int, default=None, dest="iterations")
    p.add_argument("--population", type=int, default=200)
    p.add_argument("--elite-fraction", type=float, default=0.1)
    p.add_argument("--temperature", type=float, default=0.5)
    p.add_argument("--temperature-decay", type=float, default=0.995)
    p.add_argument("--tau", type=float, default=0.3)
    p.add_argument("--log-every", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("plotdata", help="export overlay / residual / loss-history CSV")
    p.add_argument("--source", required=True, help="environment JSON, result JSON, or history CSV")
    p.add_argument("--what", choices=["residual", "overlay", "loss-history"], required=True)
    p.add_argument("--interval", type=float, nargs=2, default=None, metavar=("A", "B"))
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("verify", help="run the identity suites")
    p.add_argument("--env", default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, OverflowError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
