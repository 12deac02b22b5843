"""``qdframes`` command line.

Exit codes: 0 success (injective / solvable), 1 error, 2 not injective,
3 estimate is only a least-squares approximation. Errors are reported on
stderr as a single ``error: <kind>: <message>`` line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import construct, experiments
from .core import Field, Frame
from .estimate import estimate_state, random_state, simulate_measurements, validate_state
from .frame_ops import canonical_parseval
from .injectivity import check_injectivity
from .serialize import (
    dump_frame,
    frame_to_json,
    load_frame,
    load_measurements,
    load_operator,
    measurements_to_csv,
    operator_to_json,
)
from .tilde import Variant

EXIT_OK, EXIT_ERROR, EXIT_NOT_INJECTIVE, EXIT_APPROXIMATE = 0, 1, 2, 3


class CliError(Exception):
    """Invalid combination of arguments."""


def _emit_json(doc, out: str | None = None) -> None:
    text = json.dumps(doc, indent=2, allow_nan=False, default=_jsonable)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _frame_for_variant(frame: Frame, variant: Variant) -> Frame:
    if variant.field is Field.COMPLEX and frame.field is Field.REAL:
        return Frame(frame.vectors.astype(complex), Field.COMPLEX)
    if variant.field is Field.REAL and frame.field is Field.COMPLEX:
        raise CliError(f"variant {variant.value} needs a real frame")
    return frame


def cmd_construct(args) -> int:
    kind, n, seed = args.kind, args.dim, args.seed
    field = Field(args.field)
    if kind == "sum-pairs":
        frame = construct.sum_pairs(n)
    elif kind == "staircase":
        frame = construct.staircase_real(n, seed)
    elif kind == "staircase-complex":
        frame = construct.staircase_complex(n, seed)
    elif kind == "parseval":
        frame = construct.parseval_staircase(n, field=field, seed=seed)
    else:
        frame = construct.shift_frame(construct.ShiftFrameConfig(n, field=field))
    if args.out:
        dump_frame(frame, args.out)
    else:
        _emit_json(frame_to_json(frame))
    return EXIT_OK


def cmd_check(args) -> int:
    frame = load_frame(args.frame)
    variant = Variant(args.variant) if args.variant else Variant.default_for(frame.field)
    report = check_injectivity(_frame_for_variant(frame, variant), variant)
    if args.json:
        _emit_json(report.to_dict())
    else:
        verdict = "injective" if report.injective else "NOT injective"
        print(f"{args.frame}: {verdict} under {variant.value}")
        print(f"  vectors m = {report.m}, embedding dimension D = {report.embed_dim}, rank = {report.rank}")
        print(f"  smallest kept singular value = {report.smallest_kept_singular_value:.3e}"
              f" (tolerance {report.tolerance:.3e})")
    return EXIT_OK if report.injective else EXIT_NOT_INJECTIVE


def cmd_estimate(args) -> int:
    frame = load_frame(args.frame)
    variant = Variant(args.variant) if args.variant else Variant.default_for(frame.field)
    frame = _frame_for_variant(frame, variant)
    a = load_measurements(args.measurements)
    res = estimate_state(frame, a, args.mode, variant, trace=args.trace, fallback=True)
    doc = res.to_dict()
    if args.validate_state:
        v = validate_state(res.operator, args.state_tol)
        doc["validation"] = {
            "trace": v.trace,
            "min_eigenvalue": v.min_eigenvalue,
            "max_eigenvalue": v.max_eigenvalue,
            "is_psd": v.is_psd,
            "minors_ok": v.minors_ok,
            "is_state": v.is_state,
        }
    if args.out:
        _emit_json(operator_to_json(res.operator), args.out)
    _emit_json(doc)
    return EXIT_OK if res.solvable else EXIT_APPROXIMATE


def cmd_simulate(args) -> int:
    frame = load_frame(args.frame)
    rng = np.random.default_rng(args.seed)
    if args.state == "random":
        T = random_state(frame.n, frame.field, rng)
        if args.state_out:
            _emit_json(operator_to_json(T), args.state_out)
    else:
        T = load_operator(args.state)
    a = simulate_measurements(frame, T, args.sigma, rng)
    text = measurements_to_csv(a)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_parseval(args) -> int:
    frame = canonical_parseval(load_frame(args.frame))
    if args.out:
        dump_frame(frame, args.out)
    else:
        _emit_json(frame_to_json(frame))
    return EXIT_OK


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for item in pairs:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise CliError(f"parameter {item!r} is not of the form key=value")
        try:
            params[key.replace("-", "_")] = json.loads(raw)
        except json.JSONDecodeError:
            params[key.replace("-", "_")] = raw
    return params


def _run_experiment(name: str, p: dict, seed: int, trials: int | None,
                    workers: int) -> experiments.TrialSummary:
    def take(key, default):
        return p.pop(key, default)

    if name == "density":
        n = int(take("n", 2))
        field = Field(take("field", "real"))
        m = int(take("m", Variant.default_for(field).embed_dim(n)))
        summary = experiments.density_experiment(m, n, field, trials or 1000, seed, workers)
    elif name == "openness":
        n = int(take("n", 2))
        kind = take("frame", "sum-pairs")
        builders = {"sum-pairs": construct.sum_pairs, "staircase": construct.staircase_real,
                    "shift": construct.shift_frame}
        if kind not in builders:
            raise CliError(f"openness frame must be one of {sorted(builders)}")
        summary = experiments.openness_probe(builders[kind](n), float(take("epsilon", 1e-3)),
                                             trials or 100, seed, workers)
    elif name == "parseval-repair":
        summary = experiments.parseval_repair_experiment(int(take("n", 2)), take("field", "real"),
                                                         trials or 100, seed, int(take("extra", 0)))
    elif name == "riesz":
        summary = experiments.riesz_experiment(float(take("epsilon", 0.5)), trials or 100, seed,
                                               int(take("max_dim", 10)), take("field", "real"))
    else:
        summary = experiments.tilde_bound_experiment(trials or 1000, seed, int(take("max_dim", 20)))
    if p:
        raise CliError(f"unknown parameters for {name}: {sorted(p)}")
    return summary


def cmd_experiment(args) -> int:
    params = _parse_params(args.params)
    summary = _run_experiment(args.name, params, args.seed, args.trials, args.workers)
    _emit_json(summary.to_dict(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdframes", description="Injective frames and state estimation.")
    sub = parser.add_subparsers(dest="command", required=True)
    variants = [v.value for v in Variant]

    p = sub.add_parser("construct", help="write an injective frame")
    p.add_argument("--kind", required=True,
                   choices=["sum-pairs", "staircase", "staircase-complex", "parseval", "shift"])
    p.add_argument("--dim", type=int, required=True, help="dimension n (truncation N for shift)")
    p.add_argument("--field", choices=["real", "complex"], default="real",
                   help="field for parseval and shift (default: real)")
    p.add_argument("--seed", type=int, default=None, help="randomize the block bases")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", help="certify injectivity of a frame file")
    p.add_argument("--frame", required=True)
    p.add_argument("--variant", choices=variants)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("estimate", help="estimate an operator from measurements")
    p.add_argument("--frame", required=True)
    p.add_argument("--measurements", required=True)
    p.add_argument("--mode", choices=["exact", "lsq", "subset"], default="lsq")
    p.add_argument("--variant", choices=variants)
    p.add_argument("--trace", type=float, default=1.0, help="known trace for trace-one variants")
    p.add_argument("--validate-state", action="store_true")
    p.add_argument("--state-tol", type=float, default=1e-8)
    p.add_argument("--out", help="also write the operator file here")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="simulate a measurement record")
    p.add_argument("--frame", required=True)
    p.add_argument("--state", default="random", help='"random" or an operator JSON file')
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--state-out", help="write the random state here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("parseval", help="canonical Parseval frame S^{-1/2} x_k")
    p.add_argument("--frame", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_parseval)

    p = sub.add_parser("experiment", help="run a seeded Monte Carlo experiment")
    p.add_argument("--name", required=True, choices=["density", "openness", "parseval-repair", "riesz", "tilde-bound"])
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, TypeError, CliError, RuntimeError, AssertionError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
