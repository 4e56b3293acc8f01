"""Command-line front end: ``qaoa-lab <command> ...``.

Exit status is 0 on success, 1 on a usage error and 2 on a numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .amplitude import ProblemSize
from .concentration import SweepRecord, concentration_points, fit_layer_curves, fit_scaling, sweep, \
    transfer_experiment
from .errors import CapacityError, ParameterMismatchError, QAOALabError
from .optimizer import SEEDINGS, OptimizerConfig, multistart_maximize
from .records import FORMATS, RunConfig, dumps_records, fmt_float, load_records, timestamp

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

log = logging.getLogger("qaoa_lab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_at_least(low):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < low:
            raise argparse.ArgumentTypeError(f"must be >= {low}, got {value}")
        return value
    return parse


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return value


def _add_optimizer_flags(sub, restarts=32):
    sub.add_argument("--restarts", type=_int_at_least(1), default=restarts)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--tol", type=_positive_float, default=1e-10,
                     help="gradient-norm tolerance on the scaled overlap")
    sub.add_argument("--max-iter", type=_int_at_least(1), default=10000)
    sub.add_argument("--seeding", choices=SEEDINGS, default="hybrid")


def _add_output_flags(sub, default_format="json"):
    sub.add_argument("--out", help="output file (default: stdout)")
    sub.add_argument("--format", choices=FORMATS, default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qaoa-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = subs.add_parser("solve", help="optimal angles for one (n, p)")
    s.add_argument("--n", type=_int_at_least(1), required=True)
    s.add_argument("--p", type=_int_at_least(1), required=True)
    _add_optimizer_flags(s)
    _add_output_flags(s)

    s = subs.add_parser("sweep", help="optimal angles for a range of n")
    s.add_argument("--n-min", type=_int_at_least(2), required=True)
    s.add_argument("--n-max", type=_int_at_least(2), required=True)
    s.add_argument("--p", type=_int_at_least(1), required=True)
    _add_optimizer_flags(s)
    _add_output_flags(s, "csv")

    s = subs.add_parser("analyze", help="concentration distances and scaling fit")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--n-min", type=_int_at_least(1))
    s.add_argument("--n-max", type=_int_at_least(1))
    s.add_argument("--out")

    s = subs.add_parser("fit", help="fit beta = pi/(a1 n + a2), gamma = b1 pi - b2 beta")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--layer", type=_int_at_least(1), required=True)
    s.add_argument("--n-min", type=_int_at_least(1), required=True)
    s.add_argument("--n-max", type=_int_at_least(1), required=True)
    s.add_argument("--out")

    s = subs.add_parser("transfer", help="train at w qubits, warm-start at n")
    s.add_argument("--w", type=_int_at_least(2), required=True)
    s.add_argument("--n", type=_int_at_least(3), required=True)
    s.add_argument("--p", type=_int_at_least(1), required=True)
    _add_optimizer_flags(s)
    s.add_argument("--out")

    s = subs.add_parser("verify", help="closed form vs statevector, gradient vs finite differences")
    s.add_argument("--n-max", type=_int_at_least(1), default=12)
    s.add_argument("--p-max", type=_int_at_least(1), default=4)
    s.add_argument("--samples", type=_int_at_least(1), default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")

    s = subs.add_parser("plot", help="SVG figure from a record file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--kind", choices=("angles", "branches", "scaling"), required=True)
    s.add_argument("--layer", type=_int_at_least(1))
    s.add_argument("--out", required=True)
    return parser


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, max_iter=args.max_iter, grad_tol=args.tol,
                           rng_seed=args.seed, seeding=args.seeding)


def _run_config(args) -> RunConfig:
    options = {k: v for k, v in sorted(vars(args).items())
               if k not in ("command", "out", "format", "verbose", "seed")}
    return RunConfig(command=args.command, options=options, rng_seed=getattr(args, "seed", 0),
                     output=getattr(args, "out", None), format=getattr(args, "format", "json"))


_RAW = "@@raw@@"


def _raw_floats(obj):
    """Tag floats so they can be spliced in with 17 significant digits."""
    if isinstance(obj, float):
        return f"{_RAW}{fmt_float(obj)}{_RAW}"
    if isinstance(obj, dict):
        return {k: _raw_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_raw_floats(v) for v in obj]
    return obj


def _dumps(doc) -> str:
    text = json.dumps(_raw_floats(doc), indent=2)
    return text.replace(f'"{_RAW}', "").replace(f'{_RAW}"', "") + "\n"


def _document(config: RunConfig, body: dict) -> str:
    return _dumps({"config": config.to_dict(), "timestamp": timestamp(), **body})


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _result_dict(res) -> dict:
    return {
        "n": res.n, "p": res.p,
        "gammas": list(res.params.gammas), "betas": list(res.params.betas),
        "overlap_scaled": res.overlap.scaled, "overlap": res.overlap.f,
        "objective": res.overlap.objective, "grad_norm": res.grad_norm,
        "iterations": res.iterations, "restarts_used": res.restarts_used,
        "branch": res.branch,
    }


def _cmd_solve(args) -> int:
    res = multistart_maximize(ProblemSize(args.n, args.p), _optimizer_config(args))
    config = _run_config(args)
    if args.format == "csv":
        text = dumps_records([SweepRecord(args.n, args.p, res, 0.0, args.seed)], "csv", config)
    else:
        text = _document(config, {"result": _result_dict(res)})
    _write(text, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.n_max < args.n_min:
        raise UsageError("--n-max must be >= --n-min")
    records = sweep(args.n_min, args.n_max, args.p, _optimizer_config(args))
    _write(dumps_records(records, args.format, _run_config(args)), args.out)
    return EXIT_OK


def _select(records, n_min, n_max):
    return [r for r in records
            if (n_min is None or r.n >= n_min) and (n_max is None or r.n <= n_max)]


def _cmd_analyze(args) -> int:
    source, records = load_records(args.infile)
    records = _select(records, args.n_min, args.n_max)
    depths = sorted({r.p for r in records})
    analysis = []
    for p in depths:
        points = concentration_points([r for r in records if r.p == p])
        entry = {"p": p, "points": [{"n": pt.n, "delta_sq": pt.delta_sq} for pt in points]}
        if len(points) >= 5:
            entry["fit"] = asdict(fit_scaling(points))
        analysis.append(entry)
    body = {"source_config": source, "analysis": analysis}
    _write(_document(_run_config(args), body), args.out)
    return EXIT_OK


def _cmd_fit(args) -> int:
    source, records = load_records(args.infile)
    fit = fit_layer_curves(records, args.layer, args.n_min, args.n_max)
    _write(_document(_run_config(args), {"source_config": source, "fit": asdict(fit)}), args.out)
    return EXIT_OK


def _cmd_transfer(args) -> int:
    if args.w >= args.n:
        raise UsageError("--w must be smaller than --n")
    rep = transfer_experiment(args.w, args.n, args.p, _optimizer_config(args))
    body = {"report": {
        "w": rep.w, "n": rep.n, "p": rep.p,
        "cold_iters": rep.cold_iters, "cold_iters_per_restart": rep.cold_iters_per_restart,
        "warm_iters": rep.warm_iters, "overlap_gap": rep.overlap_gap,
        "trained": _result_dict(rep.trained), "warm": _result_dict(rep.warm),
        "cold": _result_dict(rep.cold),
    }}
    _write(_document(_run_config(args), body), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_verification
    report = run_verification(args.n_max, args.p_max, args.samples, args.seed)
    _write(_document(_run_config(args), {"report": report}), args.out)
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


def _cmd_plot(args) -> int:
    from .plots import emit_plot
    _, records = load_records(args.infile)
    emit_plot(records, args.kind, args.out, layer=args.layer)
    return EXIT_OK


COMMANDS = {
    "solve": _cmd_solve, "sweep": _cmd_sweep, "analyze": _cmd_analyze, "fit": _cmd_fit,
    "transfer": _cmd_transfer, "verify": _cmd_verify, "plot": _cmd_plot,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParameterMismatchError, CapacityError) as exc:
        print(f"qaoa-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QAOALabError, FloatingPointError, ArithmeticError) as exc:
        print(f"qaoa-lab {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"qaoa-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())
