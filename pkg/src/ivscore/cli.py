"""Command-line interface: ``ivscore {score,functional,lab,fixtures}``.

Exit codes: 0 expected outcome, 1 unexpected experimental verdict,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import io as ivio
from .functionals import eti, gci, mi, si
from .lab import (
    EXPERIMENTS,
    fixture_example_discrete,
    fixture_example_uniform,
    fixture_gci_cxls,
    fixture_table1,
    condition1_instance,
    dilated_pair,
    run_experiment,
)

EXIT_OK, EXIT_UNEXPECTED, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _score_arg(text: str):
    """Score given as inline JSON, a JSON file, or ``name:key=value,...``."""
    t = text.strip()
    if t.startswith("{"):
        return ivio.parse_score(t)
    if os.path.isfile(t):
        return ivio.parse_score(ivio.read_json(t))
    name, _, rest = t.partition(":")
    spec: dict = {"score": name}
    for part in filter(None, rest.split(",")):
        key, eq, val = part.partition("=")
        if not eq:
            raise ivio.InputError(f"expected key=value in score shorthand, got {part!r}")
        try:
            spec[key.strip()] = float(val)
        except ValueError:
            raise ivio.InputError(f"score parameter {key!r} must be numeric") from None
    return ivio.parse_score(spec)


def cmd_score(args) -> int:
    score = _score_arg(args.score)
    forecasts = {}
    for path in args.cases:
        name = Path(path).stem
        if name in forecasts:
            raise ivio.InputError(f"two case files share the forecaster name {name!r}")
        try:
            forecasts[name] = ivio.parse_forecast_csv(ivio.read_bytes(path))
        except ivio.InputError as exc:
            raise ivio.InputError(f"{path}: {exc}") from None
    report = ivio.evaluate_forecasters(forecasts, score)
    text = ivio.format_table(report) if args.format == "table" else ivio.to_json(report)
    ivio.write_text(text, args.out)
    return EXIT_OK


_FUNCTIONALS = {"eti": eti, "si": si, "gci": gci, "mi": mi}


def cmd_functional(args) -> int:
    if args.which == "mi":
        if args.c is None or args.alpha is not None:
            raise ivio.InputError("mi takes --c (and not --alpha)")
        param = args.c
    else:
        if args.alpha is None or args.c is not None:
            raise ivio.InputError(f"{args.which} takes --alpha (and not --c)")
        param = args.alpha
    F = ivio.parse_distribution(ivio.read_json(args.dist))
    try:
        result = _FUNCTIONALS[args.which](F, param)
    except ValueError as exc:
        raise ivio.InputError(str(exc)) from None
    ivio.write_text(ivio.to_json(result), args.out)
    return EXIT_OK


def cmd_lab(args) -> int:
    if args.experiment not in EXPERIMENTS:
        raise ivio.InputError(f"unknown experiment {args.experiment!r}; see 'fixtures --list'")
    report, matched = run_experiment(args.experiment, args.seed)
    out = report.to_dict()
    out["expected_verdict"] = EXPERIMENTS[args.experiment].expected
    out["matches_expectation"] = matched
    ivio.write_text(ivio.to_json(out), args.out)
    return EXIT_OK if matched else EXIT_UNEXPECTED


def _fixture_dists(name: str) -> dict:
    if name == "table1":
        return {"G": fixture_table1()[0]}
    if name == "example-uniform":
        F0, F1 = fixture_example_uniform(0.2)
        return {"F0": F0, "F1": F1}
    if name == "example-discrete":
        F0, F1 = fixture_example_discrete()
        return {"F0": F0, "F1": F1}
    if name == "condition1":
        F0, F1, _, _ = dilated_pair(condition1_instance(0.2, 1.0, 0.5))
        return {"F0": F0, "F1": F1}
    if name == "gci-cxls":
        fx = fixture_gci_cxls(0.2)
        return {"F0": fx.F0, "F1": fx.F1}
    raise ivio.InputError(f"experiment {name!r} uses random fixtures; nothing fixed to show")


def cmd_fixtures(args) -> int:
    if args.show:
        if args.show not in EXPERIMENTS:
            raise ivio.InputError(f"unknown experiment {args.show!r}")
        dists = {k: ivio.distribution_to_dict(v) for k, v in _fixture_dists(args.show).items()}
        ivio.write_text(ivio.to_json(dists), "-")
        return EXIT_OK
    width = max(len(n) for n in EXPERIMENTS)
    for name, exp in EXPERIMENTS.items():
        sys.stdout.write(f"{name:<{width}}  expect {exp.expected:<4}  {exp.description}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ivscore", description="Interval forecast functionals, scoring functions and elicitability checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("score", help="score interval forecasts against observations")
    s.add_argument("--cases", action="append", required=True, metavar="FILE.csv",
                   help="forecast cases; repeat for several forecasters (named by file stem)")
    s.add_argument("--score", required=True,
                   help='score as JSON ({"score":"winkler","alpha":0.2}), a JSON file, or winkler:alpha=0.2')
    s.add_argument("--out", default="-", help="output file, '-' for stdout (default)")
    s.add_argument("--format", choices=["json", "table"], default="json")
    s.set_defaults(func=cmd_score)

    f = sub.add_parser("functional", help="compute an interval functional of a distribution")
    f.add_argument("--dist", required=True, metavar="FILE.json")
    f.add_argument("--which", required=True, choices=sorted(_FUNCTIONALS))
    f.add_argument("--alpha", type=float, help="miscoverage level for eti, si, gci")
    f.add_argument("--c", type=float, help="half-length for mi")
    f.add_argument("--out", default="-")
    f.set_defaults(func=cmd_functional)

    lab = sub.add_parser("lab", help="run a named experiment")
    lab.add_argument("--experiment", required=True, metavar="NAME")
    lab.add_argument("--seed", type=int, default=0)
    lab.add_argument("--out", default="-")
    lab.set_defaults(func=cmd_lab)

    fx = sub.add_parser("fixtures", help="list experiments or show their fixed distributions")
    g = fx.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--show", metavar="NAME")
    fx.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ivio.InputError as exc:
        sys.stderr.write(f"ivscore: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
