"""Parsing and serialization: forecast-case CSV, distribution and score JSON, reports.

All file access of the package happens here and in :mod:`ivscore.cli`.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .distributions import DiscreteDist, Distribution, PiecewiseUniformDist, location_scale, mix
from .functionals import FunctionalResult, Interval, PointSet
from .scoring import (
    CZeroOne,
    ElementaryQuantile,
    ElementarySymmetric,
    EtiFamily,
    KZeroOne,
    LinearFunction,
    MixtureEti,
    PiecewiseLinearFunction,
    Quantile,
    StepFunction,
    StepMeasure,
    Winkler,
    is_decomposition,
)

__all__ = [
    "InputError",
    "ForecastCase",
    "EvaluationReport",
    "parse_forecast_csv",
    "serialize_forecast_csv",
    "format_number",
    "parse_distribution",
    "distribution_to_dict",
    "parse_monotone",
    "parse_score",
    "score_to_dict",
    "functional_result_to_dict",
    "evaluate_cases",
    "evaluate_forecasters",
    "to_json",
    "format_table",
    "read_bytes",
    "read_json",
    "write_text",
]


class InputError(ValueError):
    """Malformed user input (CSV rows, JSON specs)."""


# --------------------------------------------------------------------------- forecast cases


@dataclass(frozen=True)
class ForecastCase:
    lower: float
    upper: float
    observation: float
    id: str | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise InputError(f"case {self.id!r}: lower {self.lower} exceeds upper {self.upper}")

    @property
    def interval(self) -> Interval:
        return Interval(self.lower, self.upper)


_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_HEADERS = (["id", "lower", "upper", "observation"], ["lower", "upper", "observation"])


def _number(text: str, line: int, column: str) -> float:
    t = text.strip()
    if not _NUMBER.match(t):
        raise InputError(f"line {line}: {column} {text!r} is not a decimal number")
    return float(t)


def parse_forecast_csv(data: bytes | str) -> list[ForecastCase]:
    """Parse ``id,lower,upper,observation`` rows (the id column is optional)."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"input is not UTF-8: {exc}") from None
    data = data.lstrip("﻿")
    rows = list(csv.reader(_io.StringIO(data)))
    if not rows:
        raise InputError("line 1: missing header row")
    header = [h.strip() for h in rows[0]]
    if header not in _HEADERS:
        raise InputError(f"line 1: expected header 'id,lower,upper,observation' or 'lower,upper,observation', got {','.join(header)!r}")
    has_id = header[0] == "id"
    out = []
    for line, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise InputError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        cid = row[0].strip() if has_id else None
        vals = row[1:] if has_id else row
        lower, upper, obs = (_number(v, line, c) for v, c in zip(vals, header[-3:]))
        if lower > upper:
            raise InputError(f"line {line}: case {cid or line - 1}: lower {lower:g} exceeds upper {upper:g}")
        out.append(ForecastCase(lower, upper, obs, cid))
    return out


def format_number(x: float) -> str:
    """Shortest round-trip decimal, with integral values written without a fraction."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite numbers are not representable")
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def serialize_forecast_csv(cases: Sequence[ForecastCase]) -> bytes:
    has_id = any(c.id is not None for c in cases)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_HEADERS[0] if has_id else _HEADERS[1])
    for c in cases:
        nums = [format_number(c.lower), format_number(c.upper), format_number(c.observation)]
        w.writerow(([c.id or ""] if has_id else []) + nums)
    return buf.getvalue().encode("utf-8")


# --------------------------------------------------------------------------- distributions


def _need(obj: Mapping, *keys):
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InputError(f"{obj.get('kind', 'spec')!r} spec is missing {', '.join(missing)}")
    return [obj[k] for k in keys]


def parse_distribution(obj: Mapping | str) -> Distribution:
    """Build a distribution from its JSON form (dict or JSON text)."""
    if isinstance(obj, str):
        obj = _loads(obj)
    if not isinstance(obj, Mapping):
        raise InputError("distribution spec must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "discrete":
            support, probs = _need(obj, "support", "probs")
            return DiscreteDist(support, probs)
        if kind == "pw_uniform":
            breaks, masses = _need(obj, "breakpoints", "masses")
            return PiecewiseUniformDist(breaks, masses)
        if kind == "mixture":
            weights, comps = _need(obj, "weights", "components")
            return mix([parse_distribution(c) for c in comps], weights)
        if kind == "location_scale":
            loc, scale, base = _need(obj, "loc", "scale", "base")
            return location_scale(parse_distribution(base), loc, scale)
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid {kind} distribution: {exc}") from None
    raise InputError(f"unknown distribution kind {kind!r}")


def distribution_to_dict(F: Distribution) -> dict:
    """JSON form of the flattened law."""
    if isinstance(F, DiscreteDist):
        return {"kind": "discrete", "support": [int(x) for x in F.support], "probs": [float(p) for p in F.probs]}
    return {"kind": "pw_uniform", "breakpoints": [float(x) for x in F.breakpoints], "masses": [float(m) for m in F.masses]}


# --------------------------------------------------------------------------- scores


def parse_monotone(obj: Mapping):
    if not isinstance(obj, Mapping):
        raise InputError("monotone function spec must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "linear":
            return LinearFunction(float(obj.get("slope", 1.0)), float(obj.get("intercept", 0.0)))
        if kind == "step":
            jumps, sizes = _need(obj, "jumps", "sizes")
            return StepFunction(tuple(jumps), tuple(sizes), float(obj.get("base", 0.0)))
        if kind == "piecewise_linear":
            knots, values = _need(obj, "knots", "values")
            return PiecewiseLinearFunction(tuple(knots), tuple(values))
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid {kind} function: {exc}") from None
    raise InputError(f"unknown monotone function kind {kind!r}")


def parse_score(obj: Mapping | str):
    """Build a score from its JSON form, e.g. ``{"score": "winkler", "alpha": 0.2}``."""
    if isinstance(obj, str):
        obj = _loads(obj)
    if not isinstance(obj, Mapping):
        raise InputError("score spec must be a JSON object")
    name = obj.get("score")
    try:
        if name == "winkler":
            return Winkler(float(_need(obj, "alpha")[0]))
        if name == "quantile":
            g = parse_monotone(obj["g"]) if "g" in obj else LinearFunction(1.0, 0.0)
            return Quantile(float(_need(obj, "alpha")[0]), g)
        if name == "eti_family":
            kw = {k: float(obj[k]) for k in ("w1", "w2") if k in obj}
            kw.update({k: parse_monotone(obj[k]) for k in ("g1", "g2") if k in obj})
            return EtiFamily(float(_need(obj, "alpha")[0]), **kw)
        if name == "elementary_quantile":
            alpha, theta = _need(obj, "alpha", "theta")
            return ElementaryQuantile(float(alpha), float(theta))
        if name == "elementary_symmetric":
            alpha, theta = _need(obj, "alpha", "theta")
            return ElementarySymmetric(float(alpha), float(theta))
        if name == "mixture":
            alpha, atoms = _need(obj, "alpha", "atoms")
            return MixtureEti(float(alpha), StepMeasure(tuple(tuple(a) for a in atoms)))
        if name == "k01":
            k = _need(obj, "k")[0]
            if float(k) != int(k):
                raise InputError("k must be an integer")
            return KZeroOne(int(k))
        if name == "c01":
            return CZeroOne(float(_need(obj, "c")[0]))
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid {name} score: {exc}") from None
    raise InputError(f"unknown score {name!r}")


def score_to_dict(score) -> dict:
    return score.to_dict()


def functional_result_to_dict(result: FunctionalResult | PointSet) -> dict:
    return result.to_dict()


# --------------------------------------------------------------------------- evaluation


@dataclass
class EvaluationReport:
    """Per-forecaster scores with means and a ranking (ascending mean)."""

    score: dict
    forecasters: dict = field(default_factory=dict)
    ranking: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"score": self.score, "forecasters": self.forecasters, "ranking": self.ranking}


def _evaluate_one(cases: Sequence[ForecastCase], score) -> dict:
    if getattr(score, "report_kind", None) != "interval":
        raise InputError(f"score {getattr(score, 'name', score)!r} does not evaluate interval forecasts")
    a = np.array([c.lower for c in cases], dtype=float)
    b = np.array([c.upper for c in cases], dtype=float)
    y = np.array([c.observation for c in cases], dtype=float)
    s = np.asarray(score((a, b), y), dtype=float)
    out = {
        "n": len(cases),
        "scores": [{"id": c.id if c.id is not None else str(i + 1), "score": float(v)} for i, (c, v) in enumerate(zip(cases, s))],
        "mean": float(math.fsum(s) / len(s)) if len(s) else None,
    }
    if isinstance(score, Winkler):
        length, penalty = is_decomposition(score.alpha, (a, b), y)
        out["mean_length"] = float(math.fsum(length) / len(s)) if len(s) else None
        out["mean_penalty"] = float(math.fsum(penalty) / len(s)) if len(s) else None
    return out


def evaluate_forecasters(forecasts: Mapping[str, Sequence[ForecastCase]], score) -> EvaluationReport:
    """Score several forecasters' cases and rank them by mean score."""
    per = {name: _evaluate_one(cases, score) for name, cases in forecasts.items()}
    ranked = sorted((v["mean"], k) for k, v in per.items() if v["mean"] is not None)
    ranking = [{"rank": i + 1, "forecaster": k, "mean": m} for i, (m, k) in enumerate(ranked)]
    return EvaluationReport(score.to_dict(), per, ranking)


def evaluate_cases(cases, score) -> EvaluationReport:
    """Score one list of cases, or a mapping ``forecaster -> cases``."""
    if isinstance(cases, Mapping):
        return evaluate_forecasters(cases, score)
    return evaluate_forecasters({"forecast": list(cases)}, score)


# --------------------------------------------------------------------------- output


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Interval):
        return [o.lower, o.upper]
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def to_json(obj) -> str:
    """Deterministic JSON text (sorted keys, full double precision)."""
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    return json.dumps(obj, sort_keys=True, indent=2, default=_default, allow_nan=False) + "\n"


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def format_table(report: EvaluationReport) -> str:
    """Human-readable ranking, rounded to 6 significant digits."""
    lines = [f"{'rank':>4}  {'forecaster':<20} {'mean':>12}"]
    for r in report.ranking:
        lines.append(f"{r['rank']:>4}  {r['forecaster']:<20} {r['mean']:>12.6g}")
    return "\n".join(lines) + "\n"


def read_bytes(path: str | Path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def read_json(path: str | Path):
    return _loads(read_bytes(path).decode("utf-8"))


def write_text(text: str, path: str | Path | None) -> None:
    """Write to ``path``; ``None`` or ``-`` means stdout."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8")
