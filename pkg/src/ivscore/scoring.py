"""Scoring functions for quantiles, equal-tailed and modal intervals.

All scores are vectorized: reports and observations broadcast as numpy arrays.
Interval reports are passed as an ``Interval`` or any ``(lower, upper)`` pair.

Exact expectations (:func:`expected_score`) integrate the score against a
distribution without quadrature error. For piecewise-uniform laws the
integrand is piecewise linear in the observation between the distribution's
breakpoints and the score's kinks, so the midpoint rule on the merged grid is
exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, ClassVar, Sequence, Union

import numpy as np

from .distributions import DiscreteDist, Distribution, PiecewiseUniformDist
from .functionals import Interval

__all__ = [
    "LinearFunction",
    "StepFunction",
    "PiecewiseLinearFunction",
    "CallableFunction",
    "MonotoneFunction",
    "StepMeasure",
    "Quantile",
    "EtiFamily",
    "EtiScoreParams",
    "Winkler",
    "ElementaryQuantile",
    "ElementarySymmetric",
    "MixtureEti",
    "KZeroOne",
    "CZeroOne",
    "ScoreSpec",
    "quantile_score",
    "eti_score",
    "winkler_is",
    "is_decomposition",
    "elementary_quantile_score",
    "elementary_symmetric_interval_score",
    "mixture_eti_score",
    "k_zero_one",
    "c_zero_one",
    "induced_measure",
    "symmetric_partner",
    "expected_score",
    "expected_scores",
]


def _ind(cond):
    return np.asarray(cond, dtype=float)


# --------------------------------------------------------------------------- monotone functions


@dataclass(frozen=True)
class LinearFunction:
    slope: float = 1.0
    intercept: float = 0.0
    kind: ClassVar[str] = "linear"

    def __post_init__(self):
        if self.slope < 0:
            raise ValueError("slope must be nonnegative")

    def __call__(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.intercept

    left = right = __call__

    @property
    def kinks(self) -> np.ndarray:
        return np.empty(0)

    @property
    def strictly_increasing(self) -> bool:
        return self.slope > 0

    def to_dict(self):
        return {"kind": "linear", "slope": self.slope, "intercept": self.intercept}


@dataclass(frozen=True)
class StepFunction:
    """Non-decreasing step function obeying ``g(x) = (g(x-) + g(x+)) / 2``."""

    jumps: tuple
    sizes: tuple
    base: float = 0.0
    kind: ClassVar[str] = "step"

    def __post_init__(self):
        j = tuple(float(v) for v in self.jumps)
        s = tuple(float(v) for v in self.sizes)
        if len(j) != len(s):
            raise ValueError("one size per jump location")
        if any(b <= a for a, b in zip(j, j[1:])):
            raise ValueError("jump locations must be strictly ascending")
        if any(not v > 0 for v in s):
            raise ValueError("jump sizes must be positive")
        object.__setattr__(self, "jumps", j)
        object.__setattr__(self, "sizes", s)

    def _eval(self, x, at_jump):
        x = np.asarray(x, dtype=float)
        t = np.asarray(self.jumps)[:, None]
        s = np.asarray(self.sizes)[:, None]
        flat = x.reshape(1, -1)
        val = self.base + ((_ind(t < flat) + at_jump * _ind(t == flat)) * s).sum(axis=0)
        return val.reshape(x.shape)

    def __call__(self, x):
        return self._eval(x, 0.5)

    def left(self, x):
        return self._eval(x, 0.0)

    def right(self, x):
        return self._eval(x, 1.0)

    @property
    def kinks(self) -> np.ndarray:
        return np.asarray(self.jumps)

    @property
    def strictly_increasing(self) -> bool:
        return False

    def to_dict(self):
        return {"kind": "step", "jumps": list(self.jumps), "sizes": list(self.sizes), "base": self.base}


@dataclass(frozen=True)
class PiecewiseLinearFunction:
    """Linear interpolation of ``values`` at ``knots``; extrapolated with the end slopes."""

    knots: tuple
    values: tuple
    kind: ClassVar[str] = "piecewise_linear"

    def __post_init__(self):
        k = tuple(float(v) for v in self.knots)
        v = tuple(float(x) for x in self.values)
        if len(k) != len(v) or len(k) < 2:
            raise ValueError("need at least two knots with one value each")
        if any(b <= a for a, b in zip(k, k[1:])):
            raise ValueError("knots must be strictly ascending")
        if any(b < a for a, b in zip(v, v[1:])):
            raise ValueError("values must be non-decreasing")
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "values", v)

    def __call__(self, x):
        k, v = np.asarray(self.knots), np.asarray(self.values)
        x = np.asarray(x, dtype=float)
        out = np.interp(x, k, v)
        lo_slope = (v[1] - v[0]) / (k[1] - k[0])
        hi_slope = (v[-1] - v[-2]) / (k[-1] - k[-2])
        out = np.where(x < k[0], v[0] + lo_slope * (x - k[0]), out)
        out = np.where(x > k[-1], v[-1] + hi_slope * (x - k[-1]), out)
        return out

    left = right = __call__

    @property
    def kinks(self) -> np.ndarray:
        return np.asarray(self.knots)

    @property
    def strictly_increasing(self) -> bool:
        return all(b > a for a, b in zip(self.values, self.values[1:]))

    def to_dict(self):
        return {"kind": "piecewise_linear", "knots": list(self.knots), "values": list(self.values)}


@dataclass(frozen=True)
class CallableFunction:
    """Arbitrary non-decreasing function; pointwise use only.

    Exact expectations under piecewise-uniform laws are unavailable because
    the integrand is no longer piecewise linear.
    """

    fn: Callable
    strictly_increasing: bool = True
    kind: ClassVar[str] = "callable"

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    left = right = __call__

    @property
    def kinks(self):
        raise TypeError("callable monotone functions have no finite kink set")

    def to_dict(self):
        raise TypeError("callable monotone functions are not serializable")


MonotoneFunction = Union[LinearFunction, StepFunction, PiecewiseLinearFunction, CallableFunction]

IDENTITY = LinearFunction(1.0, 0.0)


@dataclass(frozen=True)
class StepMeasure:
    """Discrete mixing measure: atoms ``(theta, mass)`` with ascending ``theta``.

    Locations are nonnegative for measures folded onto ``[0, inf)``; negative
    locations are accepted for the signed representation (see
    :func:`induced_measure`).
    """

    atoms: tuple = ()

    def __post_init__(self):
        atoms = tuple((float(t), float(m)) for t, m in self.atoms)
        if any(not m > 0 for _, m in atoms):
            raise ValueError("atom masses must be positive")
        if any(b[0] <= a[0] for a, b in zip(atoms, atoms[1:])):
            raise ValueError("atom locations must be strictly ascending")
        object.__setattr__(self, "atoms", atoms)

    @property
    def locations(self) -> np.ndarray:
        return np.array([t for t, _ in self.atoms])

    @property
    def masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms])


# --------------------------------------------------------------------------- pointwise scores


def quantile_score(g, alpha, x, y):
    """``(1{y <= x} - alpha) (g(x) - g(y))``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return (_ind(y <= x) - alpha) * (g(x) - g(y))


def winkler_is(alpha, interval, y):
    """Classical interval score: length plus ``2/alpha``-weighted exceedance."""
    a, b = (np.asarray(v, dtype=float) for v in interval)
    y = np.asarray(y, dtype=float)
    return (b - a) + (2 / alpha) * (a - y) * _ind(y < a) + (2 / alpha) * (y - b) * _ind(y > b)


def is_decomposition(alpha, interval, y):
    """Split the interval score into ``(length, penalty)``."""
    a, b = (np.asarray(v, dtype=float) for v in interval)
    length = np.broadcast_to(b - a, np.broadcast_shapes(a.shape, np.shape(y)))
    return length, winkler_is(alpha, interval, y) - length


def _elementary_bracket(theta, x, y):
    return _ind(theta < x) + 0.5 * _ind(theta == x) - _ind(theta < y) - 0.5 * _ind(theta == y)


def elementary_quantile_score(alpha, theta, x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return (_ind(y <= x) - alpha) * _elementary_bracket(theta, x, y)


def elementary_symmetric_interval_score(alpha, theta, interval, y):
    a, b = interval
    return elementary_quantile_score(alpha / 2, theta, a, y) + elementary_quantile_score(1 - alpha / 2, -theta, b, y)


def mixture_eti_score(measure: StepMeasure, alpha, interval, y):
    a, b = (np.asarray(v, dtype=float) for v in interval)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape, y.shape))
    for theta, m in measure.atoms:
        out = out + m * elementary_symmetric_interval_score(alpha, theta, (a, b), y)
    return out


def k_zero_one(k, x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return -_ind((x <= y) & (y <= x + k))


def c_zero_one(c, x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return -_ind((x - c <= y) & (y <= x + c))


# --------------------------------------------------------------------------- score specs


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")


class _Score:
    name: ClassVar[str]
    report_kind: ClassVar[str]  # "interval" or "point"

    def kinks(self, report) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Quantile(_Score):
    alpha: float
    g: MonotoneFunction = IDENTITY
    name: ClassVar[str] = "quantile"
    report_kind: ClassVar[str] = "point"

    def __post_init__(self):
        _check_alpha(self.alpha)

    def __call__(self, x, y):
        return quantile_score(self.g, self.alpha, x, y)

    def kinks(self, x):
        return np.concatenate([np.ravel(x), self.g.kinks])

    def to_dict(self):
        return {"score": self.name, "alpha": self.alpha, "g": self.g.to_dict()}


@dataclass(frozen=True)
class EtiFamily(_Score):
    """General consistent score for the equal-tailed interval."""

    alpha: float
    w1: float = 1.0
    w2: float = 1.0
    g1: MonotoneFunction = IDENTITY
    g2: MonotoneFunction = IDENTITY
    name: ClassVar[str] = "eti_family"
    report_kind: ClassVar[str] = "interval"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.w1 < 0 or self.w2 < 0:
            raise ValueError("weights must be nonnegative")

    @property
    def strict(self) -> bool:
        """Whether the score is strictly consistent for the ETI."""
        return self.w1 > 0 and self.w2 > 0 and self.g1.strictly_increasing and self.g2.strictly_increasing

    def __call__(self, interval, y):
        return eti_score(self, interval, y)

    def kinks(self, interval):
        a, b = interval
        return np.concatenate([np.ravel(a), np.ravel(b), self.g1.kinks, self.g2.kinks])

    def to_dict(self):
        return {
            "score": self.name,
            "alpha": self.alpha,
            "w1": self.w1,
            "w2": self.w2,
            "g1": self.g1.to_dict(),
            "g2": self.g2.to_dict(),
        }


EtiScoreParams = EtiFamily


def eti_score(p: EtiFamily, interval, y):
    a, b = (np.asarray(v, dtype=float) for v in interval)
    y = np.asarray(y, dtype=float)
    lower = p.w1 * (_ind(y <= a) - p.alpha / 2) * (p.g1(a) - p.g1(y))
    upper = p.w2 * (_ind(y <= b) - (1 - p.alpha / 2)) * (p.g2(b) - p.g2(y))
    return lower + upper


@dataclass(frozen=True)
class Winkler(_Score):
    alpha: float
    name: ClassVar[str] = "winkler"
    report_kind: ClassVar[str] = "interval"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")

    def __call__(self, interval, y):
        return winkler_is(self.alpha, interval, y)

    def kinks(self, interval):
        a, b = interval
        return np.concatenate([np.ravel(a), np.ravel(b)])

    def to_dict(self):
        return {"score": self.name, "alpha": self.alpha}


@dataclass(frozen=True)
class ElementaryQuantile(_Score):
    alpha: float
    theta: float
    name: ClassVar[str] = "elementary_quantile"
    report_kind: ClassVar[str] = "point"

    def __post_init__(self):
        _check_alpha(self.alpha)

    def __call__(self, x, y):
        return elementary_quantile_score(self.alpha, self.theta, x, y)

    def kinks(self, x):
        return np.concatenate([np.ravel(x), [self.theta]])

    def to_dict(self):
        return {"score": self.name, "alpha": self.alpha, "theta": self.theta}


@dataclass(frozen=True)
class ElementarySymmetric(_Score):
    alpha: float
    theta: float
    name: ClassVar[str] = "elementary_symmetric"
    report_kind: ClassVar[str] = "interval"

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.theta < 0:
            raise ValueError("theta must be nonnegative")

    def __call__(self, interval, y):
        return elementary_symmetric_interval_score(self.alpha, self.theta, interval, y)

    def kinks(self, interval):
        a, b = interval
        return np.concatenate([np.ravel(a), np.ravel(b), [self.theta, -self.theta]])

    def to_dict(self):
        return {"score": self.name, "alpha": self.alpha, "theta": self.theta}


@dataclass(frozen=True)
class MixtureEti(_Score):
    alpha: float
    measure: StepMeasure
    name: ClassVar[str] = "mixture"
    report_kind: ClassVar[str] = "interval"

    def __post_init__(self):
        _check_alpha(self.alpha)

    def __call__(self, interval, y):
        return mixture_eti_score(self.measure, self.alpha, interval, y)

    def kinks(self, interval):
        a, b = interval
        t = self.measure.locations
        return np.concatenate([np.ravel(a), np.ravel(b), t, -t])

    def to_dict(self):
        return {"score": self.name, "alpha": self.alpha, "atoms": [list(a) for a in self.measure.atoms]}


@dataclass(frozen=True)
class KZeroOne(_Score):
    k: int
    name: ClassVar[str] = "k01"
    report_kind: ClassVar[str] = "point"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise ValueError("k must be a nonnegative integer")

    def __call__(self, x, y):
        return k_zero_one(self.k, x, y)

    def kinks(self, x):
        x = np.ravel(x)
        return np.concatenate([x, x + self.k])

    def to_dict(self):
        return {"score": self.name, "k": int(self.k)}


@dataclass(frozen=True)
class CZeroOne(_Score):
    c: float
    name: ClassVar[str] = "c01"
    report_kind: ClassVar[str] = "point"

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")

    def __call__(self, x, y):
        return c_zero_one(self.c, x, y)

    def kinks(self, x):
        x = np.ravel(x)
        return np.concatenate([x - self.c, x + self.c])

    def to_dict(self):
        return {"score": self.name, "c": self.c}


ScoreSpec = Union[Quantile, EtiFamily, Winkler, ElementaryQuantile, ElementarySymmetric, MixtureEti, KZeroOne, CZeroOne]


# --------------------------------------------------------------------------- symmetric scores and mixtures


def symmetric_partner(w1: float, g1: StepFunction, w2: float) -> StepFunction:
    """Step ``g2`` with ``w1 (g1(a) - g1(y)) = w2 (g2(-y) - g2(-a))``."""
    jumps = tuple(-t for t in reversed(g1.jumps))
    sizes = tuple(s * w1 / w2 for s in reversed(g1.sizes))
    return StepFunction(jumps, sizes, 0.0)


def induced_measure(w1: float, g1: StepFunction, fold: bool = True) -> StepMeasure:
    """Mixing measure of a symmetric step-function ETI score.

    With ``fold=True`` the measure is ``dh`` for ``h(theta) = w1 (g1(theta) -
    g1(-theta))`` on ``[0, inf)``. This reproduces the score exactly when every
    jump of ``g1`` lies in ``[0, inf)``. With ``fold=False`` the atoms sit at
    the jump locations of ``g1`` themselves (possibly negative), which
    reproduces every symmetric step-function score.
    """
    acc: dict[float, float] = {}
    for t, s in zip(g1.jumps, g1.sizes):
        key = abs(t) if fold else t
        acc[key] = acc.get(key, 0.0) + w1 * s
    return StepMeasure(tuple(sorted(acc.items())))


# --------------------------------------------------------------------------- expectations


def _split_report(score, reports):
    """Normalize reports to the broadcastable array form the score expects."""
    if score.report_kind == "interval":
        if isinstance(reports, Interval):
            return (np.array([reports.lower]), np.array([reports.upper])), True
        arr = np.asarray([tuple(r) for r in reports], dtype=float).reshape(-1, 2)
        return (arr[:, 0], arr[:, 1]), False
    if np.ndim(reports) == 0:
        return np.array([float(reports)]), True
    return np.asarray(reports, dtype=float), False


def expected_scores(F: Distribution, score, reports) -> np.ndarray:
    """Exact ``E_F S(r, Y)`` for every report ``r`` in ``reports``."""
    rep, _ = _split_report(score, reports)
    if score.report_kind == "interval":
        col = (rep[0][:, None], rep[1][:, None])
    else:
        col = rep[:, None]
    if isinstance(F, DiscreteDist):
        y = F.support.astype(float)
        return score(col, y[None, :]) @ F.probs
    if not isinstance(F, PiecewiseUniformDist):
        raise TypeError(f"unsupported distribution {F!r}")
    lo, hi = F.hull
    cuts = np.concatenate([F.breakpoints, score.kinks(rep)])
    cuts = np.unique(np.clip(cuts, lo, hi))
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    weights = np.diff(F.cdf(cuts))
    keep = weights > 0
    mids, weights = mids[keep], weights[keep]
    out = np.zeros(rep[0].size if score.report_kind == "interval" else rep.size)
    # chunk over observation points to bound memory for large grids
    step = max(1, 2_000_000 // max(out.size, 1))
    for s in range(0, mids.size, step):
        out += score(col, mids[None, s : s + step]) @ weights[s : s + step]
    return out


def expected_score(F: Distribution, score, report) -> float:
    """Exact expected score of a single report under ``F``.

    Raises ``ValueError`` for discrete laws when an interval report has
    endpoints outside the nonnegative integers.
    """
    if isinstance(F, DiscreteDist) and score.report_kind == "interval":
        for v in report:
            if v < 0 or float(v) != round(float(v)):
                raise ValueError("report endpoints must be nonnegative integers for discrete laws")
    return float(expected_scores(F, score, [report] if score.report_kind == "interval" else [report])[0])
