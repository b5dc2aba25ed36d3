"""Set-valued interval functionals: ETI, GCI, SI and MI.

Every functional returns its complete solution set; ties are never broken.
Continuum solution sets of piecewise-uniform laws are represented exactly by a
finite list of pieces in the ``(lower, upper)`` plane:

* ``IntervalFamily`` -- fixed length, lower endpoint ranging over a closed
  interval (a segment of slope one);
* ``IntervalSegment`` -- a general straight segment between two intervals;
* ``IntervalBox`` -- lower and upper endpoint ranging independently.

Discrete solutions are degenerate families.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from ._tol import TAU_CMP
from .distributions import (
    DiscreteDist,
    Distribution,
    DistributionError,
    PiecewiseUniformDist,
    quantile_set,
)

__all__ = [
    "Interval",
    "IntervalFamily",
    "IntervalSegment",
    "IntervalBox",
    "FunctionalResult",
    "PointSet",
    "coverage",
    "eti",
    "gci",
    "si",
    "mi",
    "mi_lower_discrete",
    "mi_mid_continuous",
]


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval ``[lower, upper]``."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def __iter__(self) -> Iterator[float]:
        yield self.lower
        yield self.upper

    def close_to(self, other: "Interval", tol: float = TAU_CMP) -> bool:
        return abs(self.lower - other.lower) <= tol and abs(self.upper - other.upper) <= tol

    def to_list(self) -> list:
        return [_plain(self.lower), _plain(self.upper)]


def _plain(x):
    """Python int for integral discrete endpoints, float otherwise."""
    return int(x) if isinstance(x, (int, np.integer)) else float(x)


def _lin(lo, hi, n):
    if hi - lo <= TAU_CMP:
        return [lo]
    return list(np.linspace(lo, hi, n))


@dataclass(frozen=True)
class IntervalFamily:
    """``{[x, x + length] : x in lower_range}``."""

    lower_range: tuple[float, float]
    length: float

    def __post_init__(self):
        l1, l2 = self.lower_range
        if not l1 <= l2 or self.length < 0:
            raise ValueError("invalid interval family")

    @property
    def degenerate(self) -> bool:
        return self.lower_range[1] - self.lower_range[0] <= TAU_CMP

    def contains(self, iv: Interval, tol: float = TAU_CMP) -> bool:
        l1, l2 = self.lower_range
        return abs(iv.length - self.length) <= tol and l1 - tol <= iv.lower <= l2 + tol

    def representatives(self, n: int = 5) -> list[Interval]:
        return [Interval(x, x + self.length) for x in _lin(*self.lower_range, n)]

    def to_dict(self) -> dict:
        return {"lower_range": list(self.lower_range), "length": self.length}


@dataclass(frozen=True)
class IntervalSegment:
    """Straight segment ``{(1-t) start + t end : t in [0, 1]}`` of intervals."""

    start: Interval
    end: Interval

    def contains(self, iv: Interval, tol: float = TAU_CMP) -> bool:
        p = np.array([iv.lower, iv.upper])
        s = np.array([self.start.lower, self.start.upper])
        d = np.array([self.end.lower, self.end.upper]) - s
        dd = float(d @ d)
        if dd == 0.0:
            return bool(np.max(np.abs(p - s)) <= tol)
        t = min(1.0, max(0.0, float((p - s) @ d) / dd))
        return bool(np.max(np.abs(s + t * d - p)) <= tol)

    def representatives(self, n: int = 5) -> list[Interval]:
        out = []
        for t in np.linspace(0.0, 1.0, n):
            a = (1 - t) * self.start.lower + t * self.end.lower
            b = (1 - t) * self.start.upper + t * self.end.upper
            out.append(Interval(a, max(a, b)))
        return out

    def to_dict(self) -> dict:
        return {"start": self.start.to_list(), "end": self.end.to_list()}


@dataclass(frozen=True)
class IntervalBox:
    """``{[a, b] : a in lower_range, b in upper_range, a <= b}``.

    Range bounds may be infinite. With ``integer=True`` only integer
    endpoints belong to the box (discrete laws).
    """

    lower_range: tuple[float, float]
    upper_range: tuple[float, float]
    integer: bool = False

    def contains(self, iv: Interval, tol: float = TAU_CMP) -> bool:
        (a1, a2), (b1, b2) = self.lower_range, self.upper_range
        if self.integer and any(abs(v - round(v)) > tol for v in iv):
            return False
        return a1 - tol <= iv.lower <= a2 + tol and b1 - tol <= iv.upper <= b2 + tol

    def _points(self, lo, hi, n):
        # an unbounded side is represented by a point one unit past the finite bound
        lo = hi - 1.0 if math.isinf(lo) else lo
        hi = lo + 1.0 if math.isinf(hi) else hi
        if self.integer:
            return sorted({int(round(v)) for v in _lin(lo, hi, n)})
        return _lin(lo, hi, n)

    def representatives(self, n: int = 3) -> list[Interval]:
        out = []
        for a in self._points(*self.lower_range, n):
            for b in self._points(*self.upper_range, n):
                if a <= b:
                    out.append(Interval(a, b))
        return out

    def to_dict(self) -> dict:
        def bound(x):
            return None if math.isinf(x) else _plain(x)

        return {"lower_range": [bound(x) for x in self.lower_range], "upper_range": [bound(x) for x in self.upper_range]}


Piece = Union[IntervalFamily, IntervalSegment, IntervalBox]


@dataclass(frozen=True)
class FunctionalResult:
    """Solution set of an interval functional.

    ``coverage`` is the smallest coverage and ``length`` the largest length
    over the set; for SI and MI every member shares both.
    """

    families: tuple
    coverage: float
    length: float

    def contains(self, iv: Interval, tol: float = TAU_CMP) -> bool:
        return any(f.contains(iv, tol) for f in self.families)

    @property
    def is_finite(self) -> bool:
        return all(isinstance(f, IntervalFamily) and f.degenerate for f in self.families)

    def intervals(self) -> list[Interval]:
        """Members of a finite solution set, in ascending order."""
        if not self.is_finite:
            raise ValueError("solution set is a continuum; use families or representatives()")
        return sorted({Interval(f.lower_range[0], f.lower_range[0] + f.length) for f in self.families})

    def representatives(self) -> list[Interval]:
        out = []
        for f in self.families:
            out.extend(f.representatives())
        return out

    def to_dict(self) -> dict:
        return {
            "families": [f.to_dict() for f in self.families],
            "coverage": self.coverage,
            "length": None if math.isinf(self.length) else self.length,
        }


@dataclass(frozen=True)
class PointSet:
    """Finite union of closed ranges of point reports."""

    ranges: tuple[Interval, ...] = field(default_factory=tuple)

    def contains(self, x: float, tol: float = TAU_CMP) -> bool:
        return any(r.lower - tol <= x <= r.upper + tol for r in self.ranges)

    def representatives(self) -> list[float]:
        out = []
        for r in self.ranges:
            out.extend(_lin(r.lower, r.upper, 3))
        return out

    def to_dict(self) -> dict:
        return {"ranges": [r.to_list() for r in self.ranges]}


def _degenerate(a, b) -> IntervalFamily:
    return IntervalFamily((a, a), b - a)


def coverage(F: Distribution, iv: Interval) -> float:
    """``F(upper) - F(lower-)``."""
    a, b = iv
    return float(F.cdf(b) - F.cdf_left(a))


def _check_level(x, name):
    if not 0.0 < x < 1.0:
        raise DistributionError(f"{name} must lie in (0, 1)")


# --------------------------------------------------------------------------- ETI


def eti(F: Distribution, alpha: float) -> FunctionalResult:
    """All ``[a, b]`` with ``a`` an alpha/2- and ``b`` a (1 - alpha/2)-quantile."""
    _check_level(alpha, "alpha")
    qa = quantile_set(F, alpha / 2)
    qb = quantile_set(F, 1 - alpha / 2)
    if isinstance(F, DiscreteDist):
        fams = [
            _degenerate(a, b)
            for a in range(int(qa.lower), int(qa.upper) + 1)
            for b in range(int(qb.lower), int(qb.upper) + 1)
            if a <= b
        ]
        covs = [coverage(F, Interval(f.lower_range[0], f.lower_range[0] + f.length)) for f in fams]
        return FunctionalResult(tuple(fams), min(covs), max(f.length for f in fams))
    cov = coverage(F, Interval(qa.upper, max(qa.upper, qb.lower)))
    if qa.length <= TAU_CMP and qb.length <= TAU_CMP:
        return FunctionalResult((_degenerate(qa.lower, qb.lower),), cov, qb.lower - qa.lower)
    box = IntervalBox((qa.lower, qa.upper), (qb.lower, qb.upper))
    return FunctionalResult((box,), cov, qb.upper - qa.lower)


# --------------------------------------------------------------------------- GCI


def _dense(F: DiscreteDist):
    """Probabilities on every integer of the support hull."""
    lo, hi = (int(v) for v in F.hull)
    p = np.zeros(hi - lo + 1)
    p[F.support - lo] = F.probs
    return lo, p


def gci(F: Distribution, alpha: float) -> FunctionalResult:
    """Guaranteed coverage intervals.

    Intervals reaching past the support carry zero mass at that end, so they
    qualify only with coverage exactly ``1 - alpha``; these tails are
    returned as boxes with one unbounded side.
    """
    _check_level(alpha, "alpha")
    target = 1 - alpha
    if isinstance(F, DiscreteDist):
        return _gci_discrete(F, target)
    return _gci_continuous(F, target)


def _gci_discrete(F: DiscreteDist, target: float) -> FunctionalResult:
    lo, p = _dense(F)
    hi = lo + p.size - 1
    cum = np.concatenate([[0.0], np.cumsum(p)])
    i, j = np.triu_indices(p.size)
    cov = cum[j + 1] - cum[i]
    ok = (cov >= target - TAU_CMP) & (cov - p[j] <= target + TAU_CMP) & (cov - p[i] <= target + TAU_CMP)
    pieces = [_degenerate(lo + int(a), lo + int(b)) for a, b in zip(i[ok], j[ok])]
    covs = list(cov[ok])
    # left tail: a in [0, lo) with F(b) = target
    exact_b = [lo + int(b) for b in range(p.size) if abs(cum[b + 1] - target) <= TAU_CMP]
    for a in range(0, lo):
        pieces.extend(_degenerate(a, b) for b in exact_b)
    covs.extend([target] * (lo * len(exact_b)))
    # right tail: b > hi with F(a-) = 1 - target
    exact_a = [lo + int(a) for a in range(p.size) if abs(cum[a] - (1 - target)) <= TAU_CMP]
    if exact_a:
        pieces.append(IntervalBox((exact_a[0], exact_a[-1]), (hi + 1, math.inf), integer=True))
        covs.append(target)
    longest = math.inf if exact_a else float(max(iv.length for f in pieces for iv in f.representatives()))
    return FunctionalResult(tuple(pieces), float(min(covs)), longest)


def _critical_levels(F: PiecewiseUniformDist, alpha: float) -> np.ndarray:
    C = F.cum
    lv = np.concatenate([[0.0, alpha], C, C - (1 - alpha)])
    lv = np.sort(lv[(lv >= 0.0) & (lv <= alpha)])
    keep = np.concatenate([[True], np.diff(lv) > TAU_CMP])
    lv = lv[keep]
    lv[0], lv[-1] = 0.0, alpha
    return lv


def _gci_continuous(F: PiecewiseUniformDist, target: float) -> FunctionalResult:
    alpha = 1 - target
    lv = _critical_levels(F, alpha)
    a_lo, a_hi = F.level_lo(lv), F.level_hi(lv)
    b_lo, b_hi = F.level_lo(lv + target), F.level_hi(lv + target)
    pieces: list = []
    for k in range(lv.size):
        if a_hi[k] - a_lo[k] > TAU_CMP or b_hi[k] - b_lo[k] > TAU_CMP:
            pieces.append(IntervalBox((float(a_lo[k]), float(a_hi[k])), (float(b_lo[k]), float(b_hi[k]))))
        elif lv.size == 1:
            pieces.append(_degenerate(float(a_lo[k]), float(b_lo[k])))
        if k + 1 < lv.size:
            start = Interval(float(a_hi[k]), float(b_hi[k]))
            end = Interval(float(a_lo[k + 1]), float(b_lo[k + 1]))
            if abs(start.length - end.length) <= TAU_CMP:
                pieces.append(IntervalFamily((start.lower, end.lower), start.length))
            else:
                pieces.append(IntervalSegment(start, end))
    lo, hi = F.hull
    pieces.append(IntervalBox((-math.inf, lo), (float(b_lo[0]), float(b_hi[0]))))
    pieces.append(IntervalBox((float(a_lo[-1]), float(a_hi[-1])), (hi, math.inf)))
    return FunctionalResult(tuple(pieces), target, math.inf)


# --------------------------------------------------------------------------- SI / MI helpers


def _superlevel_families(F: PiecewiseUniformDist, width: float, lo: float, hi: float, target=None):
    """Families ``[x, x + width]``, ``x`` in ``[lo, hi]``, whose coverage is maximal.

    The window coverage ``x -> F(x + width) - F(x)`` is piecewise linear with
    kinks at breakpoints and breakpoints shifted by ``-width``, so its
    superlevel sets are unions of segments between consecutive kinks.
    """
    B = F.breakpoints
    pts = np.unique(np.concatenate([B, B - width, [lo, hi]]))
    pts = pts[(pts >= lo - TAU_CMP) & (pts <= hi + TAU_CMP)]
    pts = np.clip(pts, lo, hi)
    pts = pts[np.concatenate([[True], np.diff(pts) > TAU_CMP])]
    phi = F.cdf(pts + width) - F.cdf(pts)
    if target is None:
        target = float(phi.max())
    ok = phi >= target - TAU_CMP
    fams = []
    k = 0
    while k < pts.size:
        if not ok[k]:
            k += 1
            continue
        start = k
        while k + 1 < pts.size and ok[k + 1]:
            k += 1
        fams.append(IntervalFamily((float(pts[start]), float(pts[k])), width))
        k += 1
    return fams, float(phi[ok].min())


# --------------------------------------------------------------------------- SI


def si(F: Distribution, alpha: float) -> FunctionalResult:
    """Shortest intervals with coverage at least ``1 - alpha``."""
    _check_level(alpha, "alpha")
    target = 1 - alpha
    if isinstance(F, DiscreteDist):
        s, cum = F.support, np.concatenate([[0.0], np.cumsum(F.probs)])
        n = s.size
        best = math.inf
        cands = []
        j = 0
        for i in range(n):
            j = max(j, i)
            while j < n and cum[j + 1] - cum[i] < target - TAU_CMP:
                j += 1
            if j == n:
                break
            length = int(s[j] - s[i])
            if length < best:
                best, cands = length, [(i, j)]
            elif length == best:
                cands.append((i, j))
        fams = tuple(_degenerate(int(s[i]), int(s[j])) for i, j in cands)
        cov = min(cum[j + 1] - cum[i] for i, j in cands)
        return FunctionalResult(fams, float(cov), float(best))

    lv = _critical_levels(F, alpha)
    lengths = F.level_lo(lv + target) - F.level_hi(lv)
    L = float(lengths.min())
    lo, hi = F.hull
    fams, cov = _superlevel_families(F, L, lo, hi - L, target=target)
    return FunctionalResult(tuple(fams), cov, L)


# --------------------------------------------------------------------------- MI


def mi_lower_discrete(F: DiscreteDist, k: int) -> list[int]:
    """Lower endpoints ``x`` maximizing ``P(x <= Y <= x + k)``."""
    if not isinstance(F, DiscreteDist):
        raise DistributionError("mi_lower_discrete needs a discrete law")
    k = int(k)
    if k < 0:
        raise ValueError("k must be nonnegative")
    lo, hi = (int(v) for v in F.hull)
    xs = np.arange(max(0, lo - k), hi + 1)
    w = F.cdf(xs + k) - F.cdf_left(xs)
    return [int(x) for x in xs[w >= w.max() - TAU_CMP]]


def mi(F: Distribution, c: float) -> FunctionalResult:
    """Modal intervals of half-length ``c`` (total length ``2c``).

    Discrete laws use windows of integer length ``floor(2c)``.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    if isinstance(F, DiscreteDist):
        k = int(math.floor(2 * c + TAU_CMP))
        xs = mi_lower_discrete(F, k)
        cov = coverage(F, Interval(xs[0], xs[0] + k))
        return FunctionalResult(tuple(_degenerate(x, x + k) for x in xs), cov, float(k))
    width = 2 * c
    lo, hi = F.hull
    fams, cov = _superlevel_families(F, width, lo - width, hi)
    return FunctionalResult(tuple(fams), cov, width)


def mi_mid_continuous(F: PiecewiseUniformDist, c: float) -> list[Interval]:
    """Midpoint ranges ``{x : [x - c, x + c] in MI_c(F)}``."""
    if isinstance(F, DiscreteDist):
        raise DistributionError("mi_mid_continuous needs a continuous law")
    res = mi(F, c)
    return [Interval(f.lower_range[0] + c, f.lower_range[1] + c) for f in res.families]
