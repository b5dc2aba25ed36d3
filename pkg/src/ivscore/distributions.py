"""Exact predictive distributions.

Two base kinds are supported:

* ``DiscreteDist`` -- finitely many atoms on the nonnegative integers;
* ``PiecewiseUniformDist`` -- a density that is constant between consecutive
  breakpoints (pieces of zero mass encode gaps in the support).

Mixtures and location-scale images are flattened eagerly into one of the two
base kinds, so every downstream routine only deals with a single atom list or
a single breakpoint grid.
"""
from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from ._tol import TAU_CMP, TAU_MASS

__all__ = [
    "DistributionError",
    "DiscreteDist",
    "PiecewiseUniformDist",
    "Distribution",
    "cdf",
    "cdf_left",
    "quantile_set",
    "mix",
    "location_scale",
    "sample",
    "uniform",
    "point_mass",
    "is_discrete",
]


class DistributionError(ValueError):
    """Raised for invalid distribution parameters or unsupported operations."""


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


class DiscreteDist:
    """Finite law on the nonnegative integers.

    Parameters
    ----------
    support : sequence of int
        Strictly ascending, nonnegative atoms.
    probs : sequence of float
        Strictly positive probabilities summing to one.
    """

    __slots__ = ("_support", "_probs", "_cum")

    def __init__(self, support: Sequence[int], probs: Sequence[float]):
        support = np.asarray(support, dtype=float)
        probs = np.asarray(probs, dtype=float)
        if support.ndim != 1 or support.shape != probs.shape or support.size == 0:
            raise DistributionError("support and probs must be non-empty 1-d sequences of equal length")
        if not np.all(np.isfinite(support)) or np.any(support != np.round(support)):
            raise DistributionError("support must consist of integers")
        if np.any(support < 0):
            raise DistributionError("support must be nonnegative")
        if np.any(np.diff(support) <= 0):
            raise DistributionError("support must be strictly ascending")
        if np.any(~(probs > 0)):
            raise DistributionError("probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > TAU_MASS:
            raise DistributionError(f"probabilities sum to {probs.sum():.12g}, not 1")
        cum = np.concatenate([[0.0], np.cumsum(probs)])
        cum[-1] = 1.0
        self._support = _frozen(support.astype(np.int64))
        self._probs = _frozen(probs)
        self._cum = _frozen(cum)

    @property
    def support(self) -> np.ndarray:
        return self._support

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def hull(self) -> tuple[float, float]:
        """Smallest closed interval carrying all the mass."""
        return float(self._support[0]), float(self._support[-1])

    def cdf(self, x):
        idx = np.searchsorted(self._support, x, side="right")
        return self._cum[idx]

    def cdf_left(self, x):
        idx = np.searchsorted(self._support, x, side="left")
        return self._cum[idx]

    def quantile_set(self, beta: float):
        from .functionals import Interval

        # F(s_i) = cum[i + 1]
        level = self._cum[1:]
        lo = np.searchsorted(level, beta - TAU_CMP, side="left")
        hi = np.searchsorted(level, beta + TAU_CMP, side="right")
        hi = min(hi, self._support.size - 1)
        return Interval(int(self._support[lo]), int(self._support[hi]))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random(n)
        idx = np.searchsorted(self._cum[1:], u, side="right")
        idx = np.minimum(idx, self._support.size - 1)
        return self._support[idx].astype(float)

    def __eq__(self, other):
        if not isinstance(other, DiscreteDist):
            return NotImplemented
        return np.array_equal(self._support, other._support) and np.array_equal(self._probs, other._probs)

    def __hash__(self):
        return hash((self._support.tobytes(), self._probs.tobytes()))

    def __repr__(self):
        return f"DiscreteDist(support={self._support.tolist()}, probs={self._probs.tolist()})"


class PiecewiseUniformDist:
    """Law with a piecewise-constant density.

    Piece ``i`` is ``[breakpoints[i], breakpoints[i+1]]`` and carries
    ``masses[i]`` uniformly. Zero masses are allowed and produce flat stretches
    of the CDF.
    """

    __slots__ = ("_breaks", "_masses", "_cum", "_hull")

    def __init__(self, breakpoints: Sequence[float], masses: Sequence[float]):
        breaks = np.asarray(breakpoints, dtype=float)
        masses = np.asarray(masses, dtype=float)
        if breaks.ndim != 1 or masses.ndim != 1 or breaks.size != masses.size + 1 or masses.size == 0:
            raise DistributionError("need m+1 breakpoints for m piece masses (m >= 1)")
        if not np.all(np.isfinite(breaks)):
            raise DistributionError("breakpoints must be finite")
        if np.any(np.diff(breaks) <= 0):
            raise DistributionError("breakpoints must be strictly ascending")
        if np.any(~(masses >= 0)):
            raise DistributionError("piece masses must be nonnegative")
        if abs(masses.sum() - 1.0) > TAU_MASS:
            raise DistributionError(f"piece masses sum to {masses.sum():.12g}, not 1")
        cum = np.concatenate([[0.0], np.cumsum(masses)])
        cum[-1] = 1.0
        pos = np.flatnonzero(masses > 0)
        self._breaks = _frozen(breaks)
        self._masses = _frozen(masses)
        self._cum = _frozen(cum)
        self._hull = (float(breaks[pos[0]]), float(breaks[pos[-1] + 1]))

    @property
    def breakpoints(self) -> np.ndarray:
        return self._breaks

    @property
    def masses(self) -> np.ndarray:
        return self._masses

    @property
    def densities(self) -> np.ndarray:
        return self._masses / np.diff(self._breaks)

    @property
    def hull(self) -> tuple[float, float]:
        """Smallest closed interval carrying all the mass."""
        return self._hull

    @property
    def cum(self) -> np.ndarray:
        """CDF values at the breakpoints."""
        return self._cum

    def cdf(self, x):
        return np.interp(x, self._breaks, self._cum)

    cdf_left = cdf

    # Level inversion, restricted to the support hull. Levels within TAU_CMP of
    # a breakpoint value snap to that breakpoint, so flat stretches are found
    # exactly.
    def level_lo(self, u):
        """Smallest x in the hull with F(x) >= u."""
        return self._invert(np.asarray(u, dtype=float), lower=True)

    def level_hi(self, u):
        """Largest x in the hull with F(x) <= u."""
        return self._invert(np.asarray(u, dtype=float), lower=False)

    def _invert(self, u, lower):
        C, B = self._cum, self._breaks
        m = self._masses.size
        if lower:
            i = np.searchsorted(C, u - TAU_CMP, side="left")
            i = np.clip(i, 0, m)
            snap = C[i] <= u + TAU_CMP
            piece = np.clip(i - 1, 0, m - 1)
        else:
            i = np.searchsorted(C, u + TAU_CMP, side="right") - 1
            i = np.clip(i, 0, m)
            snap = C[i] >= u - TAU_CMP
            piece = np.clip(i, 0, m - 1)
        mass = self._masses[piece]
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(mass > 0, (u - C[piece]) / np.where(mass > 0, mass, 1.0), 0.0)
        interp = B[piece] + np.clip(frac, 0.0, 1.0) * (B[piece + 1] - B[piece])
        x = np.where(snap, B[i], interp)
        x = np.clip(x, self._hull[0], self._hull[1])
        return x[()] if x.ndim == 0 else x

    def quantile_set(self, beta: float):
        from .functionals import Interval

        return Interval(float(self.level_lo(beta)), float(self.level_hi(beta)))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        pos = self._masses > 0
        m = self._masses[pos]
        starts = self._breaks[:-1][pos]
        widths = np.diff(self._breaks)[pos]
        cstart = self._cum[:-1][pos]
        u = rng.random(n)
        idx = np.searchsorted(np.cumsum(m), u, side="right")
        idx = np.minimum(idx, m.size - 1)
        frac = np.clip((u - cstart[idx]) / m[idx], 0.0, 1.0)
        return starts[idx] + frac * widths[idx]

    def __eq__(self, other):
        if not isinstance(other, PiecewiseUniformDist):
            return NotImplemented
        return np.array_equal(self._breaks, other._breaks) and np.array_equal(self._masses, other._masses)

    def __hash__(self):
        return hash((self._breaks.tobytes(), self._masses.tobytes()))

    def __repr__(self):
        return f"PiecewiseUniformDist(breakpoints={self._breaks.tolist()}, masses={self._masses.tolist()})"


Distribution = Union[DiscreteDist, PiecewiseUniformDist]


def is_discrete(F: Distribution) -> bool:
    return isinstance(F, DiscreteDist)


def _check(F):
    if not isinstance(F, (DiscreteDist, PiecewiseUniformDist)):
        raise DistributionError(f"not a distribution: {F!r}")
    return F


def cdf(F: Distribution, x):
    """Right-continuous CDF ``F(x)``; vectorized over ``x``."""
    out = _check(F).cdf(x)
    return float(out) if np.ndim(out) == 0 else out


def cdf_left(F: Distribution, x):
    """Left limit ``F(x-)``; equals :func:`cdf` for continuous laws."""
    out = _check(F).cdf_left(x)
    return float(out) if np.ndim(out) == 0 else out


def quantile_set(F: Distribution, beta: float):
    """The closed interval ``{x : F(x-) <= beta <= F(x)}`` as an ``Interval``.

    For discrete laws the endpoints are atoms; the integers in between (if any)
    are quantiles too.
    """
    if not 0.0 < beta < 1.0:
        raise DistributionError("beta must lie in (0, 1)")
    return _check(F).quantile_set(beta)


def mix(components: Sequence[Distribution], weights: Sequence[float]) -> Distribution:
    """Finite mixture ``sum_i w_i F_i``, flattened to a base kind."""
    components = [_check(F) for F in components]
    weights = np.asarray(weights, dtype=float)
    if not components or weights.shape != (len(components),):
        raise DistributionError("need one weight per component")
    if np.any(~(weights > 0)):
        raise DistributionError("mixture weights must be positive")
    if abs(weights.sum() - 1.0) > TAU_MASS:
        raise DistributionError(f"mixture weights sum to {weights.sum():.12g}, not 1")
    kinds = {type(F) for F in components}
    if len(kinds) > 1:
        raise DistributionError("cannot mix discrete and continuous components")

    if isinstance(components[0], DiscreteDist):
        support = np.unique(np.concatenate([F.support for F in components]))
        probs = np.zeros(support.size)
        for w, F in zip(weights, components):
            probs[np.searchsorted(support, F.support)] += w * F.probs
        return DiscreteDist(support, probs)

    grid = np.unique(np.concatenate([F.breakpoints for F in components]))
    masses = np.zeros(grid.size - 1)
    for w, F in zip(weights, components):
        masses += w * np.diff(F.cdf(grid))
    masses = np.clip(masses, 0.0, None)
    return PiecewiseUniformDist(grid, masses / masses.sum())


def location_scale(F: Distribution, loc: float, scale: float) -> Distribution:
    """Law of ``loc + scale * Y`` for ``Y ~ F``.

    Discrete laws only admit integer shifts with unit scale, keeping the support
    on the nonnegative integers.
    """
    _check(F)
    if not scale > 0:
        raise DistributionError("scale must be positive")
    if isinstance(F, DiscreteDist):
        if scale != 1 or float(loc) != round(float(loc)):
            raise DistributionError("discrete laws only allow integer loc with scale 1")
        return DiscreteDist(F.support + int(round(loc)), F.probs)
    return PiecewiseUniformDist(loc + scale * F.breakpoints, F.masses)


def sample(F: Distribution, seed: int, n: int) -> np.ndarray:
    """``n`` inverse-CDF draws, reproducible for a given ``seed``."""
    if n < 1:
        raise DistributionError("n must be at least 1")
    rng = np.random.default_rng(seed)
    return _check(F).sample(rng, int(n))


def uniform(lo: float = 0.0, hi: float = 1.0) -> PiecewiseUniformDist:
    return PiecewiseUniformDist([lo, hi], [1.0])


def point_mass(k: int) -> DiscreteDist:
    return DiscreteDist([k], [1.0])
