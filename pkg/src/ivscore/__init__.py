"""Interval forecast functionals, their scoring functions, and elicitability checks."""

from .distributions import (
    DiscreteDist,
    DistributionError,
    PiecewiseUniformDist,
    cdf,
    cdf_left,
    location_scale,
    mix,
    point_mass,
    quantile_set,
    sample,
    uniform,
)
from .functionals import (
    FunctionalResult,
    Interval,
    IntervalBox,
    IntervalFamily,
    IntervalSegment,
    PointSet,
    coverage,
    eti,
    gci,
    mi,
    mi_lower_discrete,
    mi_mid_continuous,
    si,
)
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
    expected_score,
    expected_scores,
    winkler_is,
)

__version__ = "0.1.0"
