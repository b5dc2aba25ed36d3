"""Mechanical checks of consistency and (non-)elicitability claims.

The lab compares a functional's exact solution set with brute-force
minimizers of exact expected scores, tracks solution sets along mixture paths
``F_lam = lam F1 + (1 - lam) F0``, and ships the counterexample fixtures.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._tol import FAIL_GAP, TAU_ARGMIN, TAU_CMP
from .distributions import (
    DiscreteDist,
    Distribution,
    PiecewiseUniformDist,
    mix,
    location_scale,
    quantile_set,
    uniform,
)
from .functionals import (
    FunctionalResult,
    Interval,
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
    CallableFunction,
    CZeroOne,
    EtiFamily,
    Winkler,
    expected_scores,
    is_decomposition,
)

__all__ = [
    "Functional",
    "ReportGrid",
    "LabReport",
    "Condition1Instance",
    "GciFixture",
    "default_lambda_grid",
    "default_grid",
    "brute_force_minimizers",
    "consistency_check",
    "cxls_check",
    "prop2_witness_check",
    "score_property_check",
    "fixture_table1",
    "fixture_example_uniform",
    "fixture_example_discrete",
    "condition1_instance",
    "dilated_pair",
    "fixture_gci_cxls",
    "random_discrete_laws",
    "random_pw_uniform_laws",
    "as_interval_score",
    "cubic_eti_score",
    "Experiment",
    "EXPERIMENTS",
    "run_experiment",
]


# --------------------------------------------------------------------------- functionals


@dataclass(frozen=True)
class Functional:
    """A named functional with its parameter.

    ``name`` is one of ``eti``, ``si``, ``gci``, ``mi`` (interval reports) or
    ``quantile``, ``lower``, ``midpoint`` (point reports: quantile level,
    lower endpoint ``l_k`` and midpoint ``m_c``).
    """

    name: str
    param: float

    _INTERVAL = {"eti": eti, "si": si, "gci": gci, "mi": mi}

    def __post_init__(self):
        if self.name not in (*self._INTERVAL, "quantile", "lower", "midpoint"):
            raise ValueError(f"unknown functional {self.name!r}")

    @property
    def report_kind(self) -> str:
        return "interval" if self.name in self._INTERVAL else "point"

    @property
    def label(self) -> str:
        return f"{self.name}({self.param:g})"

    def __call__(self, F: Distribution):
        if self.name in self._INTERVAL:
            return self._INTERVAL[self.name](F, self.param)
        if self.name == "quantile":
            q = quantile_set(F, self.param)
            if isinstance(F, DiscreteDist):
                return PointSet(tuple(Interval(x, x) for x in range(int(q.lower), int(q.upper) + 1)))
            return PointSet((q,))
        if self.name == "lower":
            return PointSet(tuple(Interval(x, x) for x in mi_lower_discrete(F, int(self.param))))
        return PointSet(tuple(mi_mid_continuous(F, self.param)))


# --------------------------------------------------------------------------- grids and reports


@dataclass(frozen=True)
class ReportGrid:
    """Finite search space of reports (intervals or points)."""

    candidates: tuple
    kind: str

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("empty report grid")

    def __len__(self):
        return len(self.candidates)

    @classmethod
    def integer_intervals(cls, lo: int, hi: int) -> "ReportGrid":
        return cls(tuple(Interval(a, b) for a in range(lo, hi + 1) for b in range(a, hi + 1)), "interval")

    @classmethod
    def from_endpoints(cls, endpoints) -> "ReportGrid":
        e = _dedupe(endpoints)
        return cls(tuple(Interval(float(a), float(b)) for i, a in enumerate(e) for b in e[i:]), "interval")

    @classmethod
    def points(cls, values) -> "ReportGrid":
        return cls(tuple(float(v) for v in _dedupe(values)), "point")


def _dedupe(values) -> np.ndarray:
    v = np.sort(np.asarray(list(values), dtype=float))
    if v.size == 0:
        return v
    return v[np.concatenate([[True], np.diff(v) > TAU_CMP])]


def _contains(solution, report) -> bool:
    return solution.contains(report)


def default_grid(F: Distribution, functional: Functional, solution=None, step: float = 0.05) -> ReportGrid:
    """Grid containing the functional's solution set for ``F``.

    Discrete laws: every integer report in ``[0, max support]``. Continuous
    laws: a uniform endpoint grid of spacing ``step`` over the support hull,
    with the exact endpoints of the solution's representatives injected.
    """
    solution = functional(F) if solution is None else solution
    lo, hi = F.hull
    reps = solution.representatives()
    if isinstance(F, DiscreteDist):
        if functional.report_kind == "interval":
            top = max([int(hi)] + [int(r.upper) for r in reps])
            return ReportGrid.integer_intervals(0, top)
        return ReportGrid.points(range(0, int(hi) + 1))
    if functional.report_kind == "interval":
        inj = [v for r in reps for v in r]
        grid = np.arange(lo, hi + step / 2, step)
        return ReportGrid.from_endpoints(np.concatenate([grid, inj]))
    pad = functional.param if functional.name == "midpoint" else 0.0
    grid = np.arange(lo - pad, hi + pad + step / 2, step)
    return ReportGrid.points(np.concatenate([grid, reps]))


@dataclass
class LabReport:
    """Outcome of a lab experiment."""

    experiment: str
    verdict: str  # "pass" | "fail" | "inconclusive"
    witnesses: list = field(default_factory=list)
    lambda_trace: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in ("pass", "fail", "inconclusive"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == "fail" and not self.witnesses:
            raise ValueError("a failing report needs at least one witness")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "lambda_trace": self.lambda_trace,
            "details": self.details,
        }


def _jsonable(report):
    if isinstance(report, Interval):
        return [float(report.lower), float(report.upper)]
    return float(report)


def _threads() -> int:
    try:
        n = int(os.environ.get("IV_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _pmap(fn, items):
    items = list(items)
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------- score adapters


@dataclass(frozen=True)
class _EndpointAdapter:
    """Point score applied to one summary of an interval report."""

    base: object
    use_midpoint: bool
    report_kind = "interval"

    @property
    def name(self):
        return f"{self.base.name}@{'midpoint' if self.use_midpoint else 'lower'}"

    def _point(self, interval):
        a, b = interval
        return (np.asarray(a) + np.asarray(b)) / 2 if self.use_midpoint else np.asarray(a)

    def __call__(self, interval, y):
        return self.base(self._point(interval), y)

    def kinks(self, interval):
        return self.base.kinks(self._point(interval))

    def to_dict(self):
        return {**self.base.to_dict(), "applied_to": "midpoint" if self.use_midpoint else "lower"}


def as_interval_score(score):
    """Lift a point score to interval reports.

    ``c01`` acts on the midpoint, every other point score on the lower
    endpoint -- the encodings under which the modal-interval scores are
    defined.
    """
    if score.report_kind == "interval":
        return score
    return _EndpointAdapter(score, isinstance(score, CZeroOne))


# --------------------------------------------------------------------------- brute force


def brute_force_minimizers(F: Distribution, score, grid: ReportGrid, tol: float = TAU_ARGMIN) -> list:
    """Grid reports whose exact expected score is within ``tol`` of the grid minimum."""
    if not len(grid):
        raise ValueError("empty report grid")
    if grid.kind == "interval":
        score = as_interval_score(score)
    es = expected_scores(F, score, list(grid.candidates))
    return [c for c, e in zip(grid.candidates, es) if e <= es.min() + tol]


def _fixture_list(fixtures):
    out = []
    for i, f in enumerate(fixtures):
        out.append(f if isinstance(f, tuple) else (f"fixture-{i}", f))
    return out


def consistency_check(
    functional: Functional,
    score,
    fixtures: Sequence,
    grid: Callable | None = None,
    step: float = 0.05,
) -> LabReport:
    """Do the brute-force minimizers coincide with the functional's solution set?

    ``fixtures`` holds distributions or ``(id, distribution)`` pairs. ``grid``
    maps ``(F, solution)`` to a :class:`ReportGrid`; by default
    :func:`default_grid` is used.
    """
    if functional.report_kind == "interval":
        score = as_interval_score(score)
    elif score.report_kind != "point":
        raise ValueError("interval score cannot evaluate point reports")

    def one(item):
        fid, F = item
        sol = functional(F)
        g = grid(F, sol) if grid is not None else default_grid(F, functional, sol, step)
        missing = [r for r in sol.representatives() if not any(_same(r, c) for c in g.candidates)]
        if missing:
            return fid, "inconclusive", [{"distribution": fid, "kind": "grid_misses_solution", "report": _jsonable(missing[0])}]
        es = expected_scores(F, score, list(g.candidates))
        best = float(es.min())
        is_min = es <= best + TAU_ARGMIN
        member = np.array([_contains(sol, c) for c in g.candidates])
        best_member = float(es[member].min()) if member.any() else math.inf
        found = []
        status = "pass"
        for idx in np.flatnonzero(member != is_min):
            gap = float(es[idx] - best) if member[idx] else float(best_member - es[idx])
            if member[idx]:
                kind = "not_minimizing" if gap >= FAIL_GAP else "marginal"
            else:
                kind = "spurious_minimizer"
            found.append({"distribution": fid, "kind": kind, "report": _jsonable(g.candidates[idx]), "gap": gap})
        if any(w["kind"] != "marginal" for w in found):
            status = "fail"
        elif found:
            status = "inconclusive"
        found.sort(key=lambda w: w["kind"] == "marginal")
        return fid, status, found[:1]

    results = _pmap(one, _fixture_list(fixtures))
    statuses = [s for _, s, _ in results]
    witnesses = [w for _, s, ws in results for w in ws if s != "pass"]
    if "fail" in statuses:
        verdict = "fail"
        witnesses = [w for _, s, ws in results if s == "fail" for w in ws]
    elif "inconclusive" in statuses:
        verdict = "inconclusive"
    else:
        verdict = "pass"
    return LabReport(
        experiment=f"consistency:{functional.label}:{score.name}",
        verdict=verdict,
        witnesses=witnesses,
        details={
            "fixtures": len(results),
            "failing": statuses.count("fail"),
            "inconclusive": statuses.count("inconclusive"),
            "score": score.to_dict() if hasattr(score, "to_dict") else score.name,
        },
    )


def _same(r, c) -> bool:
    if isinstance(r, Interval):
        return isinstance(c, Interval) and r.close_to(c)
    return not isinstance(c, Interval) and abs(r - c) <= TAU_CMP


# --------------------------------------------------------------------------- level sets


def default_lambda_grid(n: int = 99) -> list[float]:
    return [i / (n + 1) for i in range(1, n + 1)]


def _mixture(F0, F1, lam):
    if lam <= 0:
        return F0
    if lam >= 1:
        return F1
    return mix([F0, F1], [1 - lam, lam])


def _summary(sol):
    if isinstance(sol, FunctionalResult) and sol.is_finite:
        return [iv.to_list() for iv in sol.intervals()]
    return sol.to_dict()


def cxls_check(
    functional: Functional, F0: Distribution, F1: Distribution, lambda_grid=None, probes: Sequence = ()
) -> LabReport:
    """Check CxLS and CxLS* along the mixture path from ``F0`` to ``F1``.

    Continuum solution sets are compared on the union of the three sets'
    representatives plus any extra ``probes``, so every reported witness is a
    genuine violation.
    """
    lambda_grid = default_lambda_grid() if lambda_grid is None else list(lambda_grid)
    T0, T1 = functional(F0), functional(F1)
    base = list(probes) + T0.representatives() + T1.representatives()
    shared = [r for r in base if T0.contains(r) and T1.contains(r)]

    def one(lam):
        Tl = functional(_mixture(F0, F1, lam))
        cands = base + Tl.representatives()
        cx_w, star_w = None, None
        for r in cands:
            both = T0.contains(r) and T1.contains(r)
            inl = Tl.contains(r)
            if both and not inl and cx_w is None:
                cx_w = r
            if shared and both != inl and star_w is None:
                star_w = r
        return lam, Tl, cx_w, star_w

    witnesses, trace = [], []
    cx_ok = star_ok = True
    for lam, Tl, cx_w, star_w in _pmap(one, lambda_grid):
        trace.append({"lambda": lam, "solution": _summary(Tl), "cxls": cx_w is None, "cxls_star": star_w is None})
        if cx_w is not None:
            cx_ok = False
            witnesses.append({"lambda": lam, "property": "cxls", "report": _jsonable(cx_w)})
        if star_w is not None:
            star_ok = False
            witnesses.append(
                {
                    "lambda": lam,
                    "property": "cxls_star",
                    "report": _jsonable(star_w),
                    "in_T0": T0.contains(star_w),
                    "in_T1": T1.contains(star_w),
                    "in_T_lambda": Tl.contains(star_w),
                }
            )
    return LabReport(
        experiment=f"cxls:{functional.label}",
        verdict="pass" if cx_ok and star_ok else "fail",
        witnesses=witnesses,
        lambda_trace=trace,
        details={
            "cxls": "pass" if cx_ok else "fail",
            "cxls_star": "pass" if star_ok else "fail",
            "shared": [_jsonable(r) for r in shared[:5]],
            "T0": _summary(T0),
            "T1": _summary(T1),
        },
    )


def prop2_witness_check(functional: Functional, F0, F1, t0, t1, lambda_grid=None) -> LabReport:
    """Confirm the non-elicitability witness conditions on a lambda grid.

    At every grid point exactly one of ``t0``, ``t1`` must belong to
    ``T(F_lam)``.
    """
    lambda_grid = default_lambda_grid() if lambda_grid is None else list(lambda_grid)
    T0, T1 = functional(F0), functional(F1)
    name = f"prop2:{functional.label}"
    pre = T0.contains(t0) and not T1.contains(t0) and T1.contains(t1) and not T0.contains(t1)
    if not pre:
        return LabReport(name, "inconclusive", details={"precondition": "t0 in T(F0)\\T(F1) and t1 in T(F1)\\T(F0) violated"})

    def one(lam):
        Tl = functional(_mixture(F0, F1, lam))
        return lam, Tl.contains(t0), Tl.contains(t1), Tl

    trace, witnesses = [], []
    for lam, c0, c1, Tl in _pmap(one, lambda_grid):
        trace.append({"lambda": lam, "t0_in": c0, "t1_in": c1, "solution": _summary(Tl)})
        if c0 == c1:
            witnesses.append({"lambda": lam, "t0_in": c0, "t1_in": c1})
    return LabReport(
        name,
        "fail" if witnesses else "pass",
        witnesses=witnesses,
        lambda_trace=trace,
        details={"t0": _jsonable(t0), "t1": _jsonable(t1)},
    )


# --------------------------------------------------------------------------- score properties


def _dyadic(rng, n, lo=-10.0, hi=10.0, denom=8):
    return rng.integers(int(lo * denom), int(hi * denom) + 1, size=n) / denom


def score_property_check(score, prop: str, trials: int = 10_000, seed: int = 0, tol: float = 1e-12) -> LabReport:
    """Test translation invariance, positive homogeneity or symmetry of an interval score.

    Inputs are dyadic rationals, which are exact in binary floating point.
    """
    if prop not in ("translation", "homogeneity", "symmetry"):
        raise ValueError(f"unknown property {prop!r}")
    rng = np.random.default_rng(seed)
    a, b, y = _dyadic(rng, trials), _dyadic(rng, trials), _dyadic(rng, trials)
    a, b = np.minimum(a, b), np.maximum(a, b)
    b = np.where(a == b, b + 0.125, b)
    if prop == "translation":
        z = _dyadic(rng, trials)
        lhs, rhs = score((a - z, b - z), y - z), score((a, b), y)
        extra = {"z": z}
    elif prop == "homogeneity":
        c = rng.integers(1, 33, size=trials) / 8
        c = np.where(c == 1.0, 2.0, c)
        lhs, rhs = score((c * a, c * b), c * y), c * score((a, b), y)
        extra = {"c": c}
    else:
        lhs, rhs = score((-b, -a), -y), score((a, b), y)
        extra = {}
    err = np.abs(lhs - rhs)
    bad = np.flatnonzero(err > tol * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs))))
    witnesses = []
    if bad.size:
        i = int(bad[0])
        w = {"interval": [float(a[i]), float(b[i])], "y": float(y[i]), "lhs": float(lhs[i]), "rhs": float(rhs[i])}
        w.update({k: float(v[i]) for k, v in extra.items()})
        witnesses.append(w)
    return LabReport(
        f"property:{getattr(score, 'name', 'score')}:{prop}",
        "fail" if bad.size else "pass",
        witnesses=witnesses,
        details={"trials": trials, "violations": int(bad.size), "max_error": float(err.max())},
    )


# --------------------------------------------------------------------------- fixtures


def fixture_table1(alpha: float = 0.2):
    """Four-atom law G and the properties of its equal-tailed intervals."""
    G = DiscreteDist([0, 1, 2, 3], [0.1, 0.4, 0.4, 0.1])
    score = Winkler(alpha)
    rows = []
    order = [Interval(1, 2), Interval(0, 2), Interval(1, 3), Interval(0, 3)]
    members = set(eti(G, alpha).intervals())
    for iv in order + sorted(members - set(order)):
        if iv not in members:
            continue
        y = G.support.astype(float)
        length, penalty = is_decomposition(alpha, iv, y)
        rows.append(
            {
                "interval": iv,
                "coverage": coverage(G, iv),
                "expected_is": float(expected_scores(G, score, [iv])[0]),
                "length": float(length[0]),
                "expected_penalty": float(penalty @ G.probs),
            }
        )
    return G, rows


def fixture_example_uniform(alpha: float = 0.2):
    """Two piecewise-uniform laws whose shortest intervals are [0,1] and [0,2]."""
    if not 0 < alpha < 0.6:
        raise ValueError("alpha must lie in (0, 3/5)")
    F0 = PiecewiseUniformDist([0, 1, 2, 5], [1 - alpha, 0.0, alpha])
    F1 = PiecewiseUniformDist([0, 2, 5], [1 - alpha, alpha])
    return F0, F1


def _spread(total, cap, left_room):
    """Split ``total`` into non-increasing chunks of at most ``cap`` (left then right)."""
    left_total = min(total / 2, cap * left_room)
    right_total = total - left_total

    def chunks(t):
        out = []
        while t > 1e-15:
            out.append(min(cap, t))
            t -= out[-1]
        return out

    return chunks(left_total), chunks(right_total)


def fixture_example_discrete(alpha: float = 0.25, k: int = 2, eps: float = 0.05, delta: float = 0.02):
    """Discrete pair on which the shortest interval loses CxLS*.

    Both laws put ``eps + delta`` on ``k - 1`` and ``1 - alpha - eps`` on
    ``k``; ``k + 1`` gets ``eps + delta`` under ``F0`` and ``eps - delta``
    under ``F1``. The remaining mass is spread outward in equal chunks no
    larger than the neighbouring atom, half on each side (the left side takes
    what fits above zero), so ``k`` stays the unique mode.
    """
    if not 0 < alpha < 1 / 3:
        raise ValueError("alpha must lie in (0, 1/3)")
    if int(k) != k or k < 1:
        raise ValueError("k must be an integer >= 1")
    if not 0 < eps < alpha / 3:
        raise ValueError("eps must lie in (0, alpha/3)")
    if not 0 < delta < eps:
        raise ValueError("delta must lie in (0, eps)")
    k = int(k)

    def build(upper):
        core = {k - 1: eps + delta, k: 1 - alpha - eps, k + 1: upper}
        rest = 1 - sum(core.values())
        cap = min(eps + delta, upper)
        left, right = _spread(rest, cap, k - 1)
        for i, m in enumerate(left):
            core[k - 2 - i] = m
        for i, m in enumerate(right):
            core[k + 2 + i] = m
        xs = sorted(core)
        return DiscreteDist(xs, [core[x] for x in xs])

    F0, F1 = build(eps + delta), build(eps - delta)
    expected0 = [Interval(k - 1, k), Interval(k, k + 1)]
    if si(F0, alpha).intervals() != expected0 or si(F1, alpha).intervals() != [Interval(k - 1, k)]:
        raise AssertionError("discrete shortest-interval fixture does not have the required solution sets")
    for F in (F0, F1):
        p = dict(zip(F.support.tolist(), F.probs.tolist()))
        left = [p[x] for x in sorted(p) if x <= k]
        right = [p[x] for x in sorted(p) if x >= k]
        if any(b < a for a, b in zip(left, left[1:])) or any(b > a for a, b in zip(right, right[1:])):
            raise AssertionError("fixture is not unimodal")
    return F0, F1


class Condition1Instance(NamedTuple):
    F: PiecewiseUniformDist
    a: float
    b: float
    eps: float
    alpha: float


def condition1_instance(alpha: float, b: float, eps: float, n_beta: int = 20) -> Condition1Instance:
    """``F0 = alpha U[2b, 3b] + (1 - alpha) U[0, b]`` with the gap conditions checked."""
    if not 0 < alpha < 0.5:
        raise ValueError("alpha must lie in (0, 1/2)")
    if not (b > 0 and eps > 0):
        raise ValueError("b and eps must be positive")
    F = mix([uniform(0, b), uniform(2 * b, 3 * b)], [1 - alpha, alpha])
    res = si(F, alpha)
    if not (res.is_finite and len(res.intervals()) == 1 and res.contains(Interval(0.0, b))):
        raise AssertionError(f"shortest interval is not [0, {b}]")
    if abs(F.cdf(b) - F.cdf(b + eps)) > TAU_CMP:
        raise AssertionError("no gap of width eps to the right of the shortest interval")
    for beta in np.linspace(0, alpha, n_beta + 2)[1:-1]:
        if not si(F, float(beta)).length > b + eps / 2:
            raise AssertionError(f"shortest interval at level {beta} is not long enough")
    return Condition1Instance(F, 0.0, float(b), float(eps), float(alpha))


def dilated_pair(inst: Condition1Instance):
    """``(F0, F1, t0, t1)`` with ``F1`` the dilation of ``F0`` by ``(b + eps/2) / b``."""
    stretch = (inst.b + inst.eps / 2) / inst.b
    F1 = location_scale(inst.F, 0.0, stretch)
    return inst.F, F1, Interval(inst.a, inst.b), Interval(inst.a, inst.b + inst.eps / 2)


class GciFixture(NamedTuple):
    F0: PiecewiseUniformDist
    F1: PiecewiseUniformDist
    witness: Interval

    @property
    def shared(self) -> Interval:
        """A GCI member common to both laws."""
        return Interval(0.0, float(self.F1.breakpoints[1]))


def fixture_gci_cxls(alpha: float = 0.2) -> GciFixture:
    """Two laws sharing the GCI ``[0, 1 - alpha]``.

    ``F0`` is uniform on [0, 1]; ``F1`` puts ``1 - alpha`` uniformly on
    ``[0, 1 - alpha]`` and ``alpha`` on ``[2, 3]``. The window ``[a, 1]``
    over-covers under ``F0`` and under-covers under ``F1``; for
    ``alpha < 2/3`` it has exact coverage ``1 - alpha`` at ``lambda = 1/2``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    F0 = uniform(0.0, 1.0)
    F1 = PiecewiseUniformDist([0.0, 1 - alpha, 2.0, 3.0], [1 - alpha, 0.0, alpha])
    a = alpha / 2 if alpha < 2 / 3 else (1 - alpha) / 2
    return GciFixture(F0, F1, Interval(a, 1.0))


def random_discrete_laws(n: int, seed: int, top: int = 10, concentration: float = 1.0) -> list:
    """Symmetric-Dirichlet laws on ``{0, ..., top}``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        p = rng.dirichlet(np.full(top + 1, concentration))
        p = np.maximum(p, 1e-12)
        out.append((f"dirichlet-{seed}-{i}", DiscreteDist(np.arange(top + 1), p / p.sum())))
    return out


def random_pw_uniform_laws(n: int, seed: int, width: float = 5.0) -> list:
    """Random piecewise-uniform laws on ``[0, width]`` with dyadic breakpoints.

    Roughly a third of the interior pieces get zero mass to create gaps.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        m = int(rng.integers(3, 8))
        cuts = np.sort(rng.choice(np.arange(1, int(width * 8)), size=m - 1, replace=False)) / 8
        breaks = np.concatenate([[0.0], cuts, [width]])
        w = rng.dirichlet(np.ones(m))
        gap = rng.random(m) < 0.3
        gap[0] = gap[-1] = False
        w = np.where(gap, 0.0, w)
        out.append((f"pw-uniform-{seed}-{i}", PiecewiseUniformDist(breaks, w / w.sum())))
    return out


def cubic_eti_score(alpha: float = 0.2) -> EtiFamily:
    """ETI score with ``g1 = g2 = x**3``: consistent but not translation invariant."""
    g = CallableFunction(lambda x: x**3)
    return EtiFamily(alpha, 1.0, 1.0, g, g)


# --------------------------------------------------------------------------- experiments


def _exp_table1(seed: int) -> LabReport:
    expected = {
        (1, 2): (0.8, 3.0, 1.0, 2.0),
        (0, 2): (0.9, 3.0, 2.0, 1.0),
        (1, 3): (0.9, 3.0, 2.0, 1.0),
        (0, 3): (1.0, 3.0, 3.0, 0.0),
    }
    G, rows = fixture_table1()
    witnesses = []
    got = {}
    for r in rows:
        key = (int(r["interval"].lower), int(r["interval"].upper))
        got[key] = (r["coverage"], r["expected_is"], r["length"], r["expected_penalty"])
    for key in set(expected) | set(got):
        want, have = expected.get(key), got.get(key)
        if want is None or have is None or any(abs(x - y) > 1e-12 for x, y in zip(want, have)):
            witnesses.append({"distribution": "G", "report": list(key), "expected": want, "computed": have})
    minimizers = brute_force_minimizers(G, Winkler(0.2), ReportGrid.integer_intervals(0, 3))
    if sorted(minimizers) != sorted(Interval(*k) for k in expected):
        witnesses.append({"distribution": "G", "report": None, "brute_force": [_jsonable(m) for m in minimizers]})
    table = [
        {
            "interval": _jsonable(r["interval"]),
            "coverage": r["coverage"],
            "expected_is": r["expected_is"],
            "length": r["length"],
            "expected_penalty": r["expected_penalty"],
        }
        for r in rows
    ]
    return LabReport("table1", "fail" if witnesses else "pass", witnesses, details={"rows": table})


def _exp_example_uniform(seed: int) -> LabReport:
    F0, F1 = fixture_example_uniform(0.2)
    T = Functional("si", 0.2)
    rep = prop2_witness_check(T, F0, F1, Interval(0, 1), Interval(0, 2))
    cons = consistency_check(T, Winkler(0.2), [("F0", F0), ("F1", F1)])
    rep.experiment = "example-uniform"
    rep.details["winkler_consistency"] = {"verdict": cons.verdict, "witnesses": cons.witnesses}
    return rep


def _exp_example_discrete(seed: int) -> LabReport:
    F0, F1 = fixture_example_discrete()
    rep = cxls_check(Functional("si", 0.25), F0, F1)
    rep.experiment = "example-discrete"
    return rep


def _exp_condition1(seed: int) -> LabReport:
    inst = condition1_instance(0.2, 1.0, 0.5)
    F0, F1, t0, t1 = dilated_pair(inst)
    T = Functional("si", inst.alpha)
    rep = prop2_witness_check(T, F0, F1, t0, t1)
    cons = consistency_check(T, Winkler(inst.alpha), [("F0", F0), ("F1", F1)])
    rep.experiment = "condition1"
    rep.details["winkler_consistency"] = {"verdict": cons.verdict, "witnesses": cons.witnesses}
    return rep


def _exp_gci_cxls(seed: int) -> LabReport:
    fx = fixture_gci_cxls(0.2)
    rep = cxls_check(Functional("gci", 0.2), fx.F0, fx.F1, probes=[fx.witness])
    rep.experiment = "gci-cxls"
    rep.details["designed_witness"] = _jsonable(fx.witness)
    rep.details["shared_member"] = _jsonable(fx.shared)
    return rep


def _exp_eti_consistency(seed: int) -> LabReport:
    rep = consistency_check(Functional("eti", 0.2), Winkler(0.2), random_discrete_laws(100, seed))
    rep.experiment = "eti-consistency"
    return rep


def _exp_mi_consistency(seed: int) -> LabReport:
    from .scoring import KZeroOne

    rep = consistency_check(Functional("lower", 1), KZeroOne(1), random_discrete_laws(100, seed))
    rep.experiment = "mi-consistency"
    return rep


def _asymmetric_eti_score(alpha: float = 0.2) -> EtiFamily:
    from .scoring import LinearFunction

    return EtiFamily(alpha, 1.0, 1.0, LinearFunction(1.0, 0.0), LinearFunction(2.0, 0.0))


def _exp_score_properties(seed: int) -> LabReport:
    cases = [
        (Winkler(0.2), "translation", "pass"),
        (Winkler(0.2), "homogeneity", "pass"),
        (Winkler(0.2), "symmetry", "pass"),
        (cubic_eti_score(0.2), "translation", "fail"),
        (cubic_eti_score(0.2), "homogeneity", "fail"),
        (_asymmetric_eti_score(0.2), "symmetry", "fail"),
    ]
    subs, witnesses = [], []
    for score, prop, want in cases:
        r = score_property_check(score, prop, seed=seed)
        subs.append({"score": _describe(score), "property": prop,
                     "expected": want, "verdict": r.verdict, "witnesses": r.witnesses})
        if r.verdict != want:
            witnesses.append({"score": score.name, "property": prop, "expected": want, "verdict": r.verdict})
    return LabReport("score-properties", "fail" if witnesses else "pass", witnesses, details={"checks": subs})


def _describe(score) -> dict:
    try:
        return score.to_dict()
    except TypeError:
        return {"score": score.name, "note": "uses a non-serializable monotone function"}


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    expected: str
    run: Callable[[int], LabReport]

    def matches(self, report: LabReport) -> bool:
        if report.verdict != self.expected:
            return False
        if self.name == "example-discrete":
            return report.details.get("cxls") == "pass" and report.details.get("cxls_star") == "fail"
        if self.name in ("example-uniform", "condition1"):
            return report.details["winkler_consistency"]["verdict"] == "fail"
        return True


EXPERIMENTS: dict[str, Experiment] = {
    e.name: e
    for e in [
        Experiment("table1", "equal-tailed intervals of a four-atom law and their expected interval scores", "pass", _exp_table1),
        Experiment("example-uniform", "non-elicitability witness for the shortest interval on two piecewise-uniform laws", "pass", _exp_example_uniform),
        Experiment("example-discrete", "shortest interval keeps CxLS but loses CxLS* on a unimodal discrete pair", "fail", _exp_example_discrete),
        Experiment("condition1", "non-elicitability witness for the shortest interval from a gap construction", "pass", _exp_condition1),
        Experiment("gci-cxls", "guaranteed-coverage interval loses CxLS* on a mixture path", "fail", _exp_gci_cxls),
        Experiment("eti-consistency", "interval score elicits the equal-tailed interval on random discrete laws", "pass", _exp_eti_consistency),
        Experiment("mi-consistency", "k-zero-one loss elicits the modal lower endpoint on random discrete laws", "pass", _exp_mi_consistency),
        Experiment("score-properties", "translation, homogeneity and symmetry of interval scores", "pass", _exp_score_properties),
    ]
}


def run_experiment(name: str, seed: int = 0) -> tuple[LabReport, bool]:
    """Run a named experiment; returns the report and whether it matched expectations."""
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    exp = EXPERIMENTS[name]
    report = exp.run(seed)
    return report, exp.matches(report)
