import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ivscore.distributions import DiscreteDist, PiecewiseUniformDist, cdf, mix, point_mass, uniform
from ivscore.functionals import (
    FunctionalResult,
    Interval,
    IntervalFamily,
    coverage,
    eti,
    gci,
    mi,
    mi_lower_discrete,
    mi_mid_continuous,
    si,
)

TAU = 1e-9
G = DiscreteDist([0, 1, 2, 3], [0.1, 0.4, 0.4, 0.1])
PYRAMID = PiecewiseUniformDist([0, 0.5, 0.75, 1.25, 1.5, 2], [0.1, 0.15, 0.5, 0.15, 0.1])


def gap_law(alpha=0.2):
    return PiecewiseUniformDist([0, 1, 2, 5], [1 - alpha, 0.0, alpha])


def spread_law(alpha=0.2):
    return PiecewiseUniformDist([0, 2, 5], [1 - alpha, alpha])


def family(result, i=0):
    return result.families[i]


# ----------------------------------------------------------------- brute-force oracle (discrete)


def _dense(F, top=12):
    p = np.zeros(top + 1)
    p[F.support] = F.probs
    return p


def _cov(p, a, b):
    return p[a : b + 1].sum()


def oracle_quantile(p, beta):
    cum = np.cumsum(p)
    left = np.concatenate([[0.0], cum[:-1]])
    return [x for x in range(p.size) if left[x] <= beta + TAU and beta <= cum[x] + TAU]


def oracle_eti(p, alpha):
    return {(a, b) for a in oracle_quantile(p, alpha / 2) for b in oracle_quantile(p, 1 - alpha / 2) if a <= b}


def oracle_gci(p, alpha):
    out = set()
    for a, b in itertools.combinations_with_replacement(range(p.size), 2):
        c = _cov(p, a, b)
        if c >= 1 - alpha - TAU and c - p[b] <= 1 - alpha + TAU and c - p[a] <= 1 - alpha + TAU:
            out.add((a, b))
    return out


def oracle_si(p, alpha):
    ok = [(a, b) for a, b in itertools.combinations_with_replacement(range(p.size), 2) if _cov(p, a, b) >= 1 - alpha - TAU]
    best = min(b - a for a, b in ok)
    return {(a, b) for a, b in ok if b - a == best}


def oracle_lower(p, k):
    cov = [_cov(p, x, x + k) for x in range(p.size)]
    m = max(cov)
    return [x for x, c in enumerate(cov) if c >= m - TAU]


def as_pairs(result):
    return {(int(iv.lower), int(iv.upper)) for iv in result.intervals()}


def random_laws(n, seed, grid=None):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        size = int(rng.integers(1, 14))
        support = np.sort(rng.choice(13, size=size, replace=False))
        if grid:
            w = rng.integers(1, 5, size=size).astype(float)
            w = w / w.sum()
        else:
            w = rng.dirichlet(np.ones(size))
        yield DiscreteDist(support, w)


@pytest.mark.parametrize("grid", [False, True], ids=["generic", "ties"])
@pytest.mark.parametrize("alpha", [0.1, 0.2, 0.25, 0.5])
def test_discrete_functionals_match_enumeration(alpha, grid):
    for F in random_laws(60, int(alpha * 100) + grid, grid):
        p = _dense(F)
        assert as_pairs(eti(F, alpha)) == oracle_eti(p, alpha)
        g, want = gci(F, alpha), oracle_gci(p, alpha)
        for a, b in itertools.combinations_with_replacement(range(p.size), 2):
            assert g.contains(Interval(a, b)) == ((a, b) in want), (a, b)
        assert as_pairs(si(F, alpha)) == oracle_si(p, alpha)
        for k in (0, 1, 2, 3):
            assert mi_lower_discrete(F, k) == oracle_lower(p, k)
            if k:
                assert sorted(int(iv.lower) for iv in mi(F, k / 2).intervals()) == oracle_lower(p, k)


# ----------------------------------------------------------------- worked examples


class TestEti:
    def test_table_law(self):
        r = eti(G, 0.2)
        assert r.intervals() == [Interval(0, 2), Interval(0, 3), Interval(1, 2), Interval(1, 3)]
        assert r.coverage == pytest.approx(0.8)
        assert r.length == 3

    def test_uniform(self):
        r = eti(uniform(), 0.2)
        assert r.is_finite and len(r.families) == 1
        assert r.contains(Interval(0.1, 0.9))
        assert r.coverage == pytest.approx(0.8)

    def test_pyramid_agrees_with_si(self):
        e, s = eti(PYRAMID, 0.5), si(PYRAMID, 0.5)
        assert e.intervals()[0].close_to(Interval(0.75, 1.25))
        assert s.intervals()[0].close_to(Interval(0.75, 1.25))

    def test_flat_quantiles_give_a_box(self):
        r = eti(gap_law(0.2), 0.4)
        # lower quantile 0.2 is unique, upper 0.8 is the whole gap [1, 2]
        assert not r.is_finite
        assert r.contains(Interval(0.25, 1.0)) and r.contains(Interval(0.25, 2.0)) and r.contains(Interval(0.25, 1.5))
        assert not r.contains(Interval(0.25, 2.1))


class TestGci:
    def test_table_law(self):
        r = gci(G, 0.2)
        assert Interval(0, 3) not in r.intervals()
        assert Interval(1, 2) in r.intervals()
        assert r.intervals() == [Interval(0, 2), Interval(1, 2), Interval(1, 3)]

    def test_uniform_family(self):
        r = gci(uniform(), 0.2)
        for x in np.linspace(0, 0.2, 9):
            assert r.contains(Interval(x, x + 0.8))
        assert not r.contains(Interval(0.25, 1.05))
        assert not r.contains(Interval(0.1, 0.95))

    def test_gap_law_pieces(self):
        r = gci(gap_law(0.2), 0.2)
        # left endpoint at 0, right endpoint anywhere in the gap
        for b in (1.0, 1.5, 2.0):
            assert r.contains(Interval(0.0, b))
        # sliding window: a in (0, 0.25], right endpoint in the last piece
        for a in (0.05, 0.1, 0.25):
            b = 2 + (0.8 * a) / (0.2 / 3)
            assert r.contains(Interval(a, b))
        assert not r.contains(Interval(0.3, 5.0))

    def test_members_have_exact_coverage(self):
        for F in (gap_law(), spread_law(), PYRAMID, mix([uniform(0, 1), uniform(3, 4)], [0.6, 0.4])):
            for alpha in (0.1, 0.3, 0.5):
                for iv in gci(F, alpha).representatives():
                    assert coverage(F, iv) == pytest.approx(1 - alpha, abs=1e-9)

    def test_windows_past_the_support(self):
        r = gci(uniform(), 0.2)
        assert r.contains(Interval(-5.0, 0.8)) and r.contains(Interval(0.2, 40.0))
        assert not r.contains(Interval(-5.0, 0.9)) and not r.contains(Interval(-1.0, 2.0))
        assert r.length == float("inf") and r.to_dict()["length"] is None

    def test_discrete_tail_past_the_support(self):
        r = gci(G, 0.1)
        # F(1-) = 0.1, so [1, b] keeps coverage 0.9 for every b beyond the last atom
        for b in (3, 4, 10, 100):
            assert r.contains(Interval(1, b))
        assert not r.contains(Interval(1, 4.5))
        assert r.contains(Interval(0, 3)) and not r.is_finite
        s = gci(DiscreteDist([2, 3, 5], [0.3, 0.5, 0.2]), 0.2)
        assert sorted(s.intervals()) == [Interval(0, 3), Interval(0, 4), Interval(1, 3), Interval(1, 4),
                                         Interval(2, 3), Interval(2, 4), Interval(2, 5)]


def _bisect_level(F, u):
    lo, hi = F.hull
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(F, mid) < u:
            lo = mid
        else:
            hi = mid
    return hi


pw_laws = st.integers(2, 6).flatmap(
    lambda m: st.tuples(
        st.lists(st.integers(1, 24), min_size=m, max_size=m),
        st.lists(st.integers(0, 12), min_size=m, max_size=m).filter(lambda w: w[0] > 0 and w[-1] > 0),
    )
).map(lambda t: PiecewiseUniformDist(np.concatenate([[0], np.cumsum(t[0])]) / 8, np.array(t[1]) / sum(t[1])))
alphas = st.sampled_from([0.05, 0.1, 0.2, 0.3, 0.5, 0.7])


@settings(max_examples=80, deadline=None)
@given(pw_laws, alphas)
def test_gci_contains_every_exact_coverage_window(F, alpha):
    r = gci(F, alpha)
    lo, hi = F.hull
    for a in np.linspace(lo - 1, hi, 23):
        u = cdf(F, a) + 1 - alpha
        if u > 1 - 1e-9:
            continue
        b = _bisect_level(F, u)
        assert r.contains(Interval(a, b), tol=1e-7), (a, b)


def _window_max(F, w):
    cand = np.concatenate([F.breakpoints, F.breakpoints - w])
    return float(np.max(cdf(F, cand + w) - cdf(F, cand))), cand


class TestSi:
    def test_uniform(self):
        r = si(uniform(), 0.2)
        fam = family(r)
        assert fam.lower_range == pytest.approx((0.0, 0.2))
        assert fam.length == pytest.approx(0.8)

    def test_gap_laws_and_mixture(self):
        F0, F1 = gap_law(), spread_law()
        assert si(F0, 0.2).intervals()[0].close_to(Interval(0, 1))
        assert si(F1, 0.2).intervals()[0].close_to(Interval(0, 2))
        assert si(mix([F0, F1], [0.5, 0.5]), 0.2).intervals()[0].close_to(Interval(0, 2))

    def test_discrete_recipe_pair(self):
        from ivscore.lab import fixture_example_discrete

        F0, F1 = fixture_example_discrete()
        assert si(F0, 0.25).intervals() == [Interval(1, 2), Interval(2, 3)]
        assert si(F1, 0.25).intervals() == [Interval(1, 2)]

    def test_table_law(self):
        assert si(G, 0.2).intervals() == [Interval(1, 2)]


@settings(max_examples=80, deadline=None)
@given(pw_laws, alphas)
def test_si_is_shortest(F, alpha):
    r = si(F, alpha)
    L = r.length
    best, _ = _window_max(F, L)
    assert best >= 1 - alpha - 1e-9
    shorter, _ = _window_max(F, L - 1e-6)
    assert shorter < 1 - alpha + 1e-9
    for iv in r.representatives():
        assert iv.length == pytest.approx(L, abs=1e-9)
        assert coverage(F, iv) >= 1 - alpha - 1e-9
    # never longer than an equal-tailed interval
    assert L <= min(iv.length for iv in eti(F, alpha).representatives()) + 1e-9


@settings(max_examples=80, deadline=None)
@given(pw_laws, alphas)
def test_si_finds_every_shortest_window(F, alpha):
    r = si(F, alpha)
    L = r.length
    lo, hi = F.hull
    for a in np.linspace(lo, hi - L, 41):
        if coverage(F, Interval(a, a + L)) >= 1 - alpha - 1e-12:
            assert r.contains(Interval(a, a + L), tol=1e-7)


class TestMi:
    def test_uniform_family(self):
        r = mi(uniform(), 0.25)
        fam = family(r)
        assert fam.lower_range == pytest.approx((0.0, 0.5))
        assert fam.length == pytest.approx(0.5)

    def test_half_length_reading_of_window(self):
        # a window of total length c corresponds to mi(F, c / 2)
        r = mi(uniform(), 0.8 / 2)
        assert family(r).length == pytest.approx(0.8)
        assert family(r).lower_range == pytest.approx((0.0, 0.2))

    def test_table_law(self):
        r = mi(G, 0.5)
        assert r.intervals() == [Interval(1, 2)]
        assert r.coverage == pytest.approx(0.8)

    def test_pyramid_centred(self):
        for c in (0.25, 0.5):
            (iv,) = mi(PYRAMID, c).intervals()
            assert (iv.lower + iv.upper) / 2 == pytest.approx(1.0)
        # flat pieces make other lengths set-valued, but the set stays symmetric about 1
        for c in (0.1, 0.9):
            (m,) = mi_mid_continuous(PYRAMID, c)
            assert m.lower < m.upper
            assert (m.lower + m.upper) / 2 == pytest.approx(1.0)

    def test_lower_endpoint_encoding(self):
        assert mi_lower_discrete(G, 0) == [1, 2]
        assert mi_lower_discrete(G, 1) == [1]
        assert mi_lower_discrete(point_mass(7), 3) == [4, 5, 6, 7]

    def test_midpoint_encoding(self):
        (u,) = mi_mid_continuous(uniform(), 0.25)
        assert (u.lower, u.upper) == pytest.approx((0.25, 0.75))
        (p,) = mi_mid_continuous(PYRAMID, 0.25)
        assert (p.lower, p.upper) == pytest.approx((1.0, 1.0))
        (g,) = mi_mid_continuous(gap_law(), 0.5)
        assert (g.lower, g.upper) == pytest.approx((0.5, 0.5))

    def test_midpoint_rejects_discrete(self):
        with pytest.raises((TypeError, ValueError)):
            mi_mid_continuous(G, 0.5)

    def test_duality_with_si(self):
        F = gap_law()
        L = si(F, 0.2).length
        r = mi(F, L / 2)
        assert r.intervals()[0].close_to(si(F, 0.2).intervals()[0])


@settings(max_examples=80, deadline=None)
@given(pw_laws, st.sampled_from([0.1, 0.25, 0.5, 1.0]))
def test_mi_is_argmax(F, c):
    r = mi(F, c)
    best, cand = _window_max(F, 2 * c)
    assert r.coverage == pytest.approx(best, abs=1e-9)
    for iv in r.representatives():
        assert coverage(F, iv) == pytest.approx(best, abs=1e-9)
    for a in np.linspace(F.hull[0] - 2 * c, F.hull[1], 61):
        if cdf(F, a + 2 * c) - cdf(F, a) >= best - 1e-12:
            assert r.contains(Interval(a, a + 2 * c), tol=1e-7)
    mids = mi_mid_continuous(F, c)
    for m in mids:
        for x in (m.lower, m.upper):
            assert r.contains(Interval(x - c, x + c), tol=1e-7)


@settings(max_examples=40, deadline=None)
@given(pw_laws)
def test_mi_coverage_monotone_in_c(F):
    covs = [mi(F, c).coverage for c in (0.05, 0.1, 0.25, 0.5, 1.0, 2.0)]
    assert all(b >= a - 1e-12 for a, b in zip(covs, covs[1:]))


def test_si_never_longer_than_eti_discrete():
    for F in random_laws(100, 5):
        for alpha in (0.1, 0.3, 0.5):
            assert si(F, alpha).length <= min(iv.length for iv in eti(F, alpha).intervals())


def test_coverage():
    assert coverage(G, Interval(1, 2)) == pytest.approx(0.8)
    assert coverage(G, Interval(0, 3)) == pytest.approx(1.0)
    assert coverage(uniform(), Interval(0.4, 0.4)) == 0.0


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(2, 1)


def test_functional_result_json_shape():
    d = si(uniform(), 0.2).to_dict()
    assert set(d) == {"families", "coverage", "length"}
    assert set(d["families"][0]) == {"lower_range", "length"}


def test_parameter_validation():
    for fn in (eti, si, gci):
        with pytest.raises(ValueError):
            fn(G, 0.0)
        with pytest.raises(ValueError):
            fn(G, 1.0)
    with pytest.raises(ValueError):
        mi(G, 0.0)
