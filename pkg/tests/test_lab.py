import json

import numpy as np
import pytest

from ivscore.distributions import DiscreteDist, PiecewiseUniformDist, cdf, mix, point_mass, uniform
from ivscore.functionals import Interval, coverage, gci, si
from ivscore.lab import (
    EXPERIMENTS,
    Functional,
    LabReport,
    ReportGrid,
    brute_force_minimizers,
    condition1_instance,
    consistency_check,
    cubic_eti_score,
    cxls_check,
    fixture_example_discrete,
    fixture_example_uniform,
    fixture_gci_cxls,
    fixture_table1,
    prop2_witness_check,
    random_discrete_laws,
    random_pw_uniform_laws,
    run_experiment,
    score_property_check,
    dilated_pair,
)
from ivscore.scoring import CZeroOne, ElementarySymmetric, EtiFamily, KZeroOne, LinearFunction, Winkler

G = DiscreteDist([0, 1, 2, 3], [0.1, 0.4, 0.4, 0.1])
ETI = Functional("eti", 0.2)
SI = Functional("si", 0.2)


class TestBruteForce:
    def test_table_law_four_minimizers(self):
        got = brute_force_minimizers(G, Winkler(0.2), ReportGrid.integer_intervals(0, 3))
        assert sorted(got) == [Interval(0, 2), Interval(0, 3), Interval(1, 2), Interval(1, 3)]

    def test_point_mass(self):
        assert brute_force_minimizers(point_mass(2), Winkler(0.2), ReportGrid.integer_intervals(0, 5)) == [Interval(2, 2)]

    def test_zero_one_lower_endpoint(self):
        assert brute_force_minimizers(G, KZeroOne(1), ReportGrid.points(range(4))) == [1.0]

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            ReportGrid((), "interval")

    def test_equivalent_scores_share_minimizers(self):
        grid = ReportGrid.integer_intervals(0, 10)
        for _, F in random_discrete_laws(10, 4):
            a = brute_force_minimizers(F, EtiFamily(0.2, 1.0, 1.0), grid)
            b = brute_force_minimizers(F, EtiFamily(0.2, 7.0, 7.0, LinearFunction(1.0, 3.0), LinearFunction(1.0, -2.0)), grid)
            assert a == b


class TestConsistency:
    def test_eti_winkler_passes(self):
        r = consistency_check(ETI, Winkler(0.2), random_discrete_laws(100, 0))
        assert r.verdict == "pass" and r.details["fixtures"] == 100

    def test_eti_zero_one_fails_with_witness(self):
        r = consistency_check(ETI, KZeroOne(1), random_discrete_laws(20, 0))
        assert r.verdict == "fail"
        w = r.witnesses[0]
        assert {"distribution", "report", "gap", "kind"} <= set(w)
        assert w["gap"] >= 1e-6

    def test_lower_endpoint_zero_one_passes(self):
        r = consistency_check(Functional("lower", 1), KZeroOne(1), random_discrete_laws(100, 3))
        assert r.verdict == "pass"

    def test_si_winkler_fails_on_gap_laws(self):
        F0, F1 = fixture_example_uniform(0.2)
        r = consistency_check(SI, Winkler(0.2), [("F0", F0), ("F1", F1)])
        assert r.verdict == "fail"
        assert all(w["gap"] >= 1e-6 for w in r.witnesses)

    def test_continuous_eti_winkler_passes(self):
        r = consistency_check(ETI, Winkler(0.2), random_pw_uniform_laws(5, 1))
        assert r.verdict == "pass"

    def test_midpoint_zero_one_passes(self):
        r = consistency_check(Functional("midpoint", 0.25), CZeroOne(0.25), random_pw_uniform_laws(10, 2))
        assert r.verdict == "pass"

    def test_grid_missing_solution_is_inconclusive(self):
        grid = lambda F, sol: ReportGrid.integer_intervals(0, 1)
        r = consistency_check(ETI, Winkler(0.2), [G], grid=grid)
        assert r.verdict == "inconclusive"

    def test_order_and_thread_independent(self, monkeypatch):
        fixtures = random_discrete_laws(30, 9)
        monkeypatch.setenv("IV_THREADS", "1")
        one = consistency_check(ETI, KZeroOne(1), fixtures).to_dict()
        monkeypatch.setenv("IV_THREADS", "4")
        four = consistency_check(ETI, KZeroOne(1), fixtures).to_dict()
        assert json.dumps(one, sort_keys=True) == json.dumps(four, sort_keys=True)


class TestLevelSets:
    def test_discrete_pair(self):
        F0, F1 = fixture_example_discrete()
        r = cxls_check(Functional("si", 0.25), F0, F1)
        assert r.details["cxls"] == "pass" and r.details["cxls_star"] == "fail"
        trace = {round(t["lambda"], 2): t for t in r.lambda_trace}
        for lam in (0.1, 0.2, 0.3, 0.4, 0.5):
            assert trace[lam]["solution"] == [[1, 2], [2, 3]]
            assert not trace[lam]["cxls_star"]
        assert trace[0.6]["solution"] == [[1, 2]]

    def test_continuous_pair_sharing_shortest_interval(self):
        F0 = PiecewiseUniformDist([0, 1, 2, 3], [0.1, 0.8, 0.1])
        F1 = PiecewiseUniformDist([0, 1, 2, 3], [0.05, 0.8, 0.15])
        r = cxls_check(SI, F0, F1)
        assert r.verdict == "pass"

    def test_identical_laws(self):
        for name, F in (("gci", G), ("si", uniform()), ("eti", G), ("mi", uniform())):
            r = cxls_check(Functional(name, 0.2), F, F, lambda_grid=[0.25, 0.5, 0.75])
            assert r.verdict == "pass"

    def test_gci_fixture(self):
        fx = fixture_gci_cxls(0.2)
        T0, T1 = gci(fx.F0, 0.2), gci(fx.F1, 0.2)
        assert T0.contains(fx.shared) and T1.contains(fx.shared)
        assert coverage(fx.F0, fx.witness) > 0.8 and coverage(fx.F1, fx.witness) < 0.8
        mid = mix([fx.F0, fx.F1], [0.5, 0.5])
        assert coverage(mid, fx.witness) == pytest.approx(0.8, abs=1e-12)
        r = cxls_check(Functional("gci", 0.2), fx.F0, fx.F1, probes=[fx.witness])
        assert r.details["cxls_star"] == "fail"
        assert any(w["lambda"] == 0.5 and w["report"] == [0.1, 1.0] for w in r.witnesses)

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.7, 0.9])
    def test_gci_fixture_other_levels(self, alpha):
        fx = fixture_gci_cxls(alpha)
        assert gci(fx.F0, alpha).contains(fx.shared) and gci(fx.F1, alpha).contains(fx.shared)
        r = cxls_check(Functional("gci", alpha), fx.F0, fx.F1, probes=[fx.witness])
        assert r.details["cxls_star"] == "fail"


class TestWitness:
    def test_example_uniform(self):
        F0, F1 = fixture_example_uniform(0.2)
        r = prop2_witness_check(SI, F0, F1, Interval(0, 1), Interval(0, 2))
        assert r.verdict == "pass" and len(r.lambda_trace) == 99
        assert all(t["t1_in"] and not t["t0_in"] for t in r.lambda_trace)

    def test_swapped_roles(self):
        F0, F1 = fixture_example_uniform(0.2)
        r = prop2_witness_check(SI, F1, F0, Interval(0, 2), Interval(0, 1))
        assert r.verdict == "pass"

    def test_gap_construction(self):
        F0, F1, t0, t1 = dilated_pair(condition1_instance(0.2, 1.0, 0.5))
        r = prop2_witness_check(SI, F0, F1, t0, t1)
        assert r.verdict == "pass"
        for t in r.lambda_trace:
            assert t["t1_in"]

    def test_precondition(self):
        F0, F1 = fixture_example_uniform(0.2)
        r = prop2_witness_check(SI, F0, F1, Interval(0, 2), Interval(0, 1))
        assert r.verdict == "inconclusive"


class TestProperties:
    @pytest.mark.parametrize("prop", ["translation", "homogeneity", "symmetry"])
    def test_winkler(self, prop):
        assert score_property_check(Winkler(0.2), prop, 10_000, 0).verdict == "pass"

    @pytest.mark.parametrize("prop", ["translation", "homogeneity"])
    def test_cubic_fails(self, prop):
        r = score_property_check(cubic_eti_score(0.2), prop, 1000, 0)
        assert r.verdict == "fail" and r.witnesses

    def test_asymmetric_weights_fail_symmetry(self):
        r = score_property_check(EtiFamily(0.2, 1.0, 3.0), "symmetry", 1000, 0)
        assert r.verdict == "fail" and r.witnesses

    def test_elementary_symmetric(self):
        assert score_property_check(ElementarySymmetric(0.2, 0.75), "symmetry", 5000, 1).verdict == "pass"

    def test_unknown_property(self):
        with pytest.raises(ValueError):
            score_property_check(Winkler(0.2), "convexity")


class TestFixtures:
    def test_table1_rows(self):
        _, rows = fixture_table1()
        want = {(1, 2): (0.8, 3, 1, 2), (0, 2): (0.9, 3, 2, 1), (1, 3): (0.9, 3, 2, 1), (0, 3): (1.0, 3, 3, 0)}
        assert len(rows) == 4
        for r in rows:
            key = (r["interval"].lower, r["interval"].upper)
            got = (r["coverage"], r["expected_is"], r["length"], r["expected_penalty"])
            assert got == pytest.approx(want[key], abs=1e-12)

    def test_example_uniform(self):
        F0, F1 = fixture_example_uniform(0.2)
        assert si(F0, 0.2).intervals()[0].close_to(Interval(0, 1))
        assert si(F1, 0.2).intervals()[0].close_to(Interval(0, 2))
        assert cdf(F0, 2) == pytest.approx(0.8)
        for bad in (0.0, 0.6, 0.7):
            with pytest.raises(ValueError):
                fixture_example_uniform(bad)

    def test_example_discrete(self):
        F0, F1 = fixture_example_discrete()
        assert si(mix([F0, F1], [0.6, 0.4]), 0.25).intervals() == si(F0, 0.25).intervals()
        p0 = dict(zip(F0.support.tolist(), F0.probs.tolist()))
        p1 = dict(zip(F1.support.tolist(), F1.probs.tolist()))
        assert (p0[1], p0[2], p0[3]) == pytest.approx((0.07, 0.7, 0.07))
        assert (p1[1], p1[2], p1[3]) == pytest.approx((0.07, 0.7, 0.03))

    @pytest.mark.parametrize("kw", [{"alpha": 0.4}, {"k": 0}, {"eps": 0.1}, {"delta": 0.06}, {"k": 1.5}])
    def test_example_discrete_parameters(self, kw):
        with pytest.raises(ValueError):
            fixture_example_discrete(**kw)

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_example_discrete_other_modes(self, k):
        F0, F1 = fixture_example_discrete(alpha=0.3, k=k, eps=0.06, delta=0.01)
        assert si(F0, 0.3).intervals() == [Interval(k - 1, k), Interval(k, k + 1)]
        assert si(F1, 0.3).intervals() == [Interval(k - 1, k)]

    def test_condition1(self):
        inst = condition1_instance(0.2, 1.0, 0.5)
        assert si(inst.F, 0.2).intervals()[0].close_to(Interval(0, 1))
        assert cdf(inst.F, 1.0) == pytest.approx(0.8) and cdf(inst.F, 1.5) == pytest.approx(0.8)
        assert si(inst.F, 0.1).length > 1.25

    def test_condition1_pathological(self):
        with pytest.raises(AssertionError):
            condition1_instance(0.2, 1.0, 1.5)
        with pytest.raises(ValueError):
            condition1_instance(0.5, 1.0, 0.5)

    def test_random_fixtures_reproducible(self):
        a, b = random_discrete_laws(5, 11), random_discrete_laws(5, 11)
        assert [f for _, f in a] == [f for _, f in b]
        c, d = random_pw_uniform_laws(5, 11), random_pw_uniform_laws(5, 11)
        assert [f for _, f in c] == [f for _, f in d]


class TestExperiments:
    @pytest.mark.parametrize("name", sorted(EXPERIMENTS))
    def test_each_matches_expectation(self, name):
        report, ok = run_experiment(name, seed=7)
        assert ok, report.to_dict()
        json.dumps(report.to_dict())

    def test_unknown(self):
        with pytest.raises(KeyError):
            run_experiment("nope")

    def test_fail_needs_witness(self):
        with pytest.raises(ValueError):
            LabReport("x", "fail")
        with pytest.raises(ValueError):
            LabReport("x", "maybe")
