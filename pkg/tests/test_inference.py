import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import ANTICHAIN3, CHAIN3, OVERLAP3, STAIRCASE5, family, interval_lists
from oracles import all_rank_vectors, brute_count, brute_is_compatible
from rankintervals.inference import (CiSpec, SampleSummary, build_confidence_intervals,
                                     intervals_from_standard_errors, product_set_contains,
                                     product_set_size, set_estimator_contains, true_ranking)
from rankintervals.order import build_order


class TestConfidenceIntervals:
    def test_normal_limit(self):
        fam = build_confidence_intervals([SampleSummary("a", 0.0, 1.0 * math.sqrt(10**8), 10**8)],
                                         CiSpec(0.9, "unadjusted"))
        assert fam[0].left == pytest.approx(-1.645, abs=1e-3)
        assert fam[0].right == pytest.approx(1.645, abs=1e-3)

    def test_identical_summaries_incomparable(self):
        s = [SampleSummary("a", 1.0, 2.0, 30), SampleSummary("b", 1.0, 2.0, 30)]
        for spec in [CiSpec(0.9, "bonferroni"), CiSpec(0.5, "unadjusted", "z")]:
            fam = build_confidence_intervals(s, spec)
            assert fam[0] == fam[1]
            assert build_order(fam).pairs == set()

    def test_bonferroni_quantile(self):
        # p = 5, 90% joint: each interval uses the 0.99 quantile; t(29) table value 2.462
        summaries = [SampleSummary(str(j), 10.0 * j, 1.0, 30) for j in range(5)]
        fam = build_confidence_intervals(summaries, CiSpec(0.9, "bonferroni"))
        half = (fam.rights - fam.lefts) / 2
        assert np.allclose(half, 2.462 / math.sqrt(30), atol=1e-3 / math.sqrt(30))
        assert CiSpec(0.9, "bonferroni").tail_probability(5) == pytest.approx(0.01)

    def test_zero_sd_rejected(self):
        with pytest.raises(ValueError, match="zero-width"):
            build_confidence_intervals([SampleSummary("a", 1.0, 0.0, 30)], CiSpec(0.9))

    def test_bonferroni_wider(self):
        rng = np.random.default_rng(0)
        s = [SampleSummary(str(j), rng.normal(), rng.uniform(0.1, 2), 30) for j in range(7)]
        for level in (0.5, 0.9, 0.95):
            b = build_confidence_intervals(s, CiSpec(level, "bonferroni"))
            u = build_confidence_intervals(s, CiSpec(level, "unadjusted"))
            assert np.all(b.lefts < u.lefts) and np.all(b.rights > u.rights)

    def test_z_vs_t(self):
        s = [SampleSummary("a", 0.0, 1.0, 5)]
        t = build_confidence_intervals(s, CiSpec(0.95, quantile="t"))
        z = build_confidence_intervals(s, CiSpec(0.95, quantile="z"))
        assert t[0].right > z[0].right
        assert z[0].right == pytest.approx(1.959964 / math.sqrt(5), rel=1e-6)

    def test_standard_errors(self):
        fam = intervals_from_standard_errors(["a", "b"], [0.0, 10.0], [1.0, 1.0], 0.9)
        assert fam[0].right == pytest.approx(1.959964, rel=1e-6)  # z at 1 - 0.1/4
        assert fam.labels == ("a", "b")

    @pytest.mark.parametrize("kwargs", [dict(level=1.0), dict(level=0.9, adjustment="holm"),
                                        dict(level=0.9, quantile="cauchy")])
    def test_bad_spec(self, kwargs):
        with pytest.raises(ValueError):
            CiSpec(**kwargs)

    def test_summary_validation(self):
        with pytest.raises(ValueError):
            SampleSummary("a", 0.0, 1.0, 1)
        with pytest.raises(ValueError):
            SampleSummary("a", 0.0, -1.0, 3)


class TestSetEstimator:
    def test_point_estimate_ranking(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            est = rng.normal(size=6)
            half = rng.uniform(0.01, 2.0, size=6)
            fam = family(list(zip(est - half, est + half)))
            assert set_estimator_contains(true_ranking(est), fam)

    def test_disjoint_chain(self):
        assert set_estimator_contains([1, 2, 3], family(CHAIN3))

    def test_estimates_outside_own_intervals(self):
        # every true value lies outside its interval, but the order is preserved
        truth = [80.0, 104.0, 271.0]
        fam = family([(20.77, 68.44), (116.12, 163.79), (211.47, 259.15)])
        assert not any(a <= t <= b for t, (a, b) in zip(truth, fam))
        assert set_estimator_contains(true_ranking(truth), fam)

    def test_true_ranking_rejects_ties(self):
        with pytest.raises(ValueError):
            true_ranking([1.0, 1.0])


class TestProductSet:
    def test_staircase5_counterexample(self, staircase5):
        r = [3, 4, 1, 2, 5]
        assert product_set_contains(r, staircase5)
        assert not set_estimator_contains(r, staircase5)

    def test_chain(self):
        fam = family(CHAIN3)
        assert product_set_contains([1, 2, 3], fam)
        for r in all_rank_vectors(3).tolist():
            if r != [1, 2, 3]:
                assert not product_set_contains(r, fam)

    def test_sizes(self, staircase5):
        assert product_set_size(staircase5) == 720 > math.factorial(5)
        assert product_set_size(family(CHAIN3)) == 1
        assert product_set_size(family(ANTICHAIN3)) == 27

    def test_overlap3_box_is_exact(self, overlap3):
        inside = [r for r in all_rank_vectors(3).tolist() if product_set_contains(r, overlap3)]
        assert len(inside) == brute_count(OVERLAP3) == 3

    @settings(max_examples=80)
    @given(interval_lists(max_p=6, distinct=True))
    def test_containment_hierarchy(self, pairs):
        fam = family(pairs)
        for r in all_rank_vectors(len(pairs)).tolist():
            compatible = set_estimator_contains(r, fam)
            assert compatible == brute_is_compatible(r, pairs)
            if compatible:
                assert product_set_contains(r, fam)

    @given(interval_lists(max_p=8, distinct=True))
    def test_size_bounds_count(self, pairs):
        assert product_set_size(family(pairs)) >= brute_count(pairs)


def test_coverage_when_all_intervals_cover():
    """If every interval covers its parameter the true ranking is compatible."""
    rng = np.random.default_rng(7)
    mu = np.array([0.0, 0.3, 0.5, 1.1, 1.2, 2.0])
    truth = true_ranking(mu)
    covered = 0
    for _ in range(2000):
        x = rng.normal(mu, 0.4, size=(10, 6))
        s = [SampleSummary(str(j), m, sd, 10)
             for j, (m, sd) in enumerate(zip(x.mean(0), x.std(0, ddof=1)))]
        fam = build_confidence_intervals(s, CiSpec(0.5, "unadjusted"))
        if np.all((fam.lefts <= mu) & (mu <= fam.rights)):
            covered += 1
            assert set_estimator_contains(truth, fam)
    assert covered > 0
