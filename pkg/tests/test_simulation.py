import numpy as np
import pytest

from rankintervals.inference import CiSpec
from rankintervals.simulation import (CASES, GaussianConfig, draw_estimates, empirical_quantiles,
                                      run_counting_experiment, run_coverage_experiment,
                                      run_experiment1, run_experiment2, run_experiment3,
                                      table_experiment1, table_experiment2, table_experiment3,
                                      trial_rng)


def test_quantile_rule():
    assert empirical_quantiles([1, 2, 3, 4]) == [1.0, 2.0, 3.0]
    assert empirical_quantiles([5]) == [5.0, 5.0, 5.0]
    assert empirical_quantiles(list(range(1, 11))) == [1.0, 5.0, 9.0]


def test_config_validation():
    with pytest.raises(ValueError, match="distinct"):
        GaussianConfig((1.0, 1.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        GaussianConfig((1.0, 2.0), (1.0,))
    with pytest.raises(ValueError):
        GaussianConfig((1.0, 2.0), (1.0, 0.0))
    with pytest.raises(ValueError):
        CASES["iv"].scaled(0)


def test_fast_sampling_matches_moments():
    mu, sigma = np.array([0.0, 5.0]), np.array([1.0, 3.0])
    slow = np.array([np.concatenate(draw_estimates(mu, sigma, 30, trial_rng(1, t)))
                     for t in range(3000)])
    fast = np.array([np.concatenate(draw_estimates(mu, sigma, 30, trial_rng(2, t), fast=True))
                     for t in range(3000)])
    assert np.allclose(slow.mean(0), fast.mean(0), atol=0.05 * np.r_[1, 3, 1, 3])
    assert np.allclose(slow.std(0), fast.std(0), rtol=0.1)


def test_reproducible():
    a = run_experiment1("iv", CiSpec(0.95, "unadjusted"), seed=5, trials=60)
    b = run_experiment1("iv", CiSpec(0.95, "unadjusted"), seed=5, trials=60)
    assert a == b
    c = run_experiment1("iv", CiSpec(0.95, "unadjusted"), seed=5, trials=60, workers=3)
    assert c == a


def test_bonferroni_counts_dominate():
    unadj = run_experiment1("ii", CiSpec(0.9, "unadjusted"), seed=3, trials=150)
    bonf = run_experiment1("ii", CiSpec(0.9, "bonferroni"), seed=3, trials=150)
    assert all(b >= u for b, u in zip(bonf.per_trial_counts, unadj.per_trial_counts))


def test_degenerate_far_means():
    config = GaussianConfig((0.0, 10.0, 20.0, 30.0), (0.01,) * 4, trials=50, seed=1)
    r = run_counting_experiment(config, CiSpec(0.95, "bonferroni"))
    assert (r.q10, r.q50, r.q90, r.coverage) == (1, 1, 1, 1.0)


def test_single_trial():
    r = run_experiment1("iv", CiSpec(0.95, "bonferroni"), seed=0, trials=1)
    assert r.q10 == r.q50 == r.q90 == r.per_trial_counts[0]


def test_quantile_invariants():
    r = run_experiment1("iv", CiSpec(0.95, "bonferroni"), seed=8, trials=200)
    assert 1 <= r.q10 <= r.q50 <= r.q90 <= 120


def test_tiny_scale_factor():
    (r,) = run_experiment2([0.01], seed=2, trials=50)
    assert (r.q10, r.q50, r.q90) == (1, 1, 1)


def test_unknown_case():
    with pytest.raises(ValueError, match="unknown case"):
        run_experiment1("vi", CiSpec(0.9), seed=0)


def test_coverage_small():
    rows = run_experiment3(p=40, levels=(0.9, 0.5, 0.1), seed=4, trials=80)
    for row in rows:
        assert row.product_coverage >= row.set_coverage
        assert row.implication_failures == 0
    again = run_experiment3(p=40, levels=(0.9, 0.5, 0.1), seed=4, trials=80, workers=2)
    assert again == rows


def test_level_near_one_covers():
    config = GaussianConfig(tuple(range(1, 21)), (np.sqrt(2),) * 20, trials=40, seed=1)
    (row,) = run_coverage_experiment(config, [1 - 1e-9])
    assert row.set_coverage == row.product_coverage == 1.0


def test_tables():
    r = run_experiment1("i", CiSpec(0.9, "bonferroni"), seed=0, trials=10)
    text = table_experiment1({"i": r})
    assert text.splitlines()[0].split() == ["Case", "q(0.1)", "q(0.5)", "q(0.9)", "p_c"]
    assert len(table_experiment2([1.0], [r]).splitlines()) == 2
    rows = run_experiment3(p=5, levels=(0.9, 0.5), seed=0, trials=5)
    assert len(table_experiment3(rows).splitlines()) == 3
