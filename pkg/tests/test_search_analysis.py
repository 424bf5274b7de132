import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from treesearch.errors import InvalidParameter
from treesearch.reduction import reduce
from treesearch.search_analysis import (
    ScalingPoint,
    beta_prediction,
    extrapolate,
    fit_scaling,
    gamma_star_rule,
    level_for,
    local_slopes,
    measure,
    run_jobs,
    scaling_experiment,
    sweep_gamma,
    sweep_point,
)
from treesearch.tree_core import TreeParams


@pytest.mark.parametrize("method", ["envelope", "scan"])
def test_root_case_efficiency_n15(method):
    m = measure(reduce(TreeParams(15, 1, 1.0)), method)
    assert not m.linear_regime
    assert m.efficiency == pytest.approx(math.sqrt(2) * math.pi * math.sqrt(2**15 - 1), rel=0.05)


def test_small_gamma_is_linear_regime():
    assert measure(reduce(TreeParams(12, 1, 0.2))).linear_regime
    assert measure(reduce(TreeParams(12, 1, 0.2)), "scan").linear_regime


def test_zero_gamma_reports_linear_regime():
    m = measure(reduce(TreeParams(8, 3, 0.0)), "scan")
    assert m.linear_regime and m.efficiency is None


def test_golden_n12_l6():
    m = measure(reduce(TreeParams(12, 6, 2 / 3)))
    assert m.t0 == pytest.approx(35.105294562532606, rel=1e-9)
    assert m.p0 == pytest.approx(0.026013382457118716, rel=1e-9)
    scan = measure(reduce(TreeParams(12, 6, 2 / 3)), "scan")
    assert scan.t0 == pytest.approx(32.404158741059895, rel=1e-5)
    assert scan.p0 == pytest.approx(0.025780282107151775, rel=1e-7)


def test_unknown_method():
    with pytest.raises(InvalidParameter):
        measure(reduce(TreeParams(4)), "fft")


def test_gamma_star_rule():
    assert gamma_star_rule(1, 16) == 1.0
    assert gamma_star_rule(2, 16) == 0.75
    assert gamma_star_rule(8, 16) == pytest.approx(2 / 3)
    assert gamma_star_rule(16, 16) == 2.0


def test_beta_prediction():
    assert beta_prediction(16, 16) == 1.0
    assert beta_prediction(48, 64) == 0.875
    assert beta_prediction(1, 10**6) == pytest.approx(0.5, abs=1e-6)
    with pytest.raises(InvalidParameter):
        beta_prediction(0, 4)


@given(st.floats(0.3, 1.2), st.floats(0.1, 10))
def test_pure_power_law(beta, c):
    ns = np.arange(8, 65, 4)
    Ns = 2.0**ns - 1
    mid, slopes = local_slopes(ns, Ns, c * Ns**beta)
    assert np.allclose(slopes, beta)
    b, err = extrapolate(mid, slopes)
    assert b == pytest.approx(beta, abs=1e-9)


def test_extrapolation_of_linear_slopes():
    mid = np.arange(10, 62, 4.0)
    b, err = extrapolate(mid, 0.75 - 1.3 / mid)
    assert b == pytest.approx(0.75, abs=1e-12)
    assert err < 1e-10


def test_fit_excludes_linear_regime():
    pts = [ScalingPoint(n, 1, 1.0, 2.0**(n / 2), 0.5, False) for n in range(8, 40, 4)]
    pts[0] = ScalingPoint(8, 1, 1.0, None, None, True)
    fit = fit_scaling(pts, fit_min_n=0)
    assert fit.excluded == [8]
    assert fit.beta == pytest.approx(0.5, abs=1e-3)


def test_level_for():
    assert level_for(32, 5) == 5
    assert level_for(32, 0.5) == 16
    assert level_for(32, 0.75) == 24
    assert level_for(8, 0.01) == 1


def test_run_jobs_keeps_order():
    jobs = [(6, 1, g, "envelope") for g in (0.5, 1.0, 1.5)]
    serial = run_jobs(sweep_point, jobs, workers=1)
    parallel = run_jobs(sweep_point, jobs, workers=2)
    assert [p.gamma for p in parallel] == [0.5, 1.0, 1.5]
    assert [p.max_prob for p in serial] == [p.max_prob for p in parallel]


def test_sweep_root_case():
    sw = sweep_gamma(16, 1, gamma_max=2.0, coarse=0.1, fine=0.01)
    assert sw.gamma_prime_star == pytest.approx(1.0, abs=0.02)
    assert sw.p_max == pytest.approx(0.5, abs=0.02)
    assert sw.gamma_star == pytest.approx(1.0, abs=0.05)
    assert np.all(np.diff(sw.grid) > 0)


def test_scaling_smoke():
    fit = scaling_experiment(range(8, 33, 4), 1, method="envelope", fit_min_n=16)
    assert fit.beta == pytest.approx(0.5, abs=0.02)
    with pytest.raises(InvalidParameter):
        scaling_experiment([8, 12, 16], 1)


def test_leaf_sweep_has_no_gamma_star():
    sw = sweep_gamma(10, 10, gamma_max=3.0, coarse=0.25, fine=0.05)
    assert all(p.linear_regime for p in sw.points)
    assert sw.gamma_star is None
    assert sw.p_max * (2**10 - 1) < 50
