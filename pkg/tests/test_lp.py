"""Tests for penalty rates, the two estimation stages, and lag selection."""

import math

import numpy as np
import pytest

from hdlp.dgp import VarCoefficients, benchmark_dgp, simulate_var
from hdlp.lp import (
    LagSelection,
    estimate_step1,
    estimate_step2,
    gamma_for,
    information_criterion,
    select_lag,
)
from hdlp.panel import build_design
from hdlp.solver import PenaltyConfig

UNIT = PenaltyConfig(gamma_scale=1.0, xi_scale=1.0)


@pytest.fixture(scope="module")
def bench_series():
    return simulate_var(benchmark_dgp(6), 600, seed=4)


@pytest.fixture(scope="module")
def bench_design(bench_series):
    return build_design(bench_series, p=2, h=1)


class TestGammaFor:
    def test_base_rate_formula(self):
        got = gamma_for(20, 300, 1, UNIT)
        assert got == pytest.approx(math.sqrt(math.log(20) / 300), rel=1e-12)

    def test_horizon_factor_is_fifth_root(self):
        lo = gamma_for(10, 500, 1, UNIT)
        hi = gamma_for(10, 500, 32, UNIT)
        assert hi / lo == pytest.approx(2.0, rel=1e-12)

    def test_scale_multiplies(self):
        base = gamma_for(10, 500, 3, UNIT)
        scaled = gamma_for(10, 500, 3, PenaltyConfig(gamma_scale=2.5))
        assert scaled == pytest.approx(2.5 * base, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            gamma_for(1, 100, 1)
        with pytest.raises(ValueError):
            gamma_for(10, 1, 1)
        with pytest.raises(ValueError):
            gamma_for(10, 100, 0)


class TestStages:
    def test_step1_shapes_and_labels(self, bench_design):
        gamma = gamma_for(6, bench_design.effective_obs, 1)
        est = estimate_step1(bench_design, gamma)
        assert est.a_tilde.shape == (6, 12)
        assert est.mask.shape == (6, 12)
        assert est.mask.dtype == np.uint8
        np.testing.assert_array_equal(est.mask, (est.a_tilde != 0.0))
        assert est.stage == "lasso"
        assert est.horizon == 1 and est.lags == 2
        assert est.gamma_used == gamma

    def test_step1_finds_strong_diagonal(self, bench_design):
        gamma = gamma_for(6, bench_design.effective_obs, 1)
        est = estimate_step1(bench_design, gamma)
        # lag-1 subdiagonal entries are 0.35, the strongest signal around
        sub = [est.a_tilde[i, i - 1] for i in range(1, 6)]
        assert all(v > 0.1 for v in sub)

    def test_step2_support_shrinks(self, bench_design):
        gamma = gamma_for(6, bench_design.effective_obs, 1)
        e1 = estimate_step1(bench_design, gamma)
        e2 = estimate_step2(bench_design, e1, gamma)
        assert e2.stage == "adaptive"
        # adaptive reweighting can only keep or drop step-1 coordinates
        assert not np.any(e2.mask & ~e1.mask)
        assert e2.mask.sum() <= e1.mask.sum()

    def test_step2_of_empty_support_is_zero(self):
        wn = VarCoefficients(mats=(np.zeros((3, 3)),))
        d = build_design(simulate_var(wn, 200, seed=5), 1, 1)
        e1 = estimate_step1(d, 100.0)
        assert not e1.a_tilde.any()
        e2 = estimate_step2(d, e1, 0.05)
        assert not e2.a_tilde.any()

    def test_stages_deterministic(self, bench_design):
        gamma = gamma_for(6, bench_design.effective_obs, 1)
        a = estimate_step1(bench_design, gamma)
        b = estimate_step1(bench_design, gamma)
        np.testing.assert_array_equal(a.a_tilde, b.a_tilde)


class TestInformationCriterion:
    def test_lag_charge_is_additive(self, bench_series):
        base = information_criterion(bench_series, 3, 1, xi=0.0, config=UNIT)
        charged = information_criterion(bench_series, 3, 1, xi=0.25,
                                        config=UNIT)
        assert charged - base == pytest.approx(0.75, rel=1e-9)

    def test_alignment_changes_sample(self, bench_series):
        own = information_criterion(bench_series, 1, 1, xi=0.0, config=UNIT)
        aligned = information_criterion(bench_series, 1, 1, xi=0.0,
                                        config=UNIT, align_lags=5)
        assert own != aligned


class TestSelectLag:
    def test_recovers_var1(self):
        coefs = VarCoefficients(mats=(0.8 * np.eye(3),))
        series = simulate_var(coefs, 400, seed=3)
        sel = select_lag(series, h_set=(1,), p_max=4)
        assert isinstance(sel, LagSelection)
        assert sel.p_hat == 1

    def test_recovers_var2_at_h1(self, bench_series):
        sel = select_lag(bench_series, h_set=(1,), p_max=5)
        assert sel.p_hat == 2

    def test_white_noise_picks_smallest(self):
        wn = VarCoefficients(mats=(np.zeros((3, 3)),))
        series = simulate_var(wn, 300, seed=5)
        assert select_lag(series, h_set=(1,), p_max=4).p_hat == 1

    def test_headline_is_smallest_horizon(self, bench_series):
        sel = select_lag(bench_series, h_set=(2, 1), p_max=5)
        assert sel.p_hat == sel.by_horizon[1]
        assert set(sel.by_horizon) == {1, 2}

    def test_criterion_paths_have_full_length(self, bench_series):
        sel = select_lag(bench_series, h_set=(1,), p_max=4)
        assert len(sel.criterion[1]) == 4
        best = sel.by_horizon[1]
        path = sel.criterion[1]
        assert path[best - 1] == min(path)

    def test_validation(self, bench_series):
        with pytest.raises(ValueError):
            select_lag(bench_series, h_set=(), p_max=3)
        with pytest.raises(ValueError):
            select_lag(bench_series, h_set=(1,), p_max=0)
        with pytest.raises(ValueError):
            select_lag(bench_series, h_set=(1,), p_max=400)
