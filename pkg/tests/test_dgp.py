"""Tests for the VAR process tools: coefficients, companion algebra,
moving-average weights, and simulation."""

import numpy as np
import pytest

from hdlp.dgp import (
    CompanionForm,
    VarCoefficients,
    benchmark_dgp,
    companion,
    ma_coefficient,
    simulate_var,
)
from hdlp.errors import NonstationaryError


def ma_by_recursion(coefs: VarCoefficients, ell: int) -> np.ndarray:
    """Textbook recursion B_l = sum_j A_j B_{l-j}, B_0 = I, B_{<0} = 0."""
    n = coefs.mats[0].shape[0]
    p = len(coefs.mats)
    bs = [np.eye(n)]
    for k in range(1, ell + 1):
        acc = np.zeros((n, n))
        for j in range(1, min(k, p) + 1):
            acc += coefs.mats[j - 1] @ bs[k - j]
        bs.append(acc)
    return bs[ell]


class TestBenchmarkDgp:
    def test_structure_n20(self):
        coefs = benchmark_dgp(20)
        a1, a2 = coefs.mats
        assert np.count_nonzero(a1) == 29
        assert np.count_nonzero(a2) == 29
        # first half of the lag-1 diagonal is active, second half of lag 2
        np.testing.assert_allclose(np.diag(a1)[:10], 0.25)
        np.testing.assert_allclose(np.diag(a1)[10:], 0.0)
        np.testing.assert_allclose(np.diag(a2)[:10], 0.0)
        np.testing.assert_allclose(np.diag(a2)[10:], 0.35)
        # full first sub/superdiagonal bands
        np.testing.assert_allclose(np.diag(a1, k=-1), 0.35)
        np.testing.assert_allclose(np.diag(a2, k=1), -0.25)

    def test_stationary_radius(self):
        comp = companion(benchmark_dgp(20))
        radius = np.abs(np.linalg.eigvals(comp.C)).max()
        assert radius == pytest.approx(0.951, abs=5e-3)

    def test_rejects_odd_or_small_n(self):
        with pytest.raises(ValueError):
            benchmark_dgp(5)
        with pytest.raises(ValueError):
            benchmark_dgp(0)
        benchmark_dgp(2)  # smallest legal size


class TestCompanion:
    def test_var1_companion_is_coefficient(self):
        a = np.array([[0.5, 0.1], [0.0, 0.3]])
        comp = companion(VarCoefficients(mats=(a,)))
        np.testing.assert_array_equal(comp.C, a)
        assert comp.n_vars == 2

    def test_var2_block_layout(self):
        a1 = 0.4 * np.eye(2)
        a2 = 0.2 * np.eye(2)
        comp = companion(VarCoefficients(mats=(a1, a2)))
        assert comp.C.shape == (4, 4)
        np.testing.assert_array_equal(comp.C[:2, :2], a1)
        np.testing.assert_array_equal(comp.C[:2, 2:], a2)
        np.testing.assert_array_equal(comp.C[2:, :2], np.eye(2))
        np.testing.assert_array_equal(comp.C[2:, 2:], np.zeros((2, 2)))

    def test_unit_root_rejected(self):
        with pytest.raises(NonstationaryError) as exc:
            companion(VarCoefficients(mats=(np.eye(3),)))
        assert exc.value.radius >= 1.0


class TestMaCoefficient:
    def test_horizon_zero_is_identity(self):
        comp = companion(benchmark_dgp(4))
        np.testing.assert_array_equal(ma_coefficient(comp, 0), np.eye(4))

    def test_matches_recursion(self):
        coefs = benchmark_dgp(6)
        comp = companion(coefs)
        for ell in (1, 2, 3, 7, 10):
            np.testing.assert_allclose(
                ma_coefficient(comp, ell), ma_by_recursion(coefs, ell),
                rtol=0, atol=1e-12)

    def test_ar1_scalar_powers(self):
        comp = companion(VarCoefficients(mats=(np.array([[0.9]]),)))
        for ell in range(6):
            assert ma_coefficient(comp, ell)[0, 0] == pytest.approx(0.9 ** ell)

    def test_decay_under_stationarity(self):
        comp = companion(benchmark_dgp(10))
        early = np.abs(ma_coefficient(comp, 2)).max()
        late = np.abs(ma_coefficient(comp, 80)).max()
        assert late < 1e-2 * early


class TestSimulateVar:
    def test_shapes_and_pad(self):
        series = simulate_var(benchmark_dgp(4), 100, seed=0)
        assert series.pad == 1  # p - 1 presample rows retained
        assert series.values.shape == (101, 4)
        assert series.n_obs == 100

    def test_var1_has_no_pad(self):
        coefs = VarCoefficients(mats=(0.5 * np.eye(2),))
        series = simulate_var(coefs, 50, seed=0)
        assert series.pad == 0
        assert series.values.shape == (50, 2)

    def test_deterministic_in_seed(self):
        a = simulate_var(benchmark_dgp(4), 80, seed=123)
        b = simulate_var(benchmark_dgp(4), 80, seed=123)
        c = simulate_var(benchmark_dgp(4), 80, seed=124)
        np.testing.assert_array_equal(a.values, b.values)
        assert not np.array_equal(a.values, c.values)

    def test_burn_in_changes_draws(self):
        coefs = benchmark_dgp(4)
        a = simulate_var(coefs, 80, burn_in=500, seed=5)
        b = simulate_var(coefs, 80, burn_in=10, seed=5)
        assert not np.array_equal(a.values, b.values)

    def test_nonstationary_rejected(self):
        with pytest.raises(NonstationaryError):
            simulate_var(VarCoefficients(mats=(1.01 * np.eye(2),)), 50)

    def test_ar1_variance_matches_lyapunov(self):
        """Sample variance of a long AR(1) path against 1 / (1 - a^2)."""
        coefs = VarCoefficients(mats=(np.array([[0.9]]),))
        series = simulate_var(coefs, 200_000, seed=7)
        target = 1.0 / (1.0 - 0.81)
        assert series.values.var() == pytest.approx(target, rel=0.05)

    def test_var_covariance_matches_lyapunov(self):
        """vec(S) = (I - A kron A)^{-1} vec(I) for a stationary VAR(1)."""
        a = np.array([[0.5, 0.2], [-0.1, 0.4]])
        coefs = VarCoefficients(mats=(a,))
        n = 2
        vec_s = np.linalg.solve(np.eye(n * n) - np.kron(a, a),
                                np.eye(n).ravel())
        target = vec_s.reshape(n, n)
        series = simulate_var(coefs, 400_000, seed=11)
        sample = np.cov(series.values.T, ddof=1)
        np.testing.assert_allclose(sample, target, rtol=0.05, atol=0.01)
