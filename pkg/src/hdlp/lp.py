"""Two-stage sparse estimation of h-step projection coefficients.

Stage one solves N independent lasso rows of

    (1/(T-h)) sum_t ||x_{t+h} - A' (x_t, ..., x_{t-p+1})||^2 + gamma |A|_1

over the stacked coefficient block A (N x N*p); stage two re-solves with
adaptive weights |a|^(-zeta), freezing stage-one zeros.  Both stages share
one penalty level and one Gram matrix per design.  An information criterion
on the stage-one fit selects the lag order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .panel import LpDesign, PanelSeries, build_design
from .solver import PenaltyConfig, solve_gram

__all__ = ["CoefEstimate", "LagSelection", "gamma_for", "estimate_step1",
           "estimate_step2", "information_criterion", "select_lag"]


@dataclass(frozen=True)
class CoefEstimate:
    """Stacked coefficient estimate for one horizon.

    a_tilde is N x (N*p) with row m holding the loadings of response m on
    (x_t, ..., x_{t-p+1}); mask marks nonzero entries; stage is one of
    "lasso", "adaptive", "debiased".
    """

    a_tilde: np.ndarray
    mask: np.ndarray
    stage: str
    horizon: int
    lags: int
    gamma_used: float

    def __post_init__(self):
        a = np.array(self.a_tilde, dtype=np.float64)
        m = np.array(self.mask, dtype=np.uint8)
        if a.shape != m.shape or a.ndim != 2:
            raise ValueError("a_tilde and mask must be equal 2-d shapes")
        if self.stage not in ("lasso", "adaptive", "debiased"):
            raise ValueError(f"unknown stage {self.stage!r}")
        a.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "a_tilde", a)
        object.__setattr__(self, "mask", m)


@dataclass(frozen=True)
class LagSelection:
    """Chosen lag order with the per-horizon criterion paths."""

    p_hat: int
    by_horizon: dict[int, int]
    criterion: dict[int, list[float]]


def gamma_for(n_vars: int, t_eff: int, h: int,
              config: PenaltyConfig | None = None) -> float:
    """Penalty level c * h**(1/5) * sqrt(log(N) / T_eff).

    The horizon exponent is fixed at 1/5 (the moment order the rate was
    derived under); config.j_moment does not move it.
    """
    config = config or PenaltyConfig()
    if n_vars < 2:
        raise ValueError("need at least 2 variables for the penalty rate")
    if t_eff < 2:
        raise ValueError("t_eff must be >= 2")
    if h < 1:
        raise ValueError("h must be >= 1")
    return config.gamma_scale * h ** 0.2 * math.sqrt(math.log(n_vars) / t_eff)


def _row_solutions(design: LpDesign, gamma: float, weights_rows,
                   config: PenaltyConfig, what: str) -> np.ndarray:
    """Solve the N row problems of one design on a shared Gram matrix."""
    X, Y = design.X, design.Y
    n = design.effective_obs
    G = X.T @ X
    Q = X.T @ Y
    out = np.empty((design.n_vars, X.shape[1]))
    for m in range(design.n_vars):
        out[m] = solve_gram(G, Q[:, m], n, gamma, weights_rows[m], config,
                            what=f"{what} row {m}")
    return out


def estimate_step1(design: LpDesign, gamma: float,
                   config: PenaltyConfig | None = None) -> CoefEstimate:
    """Plain lasso stage: unit weights on every coordinate."""
    config = config or PenaltyConfig()
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    d = design.X.shape[1]
    ones = np.ones(d)
    a = _row_solutions(design, gamma, [ones] * design.n_vars, config, "step1")
    return CoefEstimate(a_tilde=a, mask=(a != 0.0).astype(np.uint8),
                        stage="lasso", horizon=design.horizon,
                        lags=design.lags, gamma_used=gamma)


def estimate_step2(design: LpDesign, step1: CoefEstimate, gamma: float,
                   config: PenaltyConfig | None = None) -> CoefEstimate:
    """Adaptive stage: weight |a|^(-zeta) per coordinate, +inf (frozen at
    zero) where stage one produced an exact zero.  Shares the stage-one
    penalty level."""
    config = config or PenaltyConfig()
    if step1.stage != "lasso":
        raise ValueError("adaptive stage needs a stage-one estimate")
    if step1.a_tilde.shape != (design.n_vars, design.X.shape[1]):
        raise ValueError("estimate does not match the design")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    with np.errstate(divide="ignore"):
        weights = np.where(step1.a_tilde != 0.0,
                           np.abs(step1.a_tilde) ** (-config.zeta), np.inf)
    a = _row_solutions(design, gamma, weights, config, "step2")
    return CoefEstimate(a_tilde=a, mask=(a != 0.0).astype(np.uint8),
                        stage="adaptive", horizon=design.horizon,
                        lags=design.lags, gamma_used=gamma)


def information_criterion(series: PanelSeries, p_cand: int, h: int, xi: float,
                          config: PenaltyConfig | None = None,
                          align_lags: int | None = None) -> float:
    """Stage-one fit plus complexity charge xi * p_cand.

    The fit term is the penalized stages' own loss at the stage-one solution:
    (1/(T-h)) sum_t ||residual_t||^2 summed over all N responses.
    `align_lags` fixes the estimation sample so candidates are comparable.
    """
    if xi < 0:
        raise ValueError("xi must be >= 0")
    config = config or PenaltyConfig()
    design = build_design(series, p_cand, h, align_lags=align_lags)
    gamma = gamma_for(series.n_vars, design.effective_obs, h, config)
    est = estimate_step1(design, gamma, config)
    resid = design.Y - design.X @ est.a_tilde.T
    fit = float(np.sum(resid * resid)) / design.effective_obs
    return fit + xi * p_cand


def select_lag(series: PanelSeries, h_set, p_max: int,
               config: PenaltyConfig | None = None) -> LagSelection:
    """Minimize the criterion over p in {1, ..., p_max} for each horizon in
    h_set; ties break to the smallest p.  All candidates are fit on the
    sample a p_max-lag model would use, so their fit terms are comparable.
    The headline p_hat comes from the smallest horizon."""
    config = config or PenaltyConfig()
    h_set = sorted(set(int(h) for h in h_set))
    if not h_set:
        raise ValueError("h_set must be non-empty")
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    if p_max >= series.n_obs / 2:
        raise ValueError(f"p_max {p_max} too large for T={series.n_obs}")
    by_horizon: dict[int, int] = {}
    paths: dict[int, list[float]] = {}
    for h in h_set:
        probe = build_design(series, p_max, h)
        xi = config.xi_scale * math.sqrt(
            math.log(series.n_vars) / probe.effective_obs)
        path = [information_criterion(series, p, h, xi, config,
                                      align_lags=p_max)
                for p in range(1, p_max + 1)]
        by_horizon[h] = int(np.argmin(path)) + 1  # first minimum: smallest p
        paths[h] = path
    return LagSelection(p_hat=by_horizon[h_set[0]], by_horizon=by_horizon,
                        criterion=paths)
