"""Debiased coefficients and confidence bands for projection estimates.

The sampling variance of a debiased coefficient couples the node-wise
precision estimate with a banded long-run covariance of the score panel
w_t = vec(u_t x_t'); horizons overlap, so scores are correlated up to lag
h-1.  The N^2*p-dimensional covariance is never materialized beyond the
per-response blocks the variance formula touches, except in a small dense
fast path.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import DegenerateNodeError
from .lp import CoefEstimate, estimate_step1, estimate_step2, gamma_for
from .panel import LpDesign, PanelSeries, build_design
from .solver import PenaltyConfig, solve_gram

__all__ = ["ResidualPanel", "LongRunCov", "PrecisionEstimate", "IrfBand",
           "residuals", "long_run_cov", "threshold", "nodewise", "debias",
           "apply_sparsity", "coef_variance", "irf_with_bands"]

log = logging.getLogger(__name__)

# largest N^2*p for which the full covariance is stored densely
DENSE_LIMIT = 4096


@dataclass(frozen=True)
class ResidualPanel:
    """Projection residuals, one column per response variable."""

    U: np.ndarray
    horizon: int
    stage: str

    def __post_init__(self):
        u = np.array(self.U, dtype=np.float64)
        if u.ndim != 2:
            raise ValueError("U must be 2-d")
        u.setflags(write=False)
        object.__setattr__(self, "U", u)


def residuals(design: LpDesign, est: CoefEstimate) -> ResidualPanel:
    """U = Y - X A' for an estimate fit on this design."""
    if est.a_tilde.shape != (design.n_vars, design.X.shape[1]):
        raise ValueError("estimate does not match the design")
    if est.horizon != design.horizon:
        raise ValueError("estimate and design horizons differ")
    return ResidualPanel(U=design.Y - design.X @ est.a_tilde.T,
                         horizon=design.horizon, stage=est.stage)


def _band_crossprod(A: np.ndarray, h: int) -> np.ndarray:
    """sum over |t-k| < h of A[t]' A[k], exactly symmetrized."""
    M = A.T @ A
    for d in range(1, h):
        if d >= A.shape[0]:
            break
        C = A[:-d].T @ A[d:]
        M += C
        M += C.T
    upper = np.triu(M)
    return upper + np.triu(M, 1).T


class LongRunCov:
    """Banded long-run covariance of the score panel, with entrywise
    soft support: off-diagonal entries smaller than `eta` in magnitude
    read as zero.  Dense mode stores the thresholded matrix; lazy mode
    stores the score factors (X, U) and materializes only what accessors
    touch.
    """

    def __init__(self, X: np.ndarray, U: np.ndarray, horizon: int,
                 eta: float = 0.0, dense: np.ndarray | None = None):
        self._X = X
        self._U = U
        self.horizon = horizon
        self.t_eff = X.shape[0]
        self.eta = float(eta)
        self._dense = dense

    @property
    def mode(self) -> str:
        return "dense" if self._dense is not None else "lazy"

    @property
    def dim(self) -> int:
        return self._X.shape[1] * self._U.shape[1]

    @property
    def n_vars(self) -> int:
        return self._U.shape[1]

    def _threshold_inplace(self, M: np.ndarray, rows, cols) -> np.ndarray:
        if self.eta > 0.0:
            off = ~np.equal.outer(rows, cols)
            M[off & (np.abs(M) < self.eta)] = 0.0
        return M

    def dense_matrix(self) -> np.ndarray:
        """Full thresholded matrix; dense mode only."""
        if self._dense is None:
            raise ValueError("matrix too large; use entry()/response_block()")
        return self._dense

    def entry(self, i: int, j: int) -> float:
        """Entry (i, j) in vec index order: index = l * N + m for score
        component x_{t,l} * u_{t,m}.  Computed once per unordered pair, so
        entry(i, j) == entry(j, i) exactly."""
        if self._dense is not None:
            return float(self._dense[i, j])
        a, b = (i, j) if i <= j else (j, i)
        N = self.n_vars
        wa = self._X[:, a // N] * self._U[:, a % N]
        wb = self._X[:, b // N] * self._U[:, b % N]
        n = self.t_eff
        total = float(wa @ wb)
        for d in range(1, min(self.horizon, n)):
            total += float(wa[:-d] @ wb[d:]) + float(wa[d:] @ wb[:-d])
        v = total / n
        if i != j and abs(v) < self.eta:
            return 0.0
        return v

    def response_block(self, m: int) -> np.ndarray:
        """(N*p x N*p) submatrix for response m: rows/cols l*N + m over all
        regressors l.  This is the only piece coef_variance needs."""
        if self._dense is not None:
            idx = np.arange(self._X.shape[1]) * self.n_vars + m
            return self._dense[np.ix_(idx, idx)]
        Wm = self._X * self._U[:, m][:, None]
        B = _band_crossprod(Wm, self.horizon) / self.t_eff
        r = np.arange(B.shape[0])
        return self._threshold_inplace(B, r, r)


def long_run_cov(design: LpDesign, res: ResidualPanel) -> LongRunCov:
    """Banded covariance (1/(T-h)) sum over |t-k| < h of w_t w_k' of the
    scores w_t = vec(u_t x_t').  Stores the full matrix when its dimension
    N^2*p is at most DENSE_LIMIT, otherwise falls back to lazy access."""
    if res.U.shape[0] != design.X.shape[0]:
        raise ValueError("residual panel does not match the design")
    if res.horizon != design.horizon:
        raise ValueError("residual panel horizon differs from the design")
    X, U = design.X, res.U
    n, N = U.shape
    dim = X.shape[1] * N
    if dim <= DENSE_LIMIT:
        # W[t, l*N + m] = X[t, l] * U[t, m]
        W = (X[:, :, None] * U[:, None, :]).reshape(n, dim)
        dense = _band_crossprod(W, design.horizon) / n
        return LongRunCov(X, U, design.horizon, eta=0.0, dense=dense)
    log.info("long-run covariance dimension %d exceeds %d; using lazy mode",
             dim, DENSE_LIMIT)
    return LongRunCov(X, U, design.horizon, eta=0.0)


def threshold(cov: LongRunCov, eta: float) -> LongRunCov:
    """Zero off-diagonal entries with magnitude below eta; the diagonal is
    never touched.  Thresholding composes: applying eta2 after eta1 equals
    applying max(eta1, eta2) once."""
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if cov.mode == "dense":
        M = cov.dense_matrix().copy()
        if eta > 0.0:
            off = ~np.eye(M.shape[0], dtype=bool)
            M[off & (np.abs(M) < eta)] = 0.0
        return LongRunCov(cov._X, cov._U, cov.horizon,
                          eta=max(cov.eta, eta), dense=M)
    return LongRunCov(cov._X, cov._U, cov.horizon, eta=max(cov.eta, eta))


@dataclass(frozen=True)
class PrecisionEstimate:
    """Node-wise inverse of the regressor Gram matrix.

    theta row j approximates the j-th row of the inverse; b_hats row j holds
    the lasso loadings of regressor j on the others (zero diagonal); tau2 is
    the penalized residual scale per node.
    """

    theta: np.ndarray
    tau2: np.ndarray
    b_hats: np.ndarray
    gamma_tilde: float

    def __post_init__(self):
        for name in ("theta", "tau2", "b_hats"):
            a = np.array(getattr(self, name), dtype=np.float64)
            a.setflags(write=False)
            object.__setattr__(self, name, a)


def nodewise(design: LpDesign, gamma_tilde: float,
             config: PenaltyConfig | None = None) -> PrecisionEstimate:
    """Regress each design column on the rest with penalty 2*gamma_tilde.

    All N*p regressions reuse one Gram matrix: column j is excluded by an
    infinite weight rather than by slicing, so q_j is just the j-th Gram
    column.  tau2_j = mean squared residual + gamma_tilde * |b_j|_1 must
    exceed 1e-12, else the node is degenerate.
    """
    config = config or PenaltyConfig()
    if gamma_tilde < 0:
        raise ValueError("gamma_tilde must be >= 0")
    X = design.X
    n, d = X.shape
    G = X.T @ X
    B = np.empty((d, d))
    tau2 = np.empty(d)
    for j in range(d):
        w = np.ones(d)
        w[j] = np.inf
        b = solve_gram(G, G[:, j], n, 2.0 * gamma_tilde, w, config,
                       what=f"nodewise {j}")
        r = X[:, j] - X @ b
        t2 = float(r @ r) / n + gamma_tilde * float(np.abs(b).sum())
        if t2 <= 1e-12:
            raise DegenerateNodeError(j, t2)
        B[j] = b
        tau2[j] = t2
    theta = (np.eye(d) - B) / tau2[:, None]
    return PrecisionEstimate(theta=theta, tau2=tau2, b_hats=B,
                             gamma_tilde=gamma_tilde)


def debias(design: LpDesign, step1: CoefEstimate,
           prec: PrecisionEstimate) -> CoefEstimate:
    """One-step correction A + (1/(T-h)) sum_t r_t x_t' Theta' of the
    stage-one estimate, removing the shrinkage bias of the penalty.  The
    result is dense (mask all ones) until apply_sparsity."""
    if step1.stage != "lasso":
        raise ValueError("debias expects the stage-one estimate")
    U = residuals(design, step1).U
    n = design.effective_obs
    corr = (U.T @ design.X) @ prec.theta.T / n
    a = step1.a_tilde + corr
    return CoefEstimate(a_tilde=a, mask=np.ones_like(a, dtype=np.uint8),
                        stage="debiased", horizon=step1.horizon,
                        lags=step1.lags, gamma_used=step1.gamma_used)


def apply_sparsity(debiased: CoefEstimate,
                   mask_source: CoefEstimate) -> CoefEstimate:
    """Zero the debiased estimate outside the adaptive-stage support."""
    if debiased.stage != "debiased":
        raise ValueError("expected a debiased estimate")
    if mask_source.stage != "adaptive":
        raise ValueError("mask must come from the adaptive stage")
    if mask_source.mask.shape != debiased.a_tilde.shape:
        raise ValueError("mask shape does not match the estimate")
    keep = mask_source.mask.astype(bool)
    return CoefEstimate(a_tilde=np.where(keep, debiased.a_tilde, 0.0),
                        mask=mask_source.mask.copy(), stage="debiased",
                        horizon=debiased.horizon, lags=debiased.lags,
                        gamma_used=debiased.gamma_used)


def coef_variance(index: tuple[int, int], prec: PrecisionEstimate,
                  cov: LongRunCov) -> float:
    """Asymptotic variance of debiased coefficient (response m, regressor k);
    negative values from aggressive thresholding clamp to zero.

    The full-dimension quadratic form (theta_k x e_m)' Omega (theta_k x e_m)
    reduces to theta_k' Omega^(m) theta_k on the response-m block, because
    the Kronecker vector is zero outside that block.
    """
    m, k = index
    theta_k = prec.theta[k]
    block = cov.response_block(m)
    v = float(theta_k @ block @ theta_k)
    return max(v, 0.0)


@dataclass(frozen=True)
class IrfBand:
    """Impulse-response point estimates and pointwise intervals for one
    horizon.  Arrays are N x N (response i, shock j); se and the bounds are
    NaN outside the selected support.  clamped marks entries whose variance
    estimate was clamped at zero."""

    horizon: int
    point: np.ndarray
    se: np.ndarray
    level: float
    lower: np.ndarray
    upper: np.ndarray
    clamped: np.ndarray


def irf_with_bands(series: PanelSeries, p: int, horizons,
                   level: float = 0.90,
                   config: PenaltyConfig | None = None,
                   residual_stage: str = "lasso") -> list[IrfBand]:
    """Full pipeline per horizon: two estimation stages, node-wise precision,
    debiasing, sparsity re-imposition, and delta-method intervals.

    The response of variable i to shock j at horizon h is the (i, j) entry
    of the first N-column block of the debiased coefficients.  Intervals are
    pointwise two-sided at `level` with the covariance banded to the horizon
    and thresholded at eta_scale * sqrt(h * log(N) / T_eff).
    """
    config = config or PenaltyConfig()
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    if residual_stage not in ("lasso", "adaptive"):
        raise ValueError("residual_stage must be 'lasso' or 'adaptive'")
    z = NormalDist().inv_cdf(0.5 + level / 2.0)
    N = series.n_vars
    out = []
    for h in sorted(set(int(h) for h in horizons)):
        design = build_design(series, p, h)
        n = design.effective_obs
        gamma = gamma_for(N, n, h, config)
        step1 = estimate_step1(design, gamma, config)
        step2 = estimate_step2(design, step1, gamma, config)
        prec = nodewise(design, gamma, config)
        final = apply_sparsity(debias(design, step1, prec), step2)
        stage_est = step1 if residual_stage == "lasso" else step2
        cov = long_run_cov(design, residuals(design, stage_est))
        eta = config.eta_scale * math.sqrt(h * math.log(N) / n)
        cov = threshold(cov, eta)
        point = final.a_tilde[:, :N].copy()
        selected = final.mask[:, :N].astype(bool)
        se = np.full((N, N), np.nan)
        clamped = np.zeros((N, N), dtype=bool)
        for i, j in zip(*np.nonzero(selected)):
            v = coef_variance((int(i), int(j)), prec, cov)
            clamped[i, j] = v == 0.0
            se[i, j] = math.sqrt(v / n)
        out.append(IrfBand(horizon=h, point=point, se=se, level=level,
                           lower=point - z * se, upper=point + z * se,
                           clamped=clamped))
    return out
