"""Problem types and kernel dispatch for weighted-L1 penalized least squares.

The objective throughout is

    (1/n) * ||y - X b||_2^2 + gamma * sum_j w_j * |b_j|

with n the number of rows of X.  Weights may be +inf, which freezes the
coordinate at exactly zero.  Two kernel implementations exist: a compiled
one (built from _kernel.pyx) and a pure-numpy one (_kernel_py).  The
compiled kernel is preferred when importable; set HDLP_PURE_PYTHON=1 to
force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError

# columns above this use residual (naive) updates instead of a Gram matrix
GRAM_LIMIT = 4096

if os.environ.get("HDLP_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernel_py as _impl
    KERNEL = "python"
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
        KERNEL = "compiled"
    except ImportError:
        from . import _kernel_py as _impl
        KERNEL = "python"


def kernel_name() -> str:
    """Which coordinate-descent kernel was selected at import time."""
    return KERNEL


@dataclass(frozen=True)
class PenaltyConfig:
    """Tuning constants and solver controls.

    gamma_scale, xi_scale, eta_scale scale the penalty, lag-selection, and
    covariance-thresholding rates; zeta is the adaptive-weight exponent;
    j_moment is the moment order behind the horizon factor h**(1/5).

    The default scales are calibrated on the banded benchmark process so
    that lag selection and support recovery behave like the reference
    implementation: gamma_scale absorbs the factor-of-two difference between
    this package's (1/n)||.||^2 objective and solvers normalizing by 1/(2n),
    and xi_scale compensates the fit gains a lasso extracts from spurious
    extra lags, which a criterion charge at the bare sqrt(log N / T) rate
    does not cover.
    """

    gamma_scale: float = 1.75
    zeta: float = 1.0
    xi_scale: float = 4.25
    eta_scale: float = 2.0
    j_moment: float = 5.0
    max_iter: int = 10000
    tol: float = 1e-7

    def __post_init__(self):
        for name in ("gamma_scale", "zeta", "xi_scale", "eta_scale",
                     "j_moment", "tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.tol >= 1:
            raise ValueError("tol must be < 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class LassoProblem:
    """One weighted lasso instance: design (n x d), response (n,), optional
    per-coordinate weights (default all ones; +inf freezes a coordinate),
    and the base penalty level."""

    design: np.ndarray
    response: np.ndarray
    base_gamma: float
    weights: np.ndarray | None = None

    def __post_init__(self):
        X = np.ascontiguousarray(self.design, dtype=np.float64)
        y = np.ascontiguousarray(self.response, dtype=np.float64)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ValueError("design must be (n, d) with matching response")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("design must be non-empty")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("design and response must be finite")
        if not self.base_gamma >= 0:
            raise ValueError("base_gamma must be >= 0")
        w = (np.ones(X.shape[1]) if self.weights is None
             else np.ascontiguousarray(self.weights, dtype=np.float64))
        if w.shape != (X.shape[1],):
            raise ValueError("weights must have one entry per column")
        if np.any(w < 0) or np.any(np.isnan(w)):
            raise ValueError("weights must be >= 0 (inf allowed)")
        object.__setattr__(self, "design", X)
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "weights", w)

    @property
    def n_obs(self) -> int:
        return self.design.shape[0]

    @property
    def n_features(self) -> int:
        return self.design.shape[1]


def soft_threshold(z: float, lam: float) -> float:
    """sign(z) * max(|z| - lam, 0)."""
    if z > lam:
        return z - lam
    if z < -lam:
        return z + lam
    return 0.0


def objective_value(problem: LassoProblem, beta: np.ndarray) -> float:
    """Evaluate the penalized objective at beta (inf*0 treated as 0)."""
    r = problem.response - problem.design @ beta
    fit = float(r @ r) / problem.n_obs
    active = beta != 0.0  # inf-weight coords at zero contribute nothing
    pen = float(np.abs(beta[active]) @ problem.weights[active])
    return fit + problem.base_gamma * pen


def solve_gram(G: np.ndarray, q: np.ndarray, n_obs: int, gamma: float,
               weights: np.ndarray, config: PenaltyConfig,
               what: str = "lasso") -> np.ndarray:
    """Coordinate descent given precomputed G = X'X and q = X'y.

    Shared by every estimation stage so the Gram matrix is built once per
    design.  Raises ConvergenceError naming `what` if max_iter is hit.
    """
    beta, kkt, sweeps, ok = _impl.cd_gram(
        np.ascontiguousarray(G), np.ascontiguousarray(q), float(n_obs),
        float(gamma), np.ascontiguousarray(weights, dtype=np.float64),
        config.max_iter, config.tol)
    if not ok:
        raise ConvergenceError(
            f"{what}: no convergence in {sweeps} sweeps (kkt {kkt:.3e})",
            kkt=kkt)
    return beta


def solve_lasso(problem: LassoProblem,
                config: PenaltyConfig | None = None) -> np.ndarray:
    """Solve one instance to stationarity.

    Uses Gram updates for d <= GRAM_LIMIT columns and residual updates
    above; both kernels stop when the largest coordinate move of a sweep is
    below tol and the KKT residual is below 10*tol.
    """
    config = config or PenaltyConfig()
    X, y = problem.design, problem.response
    if problem.n_features <= GRAM_LIMIT:
        return solve_gram(X.T @ X, X.T @ y, problem.n_obs,
                          problem.base_gamma, problem.weights, config)
    beta, kkt, sweeps, ok = _impl.cd_naive(
        np.asfortranarray(X), y, float(problem.base_gamma),
        problem.weights, config.max_iter, config.tol)
    if not ok:
        raise ConvergenceError(
            f"lasso: no convergence in {sweeps} sweeps (kkt {kkt:.3e})",
            kkt=kkt)
    return beta
