"""Pure-numpy fallback kernels, call-compatible with the compiled ones.

Same update order and stopping rule as _kernel.pyx; results agree with the
compiled kernel to floating-point reordering (~1e-12), not bit for bit.
"""

from __future__ import annotations

import numpy as np


def _kkt_residual(grad: np.ndarray, beta: np.ndarray, gamma: float,
                  weights: np.ndarray) -> float:
    """Largest violation of the subgradient conditions, frozen coords
    excluded.  grad is the gradient of the smooth part."""
    free = ~np.isinf(weights)
    if not np.any(free):
        return 0.0
    g, b, w = grad[free], beta[free], gamma * weights[free]
    active = b != 0.0
    v_active = np.abs(g[active] + w[active] * np.sign(b[active]))
    v_inactive = np.maximum(np.abs(g[~active]) - w[~active], 0.0)
    vmax = 0.0
    if v_active.size:
        vmax = float(v_active.max())
    if v_inactive.size:
        vmax = max(vmax, float(v_inactive.max()))
    return vmax


def cd_gram(G, q, n_obs, gamma, weights, max_iter, tol):
    d = q.shape[0]
    beta = np.zeros(d)
    s = np.zeros(d)  # running G @ beta
    free = [j for j in range(d) if not np.isinf(weights[j]) and G[j, j] > 0.0]
    half_n_gamma = 0.5 * n_obs * gamma
    sweep = 0
    converged = False
    kkt = np.inf
    for sweep in range(1, max_iter + 1):
        max_delta = 0.0
        for j in free:
            gjj = G[j, j]
            cj = q[j] - s[j] + gjj * beta[j]
            thr = half_n_gamma * weights[j]
            bj = np.sign(cj) * max(abs(cj) - thr, 0.0) / gjj
            delta = bj - beta[j]
            if delta != 0.0:
                beta[j] = bj
                s += delta * G[j]  # symmetric: row j == column j
                max_delta = max(max_delta, abs(delta))
        kkt = _kkt_residual((2.0 / n_obs) * (s - q), beta, gamma, weights)
        if max_delta < tol and kkt < 10.0 * tol:
            converged = True
            break
    return beta, kkt, sweep, converged


def cd_naive(X, y, gamma, weights, max_iter, tol):
    n, d = X.shape
    beta = np.zeros(d)
    r = y.astype(np.float64, copy=True)
    colsq = np.einsum("tj,tj->j", X, X)
    free = [j for j in range(d)
            if not np.isinf(weights[j]) and colsq[j] > 0.0]
    half_n_gamma = 0.5 * n * gamma
    sweep = 0
    converged = False
    kkt = np.inf
    for sweep in range(1, max_iter + 1):
        max_delta = 0.0
        for j in free:
            cj = float(X[:, j] @ r) + colsq[j] * beta[j]
            thr = half_n_gamma * weights[j]
            bj = np.sign(cj) * max(abs(cj) - thr, 0.0) / colsq[j]
            delta = bj - beta[j]
            if delta != 0.0:
                beta[j] = bj
                r -= delta * X[:, j]
                max_delta = max(max_delta, abs(delta))
        if max_delta < tol or sweep == max_iter:
            kkt = _kkt_residual(-(2.0 / n) * (X.T @ r), beta, gamma, weights)
            if max_delta < tol and kkt < 10.0 * tol:
                converged = True
                break
    return beta, kkt, sweep, converged
