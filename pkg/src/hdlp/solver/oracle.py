"""Exhaustive reference solution for small weighted-lasso instances.

Every stationary point of the objective is characterized by a support S and
sign vector s solving (2/n) G_SS b = (2/n) q_S - gamma * (w_S * s).  The
global optimum therefore appears among the solutions of all (S, s) pairs,
so enumerating them and keeping the best objective value is exact.  This is
independent of the coordinate-descent path and serves as the test oracle.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ._engine import LassoProblem, objective_value

MAX_FEATURES = 12

__all__ = ["lasso_oracle", "MAX_FEATURES"]


def lasso_oracle(problem: LassoProblem) -> np.ndarray:
    """Globally minimize a small instance by (support, sign) enumeration.

    Cost grows like 3^d; refuses d > MAX_FEATURES.  Coordinates with
    weight +inf are excluded from every support.
    """
    d = problem.n_features
    if d > MAX_FEATURES:
        raise ValueError(f"oracle handles at most {MAX_FEATURES} features")
    X, y = problem.design, problem.response
    n, gamma, w = problem.n_obs, problem.base_gamma, problem.weights
    G = X.T @ X
    q = X.T @ y
    free = [j for j in range(d) if np.isfinite(w[j])]

    best = np.zeros(d)
    best_obj = objective_value(problem, best)
    for k in range(1, len(free) + 1):
        supports = np.array(list(combinations(free, k)), dtype=np.intp)
        signs = np.array(
            np.meshgrid(*([[-1.0, 1.0]] * k), indexing="ij")
        ).reshape(k, -1).T  # (2^k, k)
        # stationarity systems for all supports at once
        G_stack = G[supports[:, :, None], supports[:, None, :]]
        rhs = (q[supports][:, None, :]
               - 0.5 * n * gamma * w[supports][:, None, :] * signs[None])
        try:
            sols = np.linalg.solve(
                G_stack[:, None], rhs[..., None])[..., 0].reshape(-1, k)
        except np.linalg.LinAlgError:
            sols = np.einsum(
                "skl,scl->sck", np.linalg.pinv(G_stack), rhs
            ).reshape(-1, k)
        cand = np.zeros((sols.shape[0], d))
        rows = np.repeat(np.arange(supports.shape[0]), signs.shape[0])
        cand[np.arange(cand.shape[0])[:, None], supports[rows]] = sols
        # evaluate the true objective; wild solutions lose automatically
        resid = y[None, :] - cand @ X.T
        w_eval = np.where(np.isfinite(w), w, 0.0)  # frozen coords are zero anyway
        objs = (resid * resid).sum(axis=1) / n \
            + gamma * (np.abs(cand) * w_eval).sum(axis=1)
        objs = np.where(np.isfinite(objs), objs, np.inf)
        pick = int(np.argmin(objs))
        if objs[pick] < best_obj:
            best_obj = float(objs[pick])
            best = cand[pick]
    return best
