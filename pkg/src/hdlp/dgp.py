"""Vector autoregressions: simulation, companion form, and moving-average
coefficients, plus the banded two-lag design used by the simulation harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonstationaryError
from .panel import PanelSeries

__all__ = ["VarCoefficients", "CompanionForm", "companion", "ma_coefficient",
           "simulate_var", "benchmark_dgp"]


@dataclass(frozen=True)
class VarCoefficients:
    """Lag matrices (a_1, ..., a_p), each N x N."""

    mats: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.mats:
            raise ValueError("need at least one lag matrix")
        mats = []
        n = None
        for a in self.mats:
            a = np.array(a, dtype=np.float64)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValueError("lag matrices must be square")
            if n is None:
                n = a.shape[0]
            elif a.shape[0] != n:
                raise ValueError("lag matrices must share one dimension")
            a.setflags(write=False)
            mats.append(a)
        object.__setattr__(self, "mats", tuple(mats))

    @property
    def n_vars(self) -> int:
        return self.mats[0].shape[0]

    @property
    def order(self) -> int:
        return len(self.mats)


@dataclass(frozen=True)
class CompanionForm:
    """Stacked first-order form: C is (N*p) x (N*p), the top N rows hold
    (a_1 ... a_p) and the subdiagonal blocks are identities."""

    C: np.ndarray
    n_vars: int

    def __post_init__(self):
        c = np.array(self.C, dtype=np.float64)
        c.setflags(write=False)
        object.__setattr__(self, "C", c)


def companion(coefs: VarCoefficients) -> CompanionForm:
    """Build the companion matrix and verify stationarity (spectral radius
    strictly below 1, with 1e-10 slack)."""
    n, p = coefs.n_vars, coefs.order
    C = np.zeros((n * p, n * p))
    C[:n] = np.concatenate(coefs.mats, axis=1)
    if p > 1:
        C[n:, :-n] = np.eye(n * (p - 1))
    radius = float(np.max(np.abs(np.linalg.eigvals(C))))
    if radius >= 1.0 - 1e-10:
        raise NonstationaryError(radius)
    return CompanionForm(C=C, n_vars=n)


def ma_coefficient(comp: CompanionForm, ell: int) -> np.ndarray:
    """Moving-average matrix B_ell = S C^ell S' where S selects the leading
    N coordinates of the companion state.  B_0 is the identity."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    n = comp.n_vars
    power = np.linalg.matrix_power(comp.C, ell)
    return np.ascontiguousarray(power[:n, :n])


def simulate_var(coefs: VarCoefficients, t_obs: int, burn_in: int = 500,
                 seed: int = 0) -> PanelSeries:
    """Simulate t_obs in-sample rows with standard normal innovations.

    Starts from zeros, discards `burn_in` rows, and keeps p-1 presample rows
    so every in-sample target has a full lag window.  The generator is
    counter based (Philox), so one seed fixes the whole path.
    """
    companion(coefs)  # stationarity gate
    n, p = coefs.n_vars, coefs.order
    if t_obs < 2:
        raise ValueError("t_obs must be >= 2")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    rng = np.random.Generator(np.random.Philox(seed))
    keep = t_obs + p - 1
    shocks = rng.standard_normal((burn_in + keep, n))
    hist = np.zeros((p, n))  # hist[j] = x_{t-1-j}
    out = np.empty((burn_in + keep, n))
    for t in range(burn_in + keep):
        x = shocks[t].copy()
        for j, a in enumerate(coefs.mats):
            x += a @ hist[j]
        out[t] = x
        if p > 1:
            hist[1:] = hist[:-1]
        hist[0] = x
    return PanelSeries(values=out[burn_in:], pad=p - 1)


def benchmark_dgp(n_vars: int) -> VarCoefficients:
    """Banded two-lag design for the simulation harness.

    Lag 1 carries a 0.25 diagonal on the first half of the variables and a
    full 0.35 subdiagonal; lag 2 carries a 0.35 diagonal on the second half
    and a full -0.25 superdiagonal.  Requires an even N >= 2.
    """
    if n_vars < 2 or n_vars % 2:
        raise ValueError("n_vars must be even and >= 2")
    half = n_vars // 2
    a1 = np.zeros((n_vars, n_vars))
    a2 = np.zeros((n_vars, n_vars))
    for i in range(n_vars):
        if i < half:
            a1[i, i] = 0.25
        else:
            a2[i, i] = 0.35
        if i >= 1:
            a1[i, i - 1] = 0.35
        if i + 1 < n_vars:
            a2[i, i + 1] = -0.25
    return VarCoefficients(mats=(a1, a2))
