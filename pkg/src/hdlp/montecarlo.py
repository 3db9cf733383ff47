"""Replication harness for the banded benchmark process.

Each replication simulates the process, selects the lag order at the small
horizons, runs the full estimation pipeline at every requested horizon, and
keeps the first-lag coefficient blocks.  Scenario metrics aggregate over
replications: lag-selection frequencies, the support-classification error
rate against the true response pattern, and spectral-norm estimation errors
for the adaptive and debiased estimates.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dgp import benchmark_dgp, companion, ma_coefficient, simulate_var
from .errors import ConvergenceError, ScenarioError
from .inference import apply_sparsity, debias, nodewise
from .lp import estimate_step1, estimate_step2, gamma_for, select_lag
from .panel import build_design
from .solver import PenaltyConfig

__all__ = ["McScenario", "McRecord", "McSummary", "run_replication",
           "run_scenario", "metric_selection", "metric_sl", "metric_ad",
           "summary_json_dict", "summary_csv_rows"]

WORKERS_ENV = "HDLP_WORKERS"


@dataclass(frozen=True)
class McScenario:
    """One experiment cell: process size, sample length, replication count,
    response horizons, and lag-selection setup."""

    n_vars: int
    n_obs: int
    n_rep: int
    horizons: tuple[int, ...] = (1, 5, 10)
    p_max: int = 5
    h_select: tuple[int, ...] = (1, 2)
    base_seed: int = 0
    config: PenaltyConfig = field(default_factory=PenaltyConfig)
    p_true: int = 2
    burn_in: int = 500

    def __post_init__(self):
        benchmark_dgp(self.n_vars)  # validates N
        if self.n_rep < 1:
            raise ValueError("n_rep must be >= 1")
        object.__setattr__(self, "horizons",
                           tuple(sorted(set(int(h) for h in self.horizons))))
        object.__setattr__(self, "h_select",
                           tuple(sorted(set(int(h) for h in self.h_select))))
        if not self.horizons or not self.h_select:
            raise ValueError("horizons and h_select must be non-empty")
        for h in self.horizons + self.h_select:
            if not 1 <= h <= self.n_obs // 2:
                raise ValueError(f"horizon {h} out of range for T={self.n_obs}")


@dataclass(frozen=True)
class HorizonBlocks:
    """First-lag (N x N) blocks kept per estimated lag order and horizon."""

    a1_adaptive: np.ndarray
    a1_final: np.ndarray
    mask: np.ndarray


@dataclass(frozen=True)
class McRecord:
    """One replication: selected lags per selection horizon, coefficient
    blocks per (lag order, horizon), or the failure message."""

    r: int
    p_hat: dict[int, int]
    blocks: dict[tuple[int, int], HorizonBlocks]
    error: str | None = None


@dataclass(frozen=True)
class McSummary:
    """Scenario aggregates over successful replications.

    selection: per selection horizon, frequencies of under/correct/over lag
    choice.  sl / ad_adaptive / ad_debiased are keyed (selection horizon,
    response horizon).  mc_se carries the Monte Carlo standard error of each
    aggregated value under the same keys.
    """

    scenario: McScenario
    selection: dict[int, tuple[float, float, float]]
    sl: dict[tuple[int, int], float]
    ad_adaptive: dict[tuple[int, int], float]
    ad_debiased: dict[tuple[int, int], float]
    mc_se: dict[str, dict]
    n_used: int
    n_failed: int
    wall_time: float


def run_replication(scenario: McScenario, r: int) -> McRecord:
    """Simulate path r (seed = base_seed + r), select lags, and estimate.

    Estimation runs once per distinct selected lag order; horizons within a
    replication share the simulated path.
    """
    cfg = scenario.config
    N = scenario.n_vars
    series = simulate_var(benchmark_dgp(N), scenario.n_obs,
                          burn_in=scenario.burn_in,
                          seed=scenario.base_seed + r)
    sel = select_lag(series, scenario.h_select, scenario.p_max, cfg)
    blocks: dict[tuple[int, int], HorizonBlocks] = {}
    for p in sorted(set(sel.by_horizon.values())):
        for h in scenario.horizons:
            design = build_design(series, p, h)
            gamma = gamma_for(N, design.effective_obs, h, cfg)
            step1 = estimate_step1(design, gamma, cfg)
            step2 = estimate_step2(design, step1, gamma, cfg)
            prec = nodewise(design, gamma, cfg)
            final = apply_sparsity(debias(design, step1, prec), step2)
            blocks[(p, h)] = HorizonBlocks(
                a1_adaptive=step2.a_tilde[:, :N].copy(),
                a1_final=final.a_tilde[:, :N].copy(),
                mask=step2.mask[:, :N].copy())
    return McRecord(r=r, p_hat=dict(sel.by_horizon), blocks=blocks)


def _safe_replication(args: tuple[McScenario, int]) -> McRecord:
    scenario, r = args
    try:
        return run_replication(scenario, r)
    except Exception as exc:  # recorded, not raised: one bad path is data
        return McRecord(r=r, p_hat={}, blocks={},
                        error=f"{type(exc).__name__}: {exc}")


def metric_selection(records: list[McRecord], h_sel: int,
                     p_true: int) -> tuple[float, float, float]:
    """(under, correct, over) frequencies of the selected lag order."""
    picks = np.array([rec.p_hat[h_sel] for rec in records])
    n = len(picks)
    if n == 0:
        raise ValueError("no records")
    return (float(np.mean(picks < p_true)), float(np.mean(picks == p_true)),
            float(np.mean(picks > p_true)))


def metric_sl(mask: np.ndarray, truth: np.ndarray,
              tol_zero: float = 0.0) -> float:
    """Fraction of entries whose selection disagrees with the true support
    (entries of `truth` with magnitude <= tol_zero count as zeros)."""
    if mask.shape != truth.shape:
        raise ValueError("shape mismatch")
    true_nonzero = np.abs(truth) > tol_zero
    return float(np.mean(mask.astype(bool) != true_nonzero))


def metric_ad(est: np.ndarray, truth: np.ndarray) -> float:
    """Spectral norm of est - truth via power iteration on D'D.

    Deterministic start (dominant column of D'D); the Rayleigh quotient is
    iterated to relative tolerance 1e-9.
    """
    if est.shape != truth.shape:
        raise ValueError("shape mismatch")
    D = est - truth
    M = D.T @ D
    norms = np.linalg.norm(M, axis=0)
    top = int(np.argmax(norms))
    if norms[top] <= 0.0:
        return 0.0
    v = M[:, top] / norms[top]
    lam = float(v @ M @ v)
    for _ in range(10000):
        w = M @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam_new = float(v @ M @ v)
        if abs(lam_new - lam) <= 1e-9 * max(abs(lam_new), 1e-300):
            return float(np.sqrt(max(lam_new, 0.0)))
        lam = lam_new
    raise ConvergenceError("power iteration did not reach 1e-9")


def run_scenario(scenario: McScenario, workers: int | None = None) -> McSummary:
    """Run all replications and aggregate.

    Results are byte-identical for any worker count: replication r depends
    only on (scenario, r), and aggregation folds records in r order.  More
    than 10% failed replications aborts the scenario.
    """
    t0 = time.perf_counter()
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers < 1:
        raise ValueError("workers must be >= 1")
    jobs = [(scenario, r) for r in range(scenario.n_rep)]
    if workers == 1:
        records = [_safe_replication(j) for j in jobs]
    else:
        chunk = max(1, scenario.n_rep // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_safe_replication, jobs, chunksize=chunk))
    records.sort(key=lambda rec: rec.r)
    failed = [rec for rec in records if rec.error is not None]
    if len(failed) > 0.10 * scenario.n_rep:
        raise ScenarioError(
            f"{len(failed)}/{scenario.n_rep} replications failed; "
            f"first: {failed[0].error}")
    good = [rec for rec in records if rec.error is None]

    comp = companion(benchmark_dgp(scenario.n_vars))
    truth = {h: ma_coefficient(comp, h) for h in scenario.horizons}

    selection = {}
    sl: dict[tuple[int, int], float] = {}
    ad_a: dict[tuple[int, int], float] = {}
    ad_d: dict[tuple[int, int], float] = {}
    se: dict[str, dict] = {"selection": {}, "sl": {}, "ad_adaptive": {},
                           "ad_debiased": {}}

    def _mc_se(values: np.ndarray) -> float:
        if values.size < 2:
            return float("nan")
        return float(values.std(ddof=1) / np.sqrt(values.size))

    for ell in scenario.h_select:
        selection[ell] = metric_selection(good, ell, scenario.p_true)
        correct = np.array(
            [rec.p_hat[ell] == scenario.p_true for rec in good], dtype=float)
        se["selection"][ell] = _mc_se(correct)
        for h in scenario.horizons:
            per_rec = [rec.blocks[(rec.p_hat[ell], h)] for rec in good]
            sl_vals = np.array([metric_sl(b.mask, truth[h]) for b in per_rec])
            ada_vals = np.array(
                [metric_ad(b.a1_adaptive, truth[h]) for b in per_rec])
            add_vals = np.array(
                [metric_ad(b.a1_final, truth[h]) for b in per_rec])
            sl[(ell, h)] = float(sl_vals.mean())
            ad_a[(ell, h)] = float(ada_vals.mean())
            ad_d[(ell, h)] = float(add_vals.mean())
            se["sl"][(ell, h)] = _mc_se(sl_vals)
            se["ad_adaptive"][(ell, h)] = _mc_se(ada_vals)
            se["ad_debiased"][(ell, h)] = _mc_se(add_vals)

    return McSummary(scenario=scenario, selection=selection, sl=sl,
                     ad_adaptive=ad_a, ad_debiased=ad_d, mc_se=se,
                     n_used=len(good), n_failed=len(failed),
                     wall_time=time.perf_counter() - t0)


def summary_json_dict(summary: McSummary) -> dict:
    """JSON-ready dict; excludes wall time so equal runs serialize equally."""
    sc = summary.scenario
    out = {
        "scenario": {
            "n_vars": sc.n_vars, "n_obs": sc.n_obs, "n_rep": sc.n_rep,
            "horizons": list(sc.horizons), "p_max": sc.p_max,
            "h_select": list(sc.h_select), "base_seed": sc.base_seed,
            "p_true": sc.p_true, "burn_in": sc.burn_in,
        },
        "selection": {
            str(ell): {"under": u, "correct": c, "over": o,
                       "mc_se_correct": summary.mc_se["selection"][ell]}
            for ell, (u, c, o) in summary.selection.items()
        },
        "n_used": summary.n_used,
        "n_failed": summary.n_failed,
    }
    for name, values in (("sl", summary.sl),
                         ("ad_adaptive", summary.ad_adaptive),
                         ("ad_debiased", summary.ad_debiased)):
        block: dict[str, dict[str, dict[str, float]]] = {}
        for (ell, h), v in values.items():
            block.setdefault(str(ell), {})[str(h)] = {
                "value": v, "mc_se": summary.mc_se[name][(ell, h)]}
        out[name] = block
    return out


def summary_csv_rows(summary: McSummary) -> list[tuple]:
    """Long-format rows (N, T, metric, h, value); selection metrics carry
    the selection horizon in the h column, the others carry the response
    horizon and name the selection horizon in the metric label."""
    sc = summary.scenario
    rows: list[tuple] = []
    for ell, (u, c, o) in summary.selection.items():
        rows.append((sc.n_vars, sc.n_obs, "S-", ell, u))
        rows.append((sc.n_vars, sc.n_obs, "S", ell, c))
        rows.append((sc.n_vars, sc.n_obs, "S+", ell, o))
    for name, values in (("SL", summary.sl), ("AD_a", summary.ad_adaptive),
                         ("AD_d", summary.ad_debiased)):
        for (ell, h), v in sorted(values.items()):
            rows.append((sc.n_vars, sc.n_obs, f"{name}|sel{ell}", h, v))
    return rows
