"""Sparse high-dimensional local projections.

Estimates h-step-ahead impulse responses of a wide vector time series by
penalized projection regressions, with data-driven lag selection, debiased
coefficients, and pointwise confidence bands built from a banded long-run
covariance.  See the README for the CLI surface.
"""

from .dgp import (CompanionForm, VarCoefficients, benchmark_dgp, companion,
                  ma_coefficient, simulate_var)
from .inference import (IrfBand, LongRunCov, PrecisionEstimate, ResidualPanel,
                        apply_sparsity, coef_variance, debias, irf_with_bands,
                        long_run_cov, nodewise, residuals, threshold)
from .lp import (CoefEstimate, LagSelection, estimate_step1, estimate_step2,
                 gamma_for, information_criterion, select_lag)
from .montecarlo import (McRecord, McScenario, McSummary, metric_ad,
                         metric_selection, metric_sl, run_replication,
                         run_scenario)
from .panel import (CsvOptions, LpDesign, PanelSeries, build_design, load_csv,
                    standardize, write_csv)
from .solver import (LassoProblem, PenaltyConfig, kernel_name, lasso_oracle,
                     soft_threshold, solve_lasso)

__version__ = "0.1.0"

__all__ = [
    "CompanionForm", "VarCoefficients", "benchmark_dgp", "companion",
    "ma_coefficient", "simulate_var",
    "IrfBand", "LongRunCov", "PrecisionEstimate", "ResidualPanel",
    "apply_sparsity", "coef_variance", "debias", "irf_with_bands",
    "long_run_cov", "nodewise", "residuals", "threshold",
    "CoefEstimate", "LagSelection", "estimate_step1", "estimate_step2",
    "gamma_for", "information_criterion", "select_lag",
    "McRecord", "McScenario", "McSummary", "metric_ad", "metric_selection",
    "metric_sl", "run_replication", "run_scenario",
    "CsvOptions", "LpDesign", "PanelSeries", "build_design", "load_csv",
    "standardize", "write_csv",
    "LassoProblem", "PenaltyConfig", "kernel_name", "lasso_oracle",
    "soft_threshold", "solve_lasso",
    "__version__",
]
