"""Weighted-L1 penalized least squares via cyclic coordinate descent.

Public surface: LassoProblem / PenaltyConfig, solve_lasso (kernel-dispatched),
solve_gram (shared-Gram entry point used by the estimation stages),
soft_threshold, the enumeration oracle for tests, and kernel_name().
"""

from ._engine import (GRAM_LIMIT, KERNEL, LassoProblem, PenaltyConfig,
                      kernel_name, objective_value, soft_threshold,
                      solve_gram, solve_lasso)
from .oracle import MAX_FEATURES, lasso_oracle

__all__ = [
    "GRAM_LIMIT", "KERNEL", "MAX_FEATURES", "LassoProblem", "PenaltyConfig",
    "kernel_name", "lasso_oracle", "objective_value", "soft_threshold",
    "solve_gram", "solve_lasso",
]
