"""Exception types shared across the package."""

from __future__ import annotations


class HdlpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HdlpError):
    """A data file could not be parsed; cites the offending location."""


class DegenerateColumnError(HdlpError):
    """A variable has zero sample variance and cannot be standardized."""


class InsufficientSampleError(HdlpError):
    """Not enough observations for the requested design."""


class NonstationaryError(HdlpError):
    """Companion matrix spectral radius is >= 1."""

    def __init__(self, radius: float):
        self.radius = radius
        super().__init__(f"companion spectral radius {radius:.6f} >= 1")


class ConvergenceError(HdlpError):
    """An iterative routine failed to reach its tolerance."""

    def __init__(self, message: str, kkt: float | None = None):
        self.kkt = kkt
        super().__init__(message)


class DegenerateNodeError(HdlpError):
    """A node-wise regression produced a near-zero residual scale."""

    def __init__(self, node: int, tau2: float):
        self.node = node
        self.tau2 = tau2
        super().__init__(f"node {node}: residual scale {tau2:.3e} below 1e-12")


class ScenarioError(HdlpError):
    """Too many Monte Carlo replications failed to trust the summary."""
