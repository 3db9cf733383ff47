"""Multivariate time-series container, CSV ingestion, and design construction.

A panel holds T in-sample observations of N variables plus an optional block
of `pad` presample rows.  Presample rows supply lags only: they never appear
as a regression target and never count toward the in-sample length.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateColumnError, InsufficientSampleError, ParseError

__all__ = ["PanelSeries", "LpDesign", "CsvOptions", "load_csv", "write_csv",
           "standardize", "build_design"]


def _frozen_array(values, dtype=np.float64, ndim=None) -> np.ndarray:
    arr = np.array(values, dtype=dtype, order="C")
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"expected {ndim}-dimensional array, got {arr.ndim}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PanelSeries:
    """T+pad rows by N columns of float64, immutable after construction.

    Attributes:
        values: full data block including presample rows, shape (pad + T, N).
        pad: number of leading presample rows (lags only).
        labels: optional variable names, one per column.
    """

    values: np.ndarray
    pad: int = 0
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, ndim=2))
        if not np.all(np.isfinite(self.values)):
            raise ValueError("panel contains non-finite values")
        if self.pad < 0:
            raise ValueError("pad must be >= 0")
        if self.n_vars < 1:
            raise ValueError("panel needs at least one variable")
        if self.n_obs < 2:
            raise InsufficientSampleError(
                f"need at least 2 in-sample rows, got {self.n_obs}")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n_vars:
                raise ValueError("label count does not match column count")
            object.__setattr__(self, "labels", labels)

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]

    @property
    def n_obs(self) -> int:
        """In-sample length T (presample rows excluded)."""
        return self.values.shape[0] - self.pad


@dataclass(frozen=True)
class LpDesign:
    """Regression arrays for one projection horizon.

    X stacks [x_t, x_{t-1}, ..., x_{t-p+1}] per row (N*p columns); Y holds the
    matching h-step-ahead targets x_{t+h}.  Rows share a common time index.
    """

    horizon: int
    lags: int
    X: np.ndarray
    Y: np.ndarray
    effective_obs: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "X", _frozen_array(self.X, ndim=2))
        object.__setattr__(self, "Y", _frozen_array(self.Y, ndim=2))
        if self.X.shape[0] != self.Y.shape[0]:
            raise ValueError("X and Y row counts differ")
        object.__setattr__(self, "effective_obs", self.X.shape[0])

    @property
    def n_vars(self) -> int:
        return self.Y.shape[1]


@dataclass(frozen=True)
class CsvOptions:
    """Ingestion flags: `header` is True, False, or "auto" (sniff the first
    row); `skip_date_column` drops the leading column of every row."""

    header: bool | str = "auto"
    skip_date_column: bool = False
    delimiter: str = ","


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def load_csv(path: str, options: CsvOptions | None = None) -> PanelSeries:
    """Read a rectangular numeric CSV into a PanelSeries with pad = 0.

    Raises ParseError citing the 1-based (line, column) of the first bad
    cell, a ragged row, or an empty file.
    """
    options = options or CsvOptions()
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh, delimiter=options.delimiter))
    rows = [r for r in rows if r]  # drop blank lines
    if not rows:
        raise ParseError(f"{path}: file is empty")

    start = 0
    labels: tuple[str, ...] | None = None
    first = rows[0]
    has_header = (options.header is True or
                  (options.header == "auto" and
                   any(not _is_number(tok) for tok in first)))
    if has_header:
        if len(rows) == 1:
            raise ParseError(f"{path}: header but no data rows")
        cells = first[1:] if options.skip_date_column else first
        labels = tuple(tok.strip() for tok in cells)
        start = 1

    width = len(rows[start])
    data = np.empty((len(rows) - start, width - (1 if options.skip_date_column else 0)))
    for i, row in enumerate(rows[start:], start=start):
        if len(row) != width:
            raise ParseError(
                f"{path}: line {i + 1} has {len(row)} cells, expected {width}")
        out = 0
        for j, tok in enumerate(row):
            if options.skip_date_column and j == 0:
                continue
            try:
                data[i - start, out] = float(tok)
            except ValueError:
                raise ParseError(
                    f"{path}: line {i + 1}, column {j + 1}: "
                    f"cannot parse {tok!r} as a number") from None
            out += 1
    if not np.all(np.isfinite(data)):
        bad = np.argwhere(~np.isfinite(data))[0]
        raise ParseError(
            f"{path}: line {int(bad[0]) + start + 1}, column "
            f"{int(bad[1]) + 1}: non-finite value")
    return PanelSeries(values=data, pad=0, labels=labels)


def write_csv(series: PanelSeries, path: str) -> None:
    """Write the full block (pad rows included) with 17-significant-digit
    cells so a round trip through load_csv is bit exact.  pad itself is not
    representable in the file and reloads as 0."""
    labels = series.labels or tuple(
        f"x{j + 1}" for j in range(series.n_vars))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(labels)
        for row in series.values:
            writer.writerow([f"{v:.17g}" for v in row])


def standardize(series: PanelSeries) -> PanelSeries:
    """Center each variable and scale it to unit sample variance (ddof=1),
    using every row including presample ones."""
    mu = series.values.mean(axis=0)
    sd = series.values.std(axis=0, ddof=1)
    for j, s in enumerate(sd):
        if s < 1e-12:
            name = series.labels[j] if series.labels else f"column {j + 1}"
            raise DegenerateColumnError(
                f"{name} has zero sample variance; cannot standardize")
    return PanelSeries(values=(series.values - mu) / sd, pad=series.pad,
                       labels=series.labels)


def build_design(series: PanelSeries, p: int, h: int,
                 align_lags: int | None = None) -> LpDesign:
    """Assemble the horizon-h projection design with p lags.

    Row t carries X[t] = (x_t, x_{t-1}, ..., x_{t-p+1}) and Y[t] = x_{t+h}.
    Targets are drawn from in-sample rows only; presample rows may serve as
    lags.  When the sample cannot supply p-1 back rows for the earliest
    target, leading targets are dropped.  `align_lags` >= p forces the start
    row to the one a model with `align_lags` lags would use, so information
    criteria across lag orders compare fits on an identical sample.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if h < 1:
        raise ValueError("h must be >= 1")
    if align_lags is not None and align_lags < p:
        raise ValueError("align_lags must be >= p")
    back = p if align_lags is None else align_lags
    total = series.values.shape[0]
    if h >= series.n_obs:
        raise InsufficientSampleError(
            f"horizon {h} >= in-sample length {series.n_obs}")
    # first usable current-time row: in-sample, with back-1 rows behind it
    k0 = max(series.pad, back - 1)
    k1 = total - 1 - h
    if k1 - k0 + 1 < 2:
        raise InsufficientSampleError(
            f"only {max(k1 - k0 + 1, 0)} usable rows for p={p}, h={h}")
    idx = np.arange(k0, k1 + 1)
    v = series.values
    X = np.concatenate([v[idx - j] for j in range(p)], axis=1)
    Y = v[idx + h]
    return LpDesign(horizon=h, lags=p, X=X, Y=Y)
