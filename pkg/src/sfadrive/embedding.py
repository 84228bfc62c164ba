"""Centered delay embedding with explicit valid-time bookkeeping.

A scalar series u(t) becomes rows
``x(t) = [u(t - tau*(m-1)/2), ..., u(t + tau*(m-1)/2)]`` for odd dimension m.
For even m the index pattern is shifted by floor(tau/2) so the used samples
stay centered at t up to the unavoidable half step. The range of center
times t that have all their samples available is carried around explicitly
as :class:`TimeWindow` so downstream comparisons of estimated and true
driving forces use exactly matching samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import DrivingForce, TimeSeries
from .errors import InsufficientDataError, InvalidParameterError


@dataclass(frozen=True)
class TimeWindow:
    """Inclusive range [lo, hi] of absolute time indices."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise InvalidParameterError(f"empty time window [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def to_slice(self, t0: int = 1) -> slice:
        """Slice selecting this window from an array whose index 0 is time t0."""
        return slice(self.lo - t0, self.hi - t0 + 1)


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Materialized delay-embedding rows plus their valid center times."""

    m: int
    tau: int
    rows: np.ndarray
    window: TimeWindow

    def __len__(self) -> int:
        return len(self.rows)


def left_span(m: int, tau: int) -> int:
    """Samples needed before the center time (after it: tau*(m-1) - left_span)."""
    return (tau * (m - 1) + 1) // 2


def embed(series: TimeSeries, m: int, tau: int = 1) -> EmbeddingMatrix:
    """Build the centered delay embedding of a series.

    The row at center time t collects the m samples
    ``u(t - left), u(t - left + tau), ..., u(t - left + tau*(m-1))`` with
    ``left = left_span(m, tau)``; for odd m this is the symmetric pattern
    around t. The returned matrix has ``len(series) - tau*(m-1)`` rows and its
    window records the absolute center times of the first and last row.
    """
    if m < 1:
        raise InvalidParameterError(f"embedding dimension m must be >= 1, got {m}")
    if tau < 1:
        raise InvalidParameterError(f"delay tau must be >= 1, got {tau}")
    T = len(series)
    span = tau * (m - 1)
    if T < span + 2:
        raise InsufficientDataError(
            f"series of length {T} too short for m={m}, tau={tau} "
            f"(needs at least {span + 2} samples)"
        )
    n = T - span
    u = series.values
    rows = np.empty((n, m))
    for j in range(m):
        rows[:, j] = u[tau * j : tau * j + n]
    left = left_span(m, tau)
    window = TimeWindow(series.t0 + left, series.t0 + left + n - 1)
    rows.setflags(write=False)
    return EmbeddingMatrix(m=m, tau=tau, rows=rows, window=window)


def window_restrict(
    force: DrivingForce, window: TimeWindow, component: str = "full"
) -> np.ndarray:
    """Restrict a driving-force component to a window of absolute times.

    Force arrays start at t = 1, so this pairs force samples one-for-one with
    embedding rows (and hence with SFA output signals) over the same window.
    """
    if window.lo < 1 or window.hi > len(force):
        raise InvalidParameterError(
            f"window [{window.lo}, {window.hi}] outside force range [1, {len(force)}]"
        )
    return force.component(component)[window.to_slice(t0=1)]
