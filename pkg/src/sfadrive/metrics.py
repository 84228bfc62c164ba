"""Slowness indicator, correlation, and least-squares signal alignment.

The slowness indicator eta rescales the mean squared derivative so that a
pure sine over the analyzed window scores its number of oscillations:
eta(y) = (T / 2 pi) * sqrt(delta(y)) / std(y) with T the sample count of the
window (unit time step). Both eta and the Pearson correlation are invariant
under affine rescaling of their inputs, which is what makes them usable on
SFA outputs whose scale, offset and sign are arbitrary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSignalError, InsufficientDataError, InvalidParameterError
from .sfa import delta


@dataclass(frozen=True)
class Alignment:
    """Affine map a*y + b minimizing the mean squared error to a target."""

    scale: float
    offset: float
    mse: float


def _check_signal(y: np.ndarray, name: str) -> np.ndarray:
    y = np.asarray(y, float)
    if y.ndim != 1:
        raise InvalidParameterError(f"{name} must be 1-d, got shape {y.shape}")
    if len(y) < 2:
        raise InsufficientDataError(f"{name} needs at least 2 samples")
    return y


def eta(signal: np.ndarray) -> float:
    """Slowness indicator of a signal over its own window.

    Equals the number of oscillations for a pure sine spanning the window;
    low values mean slow signals. Invariant under a*y + b for a != 0.
    """
    y = _check_signal(signal, "signal")
    centered = y - y.mean()
    var = float(centered @ centered / len(y))
    if var == 0.0:
        raise DegenerateSignalError("eta is undefined for a constant signal")
    return len(y) / (2.0 * np.pi) * np.sqrt(delta(y)) / np.sqrt(var)


def correlation(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation coefficient of two equal-length sequences."""
    x = _check_signal(x, "x")
    y = _check_signal(y, "y")
    if len(x) != len(y):
        raise InvalidParameterError(f"length mismatch: {len(x)} vs {len(y)}")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = float(xc @ xc) * float(yc @ yc)
    if denom == 0.0:
        raise DegenerateSignalError("correlation is undefined for a constant input")
    return float(xc @ yc / np.sqrt(denom))


def align(y: np.ndarray, target: np.ndarray) -> tuple[Alignment, np.ndarray]:
    """Least-squares alignment of y to a target signal.

    Returns the closed-form optimum a = cov(y, target) / var(y),
    b = mean(target) - a * mean(y), together with the aligned sequence
    a*y + b. Resolves the arbitrary scale, offset and sign of SFA outputs.
    """
    y = _check_signal(y, "y")
    target = _check_signal(target, "target")
    if len(y) != len(target):
        raise InvalidParameterError(f"length mismatch: {len(y)} vs {len(target)}")
    yc = y - y.mean()
    var_y = float(yc @ yc / len(y))
    if var_y == 0.0:
        raise DegenerateSignalError("cannot align a constant signal")
    cov = float(yc @ (target - target.mean()) / len(y))
    a = cov / var_y
    b = float(target.mean()) - a * float(y.mean())
    aligned = a * y + b
    residual = aligned - target
    mse = float(residual @ residual / len(y))
    return Alignment(scale=a, offset=b, mse=mse), aligned
