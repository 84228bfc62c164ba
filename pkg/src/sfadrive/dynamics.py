"""Driving forces, driven logistic-map series, and additive Gaussian noise.

The driving force is a half-sum of two sines with angular rates
``SLOW_RATE * nu_f`` and ``FAST_RATE * nu_f`` sampled at integer times
t = 1..T. The fast rate is 9.4 times the slow one, so the slow sine is
visible only as the envelope of the composite force. The force modulates
the control parameter of a logistic map, r(t) = 4.0 - q + 0.1 * gamma(t),
which keeps the iteration inside [0, 1] for q in [0.1, 3.9].

All generation is pure and deterministically seeded; returned arrays are
frozen (read-only) so values can be shared across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NumericalDomainError

#: Angular rate per unit nu_f of the slow and fast force components.
SLOW_RATE = 0.0005
FAST_RATE = 0.0047

#: Name of the pseudo-random bit generator used for noise, recorded in outputs.
RNG_ALGORITHM = "pcg64"

Q_MIN = 0.1
Q_MAX = 3.9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DrivingForce:
    """Composite driving force gamma(t) with its slow and fast constituents.

    ``values[i]`` is gamma at time t = i + 1; the identity
    ``values == (slow + fast) / 2`` holds to exact floating equality.
    """

    nu_f: float
    values: np.ndarray
    slow: np.ndarray
    fast: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def component(self, name: str) -> np.ndarray:
        """Return one constituent: ``"full"``, ``"slow"`` or ``"fast"``."""
        try:
            return {"full": self.values, "slow": self.slow, "fast": self.fast}[name]
        except KeyError:
            raise InvalidParameterError(f"unknown force component {name!r}") from None


@dataclass(frozen=True)
class LogisticParams:
    """Parameters of the driven logistic map.

    ``q`` shifts the control parameter r(t) = 4.0 - q + 0.1 * gamma(t) and
    thereby the predictability of the iteration: below 0.33 the map is fully
    chaotic, between 0.33 and 0.53 chaotic and predictable episodes mix, and
    above 0.53 it is long-term predictable.
    """

    q: float
    initial_value: float = 0.3
    burn_in: int = 0

    def __post_init__(self) -> None:
        if not Q_MIN <= self.q <= Q_MAX:
            raise InvalidParameterError(f"q must lie in [{Q_MIN}, {Q_MAX}], got {self.q}")
        if not 0.0 < self.initial_value < 1.0:
            raise InvalidParameterError(
                f"initial value must lie strictly inside (0, 1), got {self.initial_value}"
            )
        if self.burn_in < 0:
            raise InvalidParameterError(f"burn_in must be >= 0, got {self.burn_in}")


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar sequence with unit time step.

    ``values[i]`` is the sample at absolute time ``t0 + i``; ``t0`` stays at 1
    unless a burn-in was discarded.
    """

    values: np.ndarray
    t0: int = 1

    def __len__(self) -> int:
        return len(self.values)

    @property
    def t_end(self) -> int:
        return self.t0 + len(self.values) - 1


def make_driving_force(nu_f: float, points: int) -> DrivingForce:
    """Sample the two-component driving force at t = 1..points.

    gamma(t) = (sin(SLOW_RATE * nu_f * t) + sin(FAST_RATE * nu_f * t)) / 2,
    so gamma stays inside [-1, 1] and both constituents are kept for
    component-wise comparisons.
    """
    if nu_f <= 0:
        raise InvalidParameterError(f"nu_f must be positive, got {nu_f}")
    if points < 2:
        raise InvalidParameterError(f"points must be >= 2, got {points}")
    t = np.arange(1, points + 1, dtype=float)
    slow = np.sin(SLOW_RATE * nu_f * t)
    fast = np.sin(FAST_RATE * nu_f * t)
    values = 0.5 * (slow + fast)
    return DrivingForce(float(nu_f), _frozen(values), _frozen(slow), _frozen(fast))


def logistic_series(force: DrivingForce, params: LogisticParams) -> TimeSeries:
    """Iterate the driven logistic map u(t+1) = r(t) u(t) (1 - u(t)).

    The first sample is ``params.initial_value`` at t = 1; the first
    ``params.burn_in`` samples are discarded afterwards, so the returned
    series starts at absolute time ``burn_in + 1`` and the force array stays
    aligned with it by absolute time index.
    """
    T = len(force)
    if T < params.burn_in + 2:
        raise InvalidParameterError(
            f"force length {T} too short for burn_in={params.burn_in}"
        )
    base = 4.0 - params.q
    gamma = force.values
    u = np.empty(T)
    u[0] = params.initial_value
    x = params.initial_value
    for t in range(T - 1):
        x = (base + 0.1 * gamma[t]) * x * (1.0 - x)
        # r(t) in (0, 4] maps [0, 1] onto itself; leaving it means bad input.
        if not 0.0 <= x <= 1.0:
            raise NumericalDomainError(
                f"logistic iterate left [0, 1] at t={t + 2}: u={x!r}"
            )
        u[t + 1] = x
    return TimeSeries(_frozen(u[params.burn_in:]), t0=params.burn_in + 1)


def add_noise(
    series: TimeSeries,
    percent: float,
    seed: int,
    reference: str = "interval",
) -> TimeSeries:
    """Add i.i.d. Gaussian noise of relative strength ``percent`` to a series.

    With ``reference="interval"`` the noise standard deviation is
    ``percent / 100`` in absolute units, i.e. percent of the unit interval
    that logistic-map output lives on. With ``reference="std"`` it is
    ``percent / 100`` times the standard deviation of the clean series.
    ``percent=0`` returns a bit-identical copy. Deterministic given ``seed``
    (PCG64, see :data:`RNG_ALGORITHM`).
    """
    if percent < 0:
        raise InvalidParameterError(f"noise percent must be >= 0, got {percent}")
    if seed < 0:
        raise InvalidParameterError(f"seed must be >= 0, got {seed}")
    if reference not in ("interval", "std"):
        raise InvalidParameterError(f"unknown noise reference {reference!r}")
    if percent == 0:
        return TimeSeries(_frozen(series.values.copy()), t0=series.t0)
    scale = 1.0 if reference == "interval" else float(np.std(series.values))
    sigma = percent / 100.0 * scale
    rng = np.random.default_rng(seed)
    noisy = series.values + rng.normal(0.0, sigma, size=len(series.values))
    return TimeSeries(_frozen(noisy), t0=series.t0)
