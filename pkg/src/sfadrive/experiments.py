"""Experiment orchestration: single runs, transition scans, sweeps, tables.

A single run generates the driving force and the driven logistic series,
optionally adds noise, embeds, fits SFA, and compares the slowest output
signal with the force and each of its components over the exactly matching
time window. Scans repeat that over a frequency grid and report the phase
transition frequency: the lowest grid frequency at which the slowest signal
correlates more strongly with the slow force component than with the full
force.

Sweep cells are independent pure computations; each derives its own noise
seed deterministically from the base seed and the cell coordinates, and
results are assembled in fixed cell order, so outputs are byte-reproducible.
Failures inside a sweep are recorded as error cells instead of aborting the
remaining grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import sfa
from .dynamics import (
    RNG_ALGORITHM,
    LogisticParams,
    add_noise,
    logistic_series,
    make_driving_force,
)
from .embedding import embed, window_restrict
from .errors import InvalidParameterError, SfaDriveError
from .metrics import correlation, eta

#: Frequency grid used by scans when none is given: integers 10..80.
DEFAULT_NU_GRID = tuple(float(v) for v in range(10, 81))

#: Grid of the slowness table: embedding dimensions (rows) and q values
#: (columns); its unstated base frequency is 40, the value at which the
#: composite force scores eta = 127 and its slow component 19.1.
ETA_TABLE_M = (5, 10, 15, 20, 30)
ETA_TABLE_Q = (0.1, 0.3, 0.5, 0.6, 0.7)
ETA_TABLE_NU_F = 40.0


@dataclass(frozen=True)
class RunConfig:
    """Parameters of one experiment run.

    Defaults reproduce the reference protocol: 6000 points, embedding
    dimension 19 with delay 1, monomials of degree 2, and the ten slowest
    output signals.
    """

    nu_f: float = 20.0
    q: float = 0.1
    m: int = 19
    tau: int = 1
    points: int = 6000
    degree: int = 2
    k: int = 10
    u0: float = 0.3
    burn_in: int = 0
    noise_percent: float = 0.0
    seed: int = 0
    svd_cutoff: float = sfa.DEFAULT_SVD_CUTOFF


@dataclass(frozen=True)
class ExperimentRecord:
    """Metrics of one run; ``error`` is set (and metrics are NaN) on failure."""

    config: RunConfig
    corr_full: float
    corr_slow: float
    corr_fast: float
    eta_y1: float
    eta_force: float
    eta_slow: float
    eta_ratio: float
    eta_components: tuple[float, ...]
    rng: str = RNG_ALGORITHM
    error: str | None = None


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a frequency scan: transition frequency plus per-nu records."""

    nu_pt: float | None
    records: tuple[ExperimentRecord, ...]


@dataclass(frozen=True)
class QmCell:
    """One (q, m) cell of a transition-frequency sweep.

    ``records`` holds the per-frequency records of the cell's scan (the
    scanned prefix only when the scan early-stopped).
    """

    q: float
    m: int
    nu_pt: float | None
    error: str | None = None
    records: tuple[ExperimentRecord, ...] = ()


@dataclass(frozen=True)
class EtaCell:
    """One (m, q) cell of the slowness table."""

    m: int
    q: float
    nu_f: float
    eta_y1: float
    error: str | None = None


@dataclass(frozen=True)
class NoiseCell:
    """Aggregate of one noise level: mean |C(y_1, gamma_slow)| across seeds."""

    noise_percent: float
    m: int
    mean_corr_slow: float
    corr_values: tuple[float, ...]
    seeds: tuple[int, ...]


def derive_seed(base_seed: int, *coords: int) -> int:
    """Deterministic per-cell seed from a base seed and cell coordinates."""
    ss = np.random.SeedSequence([int(base_seed), *[int(c) for c in coords]])
    return int(ss.generate_state(1, np.uint64)[0])


def _error_record(config: RunConfig, exc: SfaDriveError) -> ExperimentRecord:
    nan = float("nan")
    return ExperimentRecord(
        config=config,
        corr_full=nan,
        corr_slow=nan,
        corr_fast=nan,
        eta_y1=nan,
        eta_force=nan,
        eta_slow=nan,
        eta_ratio=nan,
        eta_components=(),
        error=f"{type(exc).__name__}: {exc}",
    )


def run_single(config: RunConfig) -> ExperimentRecord:
    """Run the full pipeline once and collect all comparison metrics."""
    force = make_driving_force(config.nu_f, config.points)
    params = LogisticParams(q=config.q, initial_value=config.u0, burn_in=config.burn_in)
    series = logistic_series(force, params)
    if config.noise_percent > 0:
        series = add_noise(series, config.noise_percent, config.seed)
    rows = embed(series, config.m, config.tau)
    _, output = sfa.fit(rows, degree=config.degree, k=config.k, svd_cutoff=config.svd_cutoff)

    gamma = window_restrict(force, rows.window, "full")
    gamma_slow = window_restrict(force, rows.window, "slow")
    gamma_fast = window_restrict(force, rows.window, "fast")
    y1 = output.y(1)

    eta_y1 = eta(y1)
    eta_force = eta(gamma)
    return ExperimentRecord(
        config=config,
        corr_full=abs(correlation(y1, gamma)),
        corr_slow=abs(correlation(y1, gamma_slow)),
        corr_fast=abs(correlation(y1, gamma_fast)),
        eta_y1=eta_y1,
        eta_force=eta_force,
        eta_slow=eta(gamma_slow),
        eta_ratio=eta_y1 / eta_force,
        eta_components=tuple(eta(output.y(i)) for i in range(1, output.k + 1)),
    )


def _check_grid(nu_grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(v) for v in nu_grid)
    if not grid:
        raise InvalidParameterError("frequency grid must not be empty")
    if any(v <= 0 for v in grid):
        raise InvalidParameterError("frequencies must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameterError("frequency grid must be strictly ascending")
    return grid


def phase_transition_scan(
    base: RunConfig,
    nu_grid: Sequence[float] = DEFAULT_NU_GRID,
    early_stop: bool = False,
) -> ScanResult:
    """Scan a frequency grid for the phase transition.

    The transition frequency is the lowest grid value whose run satisfies
    |C(y_1, gamma)| < |C(y_1, gamma_slow)|; ``nu_pt`` is None when no grid
    point qualifies. With ``early_stop`` the scan stops at the transition and
    the records cover only the scanned prefix of the grid; failed runs are
    kept as error records and never qualify.
    """
    grid = _check_grid(nu_grid)
    records: list[ExperimentRecord] = []
    nu_pt = None
    for nu in grid:
        config = replace(base, nu_f=nu)
        try:
            record = run_single(config)
        except SfaDriveError as exc:
            record = _error_record(config, exc)
        records.append(record)
        if nu_pt is None and record.error is None and record.corr_full < record.corr_slow:
            nu_pt = nu
            if early_stop:
                break
    return ScanResult(nu_pt=nu_pt, records=tuple(records))


def sweep_qm(
    q_values: Sequence[float],
    m_values: Sequence[int],
    base: RunConfig = RunConfig(),
    nu_grid: Sequence[float] = DEFAULT_NU_GRID,
    early_stop: bool = True,
) -> list[QmCell]:
    """Transition frequency for every (q, m) cell, in fixed row-major order.

    Cells run one :func:`phase_transition_scan` each (early-stopped by
    default, which does not change the reported transition) with a seed
    derived from the base seed and the cell coordinates. A failing cell
    becomes an error cell; the sweep always completes.
    """
    if not q_values or not m_values:
        raise InvalidParameterError("q and m grids must not be empty")
    cells: list[QmCell] = []
    for qi, q in enumerate(q_values):
        for mi, m in enumerate(m_values):
            config = replace(base, q=float(q), m=int(m), seed=derive_seed(base.seed, qi, mi))
            try:
                scan = phase_transition_scan(config, nu_grid, early_stop=early_stop)
                cells.append(
                    QmCell(q=float(q), m=int(m), nu_pt=scan.nu_pt, records=scan.records)
                )
            except SfaDriveError as exc:
                cells.append(
                    QmCell(q=float(q), m=int(m), nu_pt=None, error=f"{type(exc).__name__}: {exc}")
                )
    return cells


def eta_table(
    m_values: Sequence[int] = ETA_TABLE_M,
    q_values: Sequence[float] = ETA_TABLE_Q,
    base: RunConfig = RunConfig(),
    nu_f: float = ETA_TABLE_NU_F,
) -> list[EtaCell]:
    """Slowness of the slowest output signal per (m, q) cell at fixed nu_f."""
    if not q_values or not m_values:
        raise InvalidParameterError("q and m grids must not be empty")
    cells: list[EtaCell] = []
    for mi, m in enumerate(m_values):
        for qi, q in enumerate(q_values):
            config = replace(
                base, nu_f=float(nu_f), q=float(q), m=int(m), k=1,
                seed=derive_seed(base.seed, mi, qi),
            )
            try:
                record = run_single(config)
                cells.append(EtaCell(m=int(m), q=float(q), nu_f=float(nu_f), eta_y1=record.eta_y1))
            except SfaDriveError as exc:
                cells.append(
                    EtaCell(
                        m=int(m), q=float(q), nu_f=float(nu_f), eta_y1=float("nan"),
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
    return cells


def noise_study(
    config: RunConfig,
    percents: Sequence[float],
    seeds: Sequence[int],
) -> tuple[list[NoiseCell], list[ExperimentRecord]]:
    """Mean |C(y_1, gamma_slow)| per noise level, averaged across seeds.

    Returns the aggregate cells in the order of ``percents`` together with
    every underlying per-seed record (noise levels vary, everything else is
    taken from ``config``).
    """
    if not percents or not seeds:
        raise InvalidParameterError("percents and seeds must not be empty")
    cells: list[NoiseCell] = []
    records: list[ExperimentRecord] = []
    for percent in percents:
        corrs: list[float] = []
        for seed in seeds:
            run_cfg = replace(config, noise_percent=float(percent), seed=int(seed))
            record = run_single(run_cfg)
            records.append(record)
            corrs.append(record.corr_slow)
        cells.append(
            NoiseCell(
                noise_percent=float(percent),
                m=config.m,
                mean_corr_slow=float(np.mean(corrs)),
                corr_values=tuple(corrs),
                seeds=tuple(int(s) for s in seeds),
            )
        )
    return cells, records


def force_only_etas(nu_f: float, points: int) -> tuple[float, float, float]:
    """eta of the force and both components at (nu_f, points), no map involved."""
    force = make_driving_force(nu_f, points)
    return eta(force.values), eta(force.slow), eta(force.fast)


def winner(record: ExperimentRecord) -> str:
    """Which target the slowest signal tracks better: "slow" or "full"."""
    if record.error is not None or math.isnan(record.corr_full):
        raise InvalidParameterError("cannot rank an error record")
    return "slow" if record.corr_slow > record.corr_full else "full"
