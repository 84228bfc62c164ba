"""Delimited-file interchange for series, forces, signals and sweep tables.

One schema per artifact, comma or tab separated, one header row, ``.``
decimal separator, floats written with 17 significant digits so values
round-trip exactly. NaN metrics and absent values are written as empty
cells. Column orders are fixed:

* series:      ``t,value``
* force:       ``t,gamma,gamma_slow,gamma_fast``
* signals:     ``t,y_1,...,y_k``
* aligned:     ``t,gamma,gamma_slow,aligned_full,aligned_slow``
* records:     ``q,m,nu_f,tau,points,degree,k,u0,burn_in,noise_percent,seed,
  svd_cutoff,rng,corr_full,corr_slow,corr_fast,eta_y1,eta_force,eta_slow,
  eta_ratio,eta_y_1..eta_y_K,error``
* qm table:    ``q,m,nu_pt,error``
* eta table:   ``m,q,nu_f,eta_y1,error``
* noise table: ``noise_percent,m,n_seeds,mean_corr_slow``
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dynamics import DrivingForce, TimeSeries
from .embedding import TimeWindow
from .errors import CsvParseError, InvalidParameterError
from .experiments import EtaCell, ExperimentRecord, NoiseCell, QmCell
from .sfa import OutputSignals

_DELIMITERS = {"csv": ",", "tsv": "\t"}


def _delimiter(fmt: str) -> str:
    try:
        return _DELIMITERS[fmt]
    except KeyError:
        raise InvalidParameterError(f"unknown format {fmt!r}, expected csv or tsv") from None


def _fmt(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return format(value, ".17g")


def write_rows(path: str | Path, fmt: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    delim = _delimiter(fmt)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delim, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def read_table(path: str | Path, fmt: str = "csv") -> tuple[list[str], list[list[str]]]:
    """Read a delimited file into (header, raw string rows), validating shape."""
    delim = _delimiter(fmt)
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delim)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError("empty file", str(path), 1) from None
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CsvParseError(
                    f"expected {len(header)} columns, found {len(row)}", str(path), line_no
                )
            rows.append(row)
    if not rows:
        raise CsvParseError("no data rows", str(path), 2)
    return header, rows


def numeric_column(
    table: tuple[list[str], list[list[str]]], name: str, path: str | Path
) -> np.ndarray:
    """Extract one column of a read table as floats, with line-accurate errors."""
    header, rows = table
    try:
        idx = header.index(name)
    except ValueError:
        raise CsvParseError(f"no column named {name!r} in header {header}", str(path), 1) from None
    values = np.empty(len(rows))
    for i, row in enumerate(rows):
        try:
            values[i] = float(row[idx])
        except ValueError:
            raise CsvParseError(
                f"column {name!r}: not a number: {row[idx]!r}", str(path), i + 2
            ) from None
    return values


def _time_column(table, path) -> np.ndarray:
    t = numeric_column(table, "t", path)
    t_int = t.astype(int)
    if np.any(t_int != t) or np.any(np.diff(t_int) != 1):
        raise CsvParseError("column 't' must be consecutive integers", str(path), 2)
    return t_int


def write_series(series: TimeSeries, path: str | Path, fmt: str = "csv") -> None:
    t = range(series.t0, series.t_end + 1)
    write_rows(path, fmt, ["t", "value"], zip(t, series.values))


def read_series(path: str | Path, fmt: str = "csv") -> TimeSeries:
    table = read_table(path, fmt)
    if table[0][:2] != ["t", "value"]:
        raise CsvParseError(f"expected header t,value, got {table[0]}", str(path), 1)
    t = _time_column(table, path)
    return TimeSeries(values=numeric_column(table, "value", path), t0=int(t[0]))


_FORCE_HEADER = ["t", "gamma", "gamma_slow", "gamma_fast"]


def write_force(force: DrivingForce, path: str | Path, fmt: str = "csv") -> None:
    t = range(1, len(force) + 1)
    write_rows(path, fmt, _FORCE_HEADER, zip(t, force.values, force.slow, force.fast))


def read_force(path: str | Path, fmt: str = "csv") -> DrivingForce:
    """Read a force file; the base frequency is not stored and comes back NaN."""
    table = read_table(path, fmt)
    if table[0] != _FORCE_HEADER:
        raise CsvParseError(
            f"expected header {','.join(_FORCE_HEADER)}, got {table[0]}", str(path), 1
        )
    t = _time_column(table, path)
    if t[0] != 1:
        raise CsvParseError("force files must start at t=1", str(path), 2)
    return DrivingForce(
        nu_f=float("nan"),
        values=numeric_column(table, "gamma", path),
        slow=numeric_column(table, "gamma_slow", path),
        fast=numeric_column(table, "gamma_fast", path),
    )


def write_signals(output: OutputSignals, path: str | Path, fmt: str = "csv") -> None:
    header = ["t"] + [f"y_{i}" for i in range(1, output.k + 1)]
    t = range(output.window.lo, output.window.hi + 1)
    write_rows(path, fmt, header, (
        [ti, *row] for ti, row in zip(t, output.signals)
    ))


def write_aligned(
    window: TimeWindow,
    gamma: np.ndarray,
    gamma_slow: np.ndarray,
    aligned_full: np.ndarray,
    aligned_slow: np.ndarray,
    path: str | Path,
    fmt: str = "csv",
) -> None:
    header = ["t", "gamma", "gamma_slow", "aligned_full", "aligned_slow"]
    t = range(window.lo, window.hi + 1)
    write_rows(path, fmt, header, zip(t, gamma, gamma_slow, aligned_full, aligned_slow))


_RECORD_FIXED = [
    "q", "m", "nu_f", "tau", "points", "degree", "k", "u0", "burn_in",
    "noise_percent", "seed", "svd_cutoff", "rng",
    "corr_full", "corr_slow", "corr_fast",
    "eta_y1", "eta_force", "eta_slow", "eta_ratio",
]


def records_header(k_max: int) -> list[str]:
    return _RECORD_FIXED + [f"eta_y_{i}" for i in range(1, k_max + 1)] + ["error"]


def write_records(
    records: Sequence[ExperimentRecord], path: str | Path, fmt: str = "csv"
) -> None:
    """Long-format rows, one per record, in the documented column order."""
    k_max = max((len(r.eta_components) for r in records), default=0)

    def rows():
        for r in records:
            c = r.config
            etas = list(r.eta_components) + [None] * (k_max - len(r.eta_components))
            yield [
                c.q, c.m, c.nu_f, c.tau, c.points, c.degree, c.k, c.u0, c.burn_in,
                c.noise_percent, c.seed, c.svd_cutoff, r.rng,
                r.corr_full, r.corr_slow, r.corr_fast,
                r.eta_y1, r.eta_force, r.eta_slow, r.eta_ratio,
                *etas, r.error,
            ]

    write_rows(path, fmt, records_header(k_max), rows())


def write_qm_table(cells: Sequence[QmCell], path: str | Path, fmt: str = "csv") -> None:
    write_rows(path, fmt, ["q", "m", "nu_pt", "error"], (
        [c.q, c.m, c.nu_pt, c.error] for c in cells
    ))


def write_eta_table(cells: Sequence[EtaCell], path: str | Path, fmt: str = "csv") -> None:
    write_rows(path, fmt, ["m", "q", "nu_f", "eta_y1", "error"], (
        [c.m, c.q, c.nu_f, c.eta_y1, c.error] for c in cells
    ))


def write_noise_table(cells: Sequence[NoiseCell], path: str | Path, fmt: str = "csv") -> None:
    write_rows(path, fmt, ["noise_percent", "m", "n_seeds", "mean_corr_slow"], (
        [c.noise_percent, c.m, len(c.seeds), c.mean_corr_slow] for c in cells
    ))
