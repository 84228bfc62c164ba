"""Figure rendering for the report path of the CLI.

Each function draws one figure from already-computed data and writes it to a
file next to the delimited output. Rendering happens on the Agg backend, so
it works headless; nothing here recomputes experiments.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dynamics import DrivingForce, TimeSeries
from .embedding import TimeWindow
from .experiments import EtaCell, ExperimentRecord, NoiseCell, QmCell

_DETAIL_SAMPLES = 500


def render_force_figure(
    force: DrivingForce, series: TimeSeries, path: str | Path
) -> None:
    """Series on top, force with both components below (detail window)."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(9, 5.5))
    n = min(_DETAIL_SAMPLES, len(series))
    t_series = np.arange(series.t0, series.t0 + n)
    ax0.plot(t_series, series.values[:n], "k.", markersize=2)
    ax0.set_ylabel("u(t)")
    ax0.set_title("driven series and driving force (detail)")
    n = min(_DETAIL_SAMPLES, len(force))
    t = np.arange(1, n + 1)
    ax1.plot(t, force.values[:n], "g-", label="gamma")
    ax1.plot(t, force.slow[:n], "r--", label="gamma_slow")
    ax1.plot(t, force.fast[:n], "b:", alpha=0.5, label="gamma_fast")
    ax1.set_xlabel("t")
    ax1.set_ylabel("force")
    ax1.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fit_figure(
    series: TimeSeries,
    window: TimeWindow,
    y1: np.ndarray,
    gamma: np.ndarray,
    gamma_slow: np.ndarray,
    aligned_full: np.ndarray,
    aligned_slow: np.ndarray,
    path: str | Path,
) -> None:
    """Three panels: the raw series, the slowest signal, and the alignments."""
    fig, (ax0, ax1, ax2) = plt.subplots(3, 1, figsize=(9, 8))
    t_series = np.arange(series.t0, series.t_end + 1)
    ax0.plot(t_series, series.values, "k.", markersize=1)
    ax0.set_ylabel("u(t)")
    ax0.set_title("time series")

    t = np.arange(window.lo, window.hi + 1)
    ax1.plot(t, y1, "b.", markersize=1)
    ax1.set_ylabel("y_1(t)")
    ax1.set_title("slowest extracted signal")

    n = min(_DETAIL_SAMPLES, len(t))
    ax2.plot(t[:n], gamma[:n], "g-", label="gamma")
    ax2.plot(t[:n], gamma_slow[:n], "r--", label="gamma_slow")
    ax2.plot(t[:n], aligned_full[:n], "b.", markersize=3, label="y_1 aligned to gamma")
    ax2.plot(t[:n], aligned_slow[:n], "c.", markersize=3, label="y_1 aligned to gamma_slow")
    ax2.set_xlabel("t")
    ax2.set_title("alignment detail")
    ax2.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_scan_figure(records: Sequence[ExperimentRecord], path: str | Path) -> None:
    """Correlations with force and slow component plus eta ratio over nu_f."""
    ok = [r for r in records if r.error is None]
    nu = [r.config.nu_f for r in ok]
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(nu, [r.corr_full for r in ok], "g-.", label="|C(y_1, gamma)|")
    ax.plot(nu, [r.corr_slow for r in ok], "r--", label="|C(y_1, gamma_slow)|")
    ax.plot(nu, [r.eta_ratio for r in ok], "b-", label="eta(y_1)/eta(gamma)")
    ax.set_xlabel("nu_f")
    ax.set_ylim(0, 1.2)
    ax.legend(loc="center right", fontsize=8)
    ax.set_title("phase-transition scan")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_qm_figure(cells: Sequence[QmCell], path: str | Path) -> None:
    """Transition frequency against m, one line per q."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for q in sorted({c.q for c in cells}):
        pts = [(c.m, c.nu_pt) for c in cells if c.q == q and c.nu_pt is not None]
        if pts:
            ax.plot(*zip(*pts), marker="o", label=f"q={q:g}")
    ax.set_xlabel("m")
    ax.set_ylabel("nu(P.T.)")
    ax.set_title("phase-transition frequency")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_eta_table_figure(cells: Sequence[EtaCell], path: str | Path) -> None:
    """Heatmap of eta(y_1) over the (m, q) grid."""
    ms = sorted({c.m for c in cells})
    qs = sorted({c.q for c in cells})
    grid = np.full((len(ms), len(qs)), np.nan)
    for c in cells:
        grid[ms.index(c.m), qs.index(c.q)] = c.eta_y1
    fig, ax = plt.subplots(figsize=(6, 4.5))
    im = ax.imshow(grid, aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(qs)), [f"{q:g}" for q in qs])
    ax.set_yticks(range(len(ms)), [str(m) for m in ms])
    ax.set_xlabel("q")
    ax.set_ylabel("m")
    ax.set_title("eta(y_1)")
    for i in range(len(ms)):
        for j in range(len(qs)):
            if not np.isnan(grid[i, j]):
                ax.text(j, i, f"{grid[i, j]:.1f}", ha="center", va="center",
                        color="w", fontsize=7)
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_noise_figure(cells: Sequence[NoiseCell], path: str | Path) -> None:
    """Mean correlation with the slow component against the noise level."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for m in sorted({c.m for c in cells}):
        pts = [(c.noise_percent, c.mean_corr_slow) for c in cells if c.m == m]
        ax.plot(*zip(*pts), marker="o", label=f"m={m}")
    ax.set_xlabel("noise percent")
    ax.set_ylabel("mean |C(y_1, gamma_slow)|")
    ax.set_ylim(0, 1.05)
    ax.set_title("noise sensitivity")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
