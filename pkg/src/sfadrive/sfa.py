"""Slow feature analysis on delay-embedded series.

The pipeline follows the classic four steps: expand the input rows with
monomials, sphere the expanded signal to zero mean and unit covariance,
form the covariance of the discrete time derivative of the sphered signal,
and project onto the eigenvectors belonging to its smallest eigenvalues.

Sphering is computed from a singular value decomposition of the centered
expanded data. Singular directions with sigma_i < svd_cutoff * sigma_max are
discarded before inverting, which is what keeps the procedure stable when
redundant monomials make the expanded covariance (near) singular, a routine
occurrence at larger embedding dimensions on noise-free data.

Conventions, fixed so that results and serialized models are reproducible:

* covariance of the sphered signal uses the plain temporal mean (divisor L);
* the derivative is the difference of successive samples, its covariance is
  the raw second moment over the L - 1 difference samples (no mean removal);
* monomial order is linear terms first, then the upper triangle of the
  quadratic terms row by row: x1, ..., xm, x1*x1, x1*x2, ..., xm*xm;
* the sign of each output signal is whatever the eigensolver returns, so
  comparisons against reference signals should use absolute correlations.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embedding import EmbeddingMatrix, TimeWindow
from .errors import (
    InsufficientDataError,
    InvalidParameterError,
    NumericalDomainError,
    RankDeficiencyError,
)

#: Relative singular-value threshold below which directions are discarded.
DEFAULT_SVD_CUTOFF = 1e-5

#: Guard against accidentally huge quadratic expansions (D x D work matrices).
MAX_EXPANDED_DIM = 4096

#: Two smallest derivative eigenvalues closer than this (relative to the
#: trace) make the slowest direction an arbitrary vector in their span.
DEGENERATE_GAP = 1e-12


def pair_is_degenerate(eigenvalues: np.ndarray) -> bool:
    """Whether the two smallest eigenvalues are too close to separate.

    Closer than ``DEGENERATE_GAP`` times the trace, any vector in their span
    is an equally valid slowest direction, so comparisons against such a
    model must treat the pair as a subspace.
    """
    eigenvalues = np.asarray(eigenvalues, float)
    if len(eigenvalues) < 2:
        return False
    gap = eigenvalues[1] - eigenvalues[0]
    return bool(gap < DEGENERATE_GAP * float(eigenvalues.sum()))


def expanded_dim(m: int, degree: int) -> int:
    """Number of monomials of degree <= ``degree`` (without constant term)."""
    if degree == 1:
        return m
    if degree == 2:
        return m + m * (m + 1) // 2
    raise InvalidParameterError(f"expansion degree must be 1 or 2, got {degree}")


@dataclass(frozen=True)
class ExpansionSpec:
    """Monomial expansion applied to embedding rows."""

    degree: int
    input_dim: int

    def __post_init__(self) -> None:
        expanded_dim(self.input_dim, self.degree)  # validates degree
        if self.input_dim < 1:
            raise InvalidParameterError(f"input_dim must be >= 1, got {self.input_dim}")

    @property
    def output_dim(self) -> int:
        return expanded_dim(self.input_dim, self.degree)


@dataclass(frozen=True)
class SfaModel:
    """Fitted transform: expansion, centering, sphering and projection.

    ``whitening_map`` has shape (retained_rank, output_dim) and maps centered
    expanded rows to sphered coordinates; ``projections`` has shape
    (retained_rank, k) with orthonormal columns; ``delta_values`` are the k
    smallest eigenvalues of the derivative covariance in ascending order and
    equal the mean squared one-step difference of the output signals.
    ``degenerate_pair`` marks models whose two smallest eigenvalues are so
    close that any vector in their span is an equally valid slowest direction.

    Fitting is single-threaded and deterministic; the fitted model is
    immutable (frozen fields, read-only arrays), so concurrent
    :func:`apply` calls may share it freely.
    """

    expansion: ExpansionSpec
    mean: np.ndarray
    whitening_map: np.ndarray
    retained_rank: int
    projections: np.ndarray
    delta_values: np.ndarray
    svd_cutoff: float
    degenerate_pair: bool

    @property
    def k(self) -> int:
        return self.projections.shape[1]


@dataclass(frozen=True)
class OutputSignals:
    """SFA output signals over the valid window of the embedding.

    ``signals[:, i]`` is y_{i+1}; on training data each column has zero mean,
    unit variance and is uncorrelated with the other columns.
    """

    signals: np.ndarray
    delta_values: np.ndarray
    window: TimeWindow

    @property
    def k(self) -> int:
        return self.signals.shape[1]

    def y(self, i: int) -> np.ndarray:
        """Output signal y_i, 1-based as in y_1 for the slowest."""
        return self.signals[:, i - 1]


def _as_rows(rows: EmbeddingMatrix | np.ndarray) -> np.ndarray:
    data = rows.rows if isinstance(rows, EmbeddingMatrix) else np.asarray(rows, float)
    if data.ndim != 2:
        raise InvalidParameterError(f"expected 2-d row data, got shape {data.shape}")
    return data


def expand(rows: EmbeddingMatrix | np.ndarray, degree: int) -> np.ndarray:
    """Monomial expansion of embedding rows.

    Degree 1 returns a copy of the rows; degree 2 appends all quadratic
    monomials in the fixed order x1*x1, x1*x2, ..., x1*xm, x2*x2, ..., xm*xm.
    """
    data = _as_rows(rows)
    m = data.shape[1]
    D = expanded_dim(m, degree)
    if D > MAX_EXPANDED_DIM:
        raise InvalidParameterError(
            f"expansion of dimension {m} yields {D} monomials, above the "
            f"supported maximum of {MAX_EXPANDED_DIM}"
        )
    if degree == 1:
        return data.copy()
    blocks = [data]
    for i in range(m):
        blocks.append(data[:, i : i + 1] * data[:, i:])
    return np.concatenate(blocks, axis=1)


def fit(
    rows: EmbeddingMatrix,
    degree: int = 2,
    k: int = 1,
    svd_cutoff: float = DEFAULT_SVD_CUTOFF,
) -> tuple[SfaModel, OutputSignals]:
    """Fit SFA to embedding rows and return the model with its training output.

    Parameters
    ----------
    rows : EmbeddingMatrix
        Training data, one embedding vector per row.
    degree : int
        Monomial expansion degree, 1 or 2.
    k : int
        Number of slowest output signals to extract.
    svd_cutoff : float
        Relative threshold: singular directions of the centered expanded data
        with sigma_i < svd_cutoff * sigma_max are dropped before sphering.

    Raises
    ------
    RankDeficiencyError
        If fewer than k directions survive the cutoff.
    NumericalDomainError
        If the input contains non-finite values.
    """
    if not isinstance(rows, EmbeddingMatrix):
        raise InvalidParameterError("fit expects an EmbeddingMatrix (it carries the valid window)")
    data = _as_rows(rows)
    if not np.isfinite(data).all():
        raise NumericalDomainError("embedding rows contain non-finite values")
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    if not 0.0 <= svd_cutoff < 1.0:
        raise InvalidParameterError(f"svd_cutoff must lie in [0, 1), got {svd_cutoff}")

    spec = ExpansionSpec(degree=degree, input_dim=data.shape[1])
    H = expand(data, degree)
    L, D = H.shape
    if L < D + 2:
        warnings.warn(
            f"only {L} rows for {D} expanded dimensions; the estimate of the "
            "derivative covariance will be poor",
            stacklevel=2,
        )
    mean = H.mean(axis=0)
    Hc = H - mean

    _, sigma, Vt = np.linalg.svd(Hc, full_matrices=False)
    if sigma.size == 0 or sigma[0] <= 0.0:
        d_prime = 0
    else:
        d_prime = int(np.count_nonzero(sigma >= svd_cutoff * sigma[0]))
    if d_prime < k:
        raise RankDeficiencyError(
            f"only {d_prime} directions survive svd_cutoff={svd_cutoff:g}, "
            f"cannot extract k={k} signals"
        )

    # Scale so the sphered training data has unit covariance with divisor L.
    whitening = (np.sqrt(L) / sigma[:d_prime])[:, None] * Vt[:d_prime]
    sphered = Hc @ whitening.T
    diffs = np.diff(sphered, axis=0)
    deriv_cov = diffs.T @ diffs / (L - 1)

    eigenvalues, eigenvectors = np.linalg.eigh(deriv_cov)
    degenerate = pair_is_degenerate(eigenvalues)
    projections = eigenvectors[:, :k]
    delta_values = np.maximum(eigenvalues[:k], 0.0)

    signals = sphered @ projections
    for a in (mean, whitening, projections, delta_values, signals):
        a.setflags(write=False)
    model = SfaModel(
        expansion=spec,
        mean=mean,
        whitening_map=whitening,
        retained_rank=d_prime,
        projections=projections,
        delta_values=delta_values,
        svd_cutoff=float(svd_cutoff),
        degenerate_pair=degenerate,
    )
    output = OutputSignals(signals=signals, delta_values=delta_values, window=rows.window)
    return model, output


def apply(model: SfaModel, rows: EmbeddingMatrix) -> OutputSignals:
    """Apply a fitted model to (possibly new) embedding rows.

    No re-normalization is performed, so output signals derived from test
    data are only approximately zero mean and unit variance.
    """
    if not isinstance(rows, EmbeddingMatrix):
        raise InvalidParameterError("apply expects an EmbeddingMatrix (it carries the valid window)")
    data = _as_rows(rows)
    if data.shape[1] != model.expansion.input_dim:
        raise InvalidParameterError(
            f"rows have dimension {data.shape[1]}, model expects "
            f"{model.expansion.input_dim}"
        )
    H = expand(data, model.expansion.degree)
    signals = (H - model.mean) @ model.whitening_map.T @ model.projections
    signals.setflags(write=False)
    return OutputSignals(
        signals=signals, delta_values=model.delta_values, window=rows.window
    )


def delta(signal: np.ndarray) -> float:
    """Mean squared one-step difference of a signal, the SFA slowness objective."""
    y = np.asarray(signal, float)
    if y.ndim != 1:
        raise InvalidParameterError(f"expected 1-d signal, got shape {y.shape}")
    if len(y) < 2:
        raise InsufficientDataError("delta needs at least 2 samples")
    d = np.diff(y)
    return float(d @ d / len(d))


_MODEL_FORMAT = "sfadrive-model"
_MODEL_VERSION = 1


def save_model(model: SfaModel, path: str | Path) -> None:
    """Serialize a model to a self-describing JSON file.

    Floats are written in shortest round-trip form, so a load followed by a
    save reproduces the file and the arrays bit-exactly.
    """
    doc = {
        "format": _MODEL_FORMAT,
        "version": _MODEL_VERSION,
        "degree": model.expansion.degree,
        "input_dim": model.expansion.input_dim,
        "expanded_dim": model.expansion.output_dim,
        "retained_rank": model.retained_rank,
        "svd_cutoff": model.svd_cutoff,
        "degenerate_pair": model.degenerate_pair,
        "mean": model.mean.tolist(),
        "whitening_map": model.whitening_map.tolist(),
        "projections": model.projections.tolist(),
        "delta_values": model.delta_values.tolist(),
    }
    Path(path).write_text(json.dumps(doc, indent=1), encoding="utf-8")


def load_model(path: str | Path) -> SfaModel:
    """Load a model serialized by :func:`save_model`."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != _MODEL_FORMAT:
        raise InvalidParameterError(f"{path}: not a serialized SFA model")
    if doc.get("version") != _MODEL_VERSION:
        raise InvalidParameterError(f"{path}: unsupported model version {doc.get('version')}")
    spec = ExpansionSpec(degree=doc["degree"], input_dim=doc["input_dim"])
    if spec.output_dim != doc["expanded_dim"]:
        raise InvalidParameterError(f"{path}: inconsistent expansion dimensions")
    arrays = {
        "mean": np.array(doc["mean"], float),
        "whitening_map": np.array(doc["whitening_map"], float),
        "projections": np.array(doc["projections"], float),
        "delta_values": np.array(doc["delta_values"], float),
    }
    for a in arrays.values():
        a.setflags(write=False)
    return SfaModel(
        expansion=spec,
        retained_rank=int(doc["retained_rank"]),
        svd_cutoff=float(doc["svd_cutoff"]),
        degenerate_pair=bool(doc["degenerate_pair"]),
        **arrays,
    )
