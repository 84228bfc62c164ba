"""Driving-force detection in nonstationary time series via slow feature analysis.

The package generates driven chaotic logistic-map series, extracts their
slowly varying driving forces with SFA on centered delay embeddings, and
orchestrates the parameter sweeps that locate the phase transition between
recovering the full composite force and recovering only its slower
subcomponent.
"""

from .dynamics import (
    FAST_RATE,
    RNG_ALGORITHM,
    SLOW_RATE,
    DrivingForce,
    LogisticParams,
    TimeSeries,
    add_noise,
    logistic_series,
    make_driving_force,
)
from .embedding import EmbeddingMatrix, TimeWindow, embed, window_restrict
from .errors import (
    CsvParseError,
    DegenerateSignalError,
    InsufficientDataError,
    InvalidParameterError,
    NumericalDomainError,
    RankDeficiencyError,
    SfaDriveError,
)
from .experiments import (
    DEFAULT_NU_GRID,
    ETA_TABLE_M,
    ETA_TABLE_NU_F,
    ETA_TABLE_Q,
    EtaCell,
    ExperimentRecord,
    NoiseCell,
    QmCell,
    RunConfig,
    ScanResult,
    derive_seed,
    eta_table,
    noise_study,
    phase_transition_scan,
    run_single,
    sweep_qm,
    winner,
)
from .metrics import Alignment, align, correlation, eta
from .sfa import (
    DEFAULT_SVD_CUTOFF,
    ExpansionSpec,
    OutputSignals,
    SfaModel,
    apply,
    delta,
    expand,
    expanded_dim,
    fit,
    load_model,
    save_model,
)

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "CsvParseError",
    "DEFAULT_NU_GRID",
    "DEFAULT_SVD_CUTOFF",
    "DegenerateSignalError",
    "DrivingForce",
    "EmbeddingMatrix",
    "EtaCell",
    "ETA_TABLE_M",
    "ETA_TABLE_NU_F",
    "ETA_TABLE_Q",
    "ExpansionSpec",
    "ExperimentRecord",
    "FAST_RATE",
    "InsufficientDataError",
    "InvalidParameterError",
    "LogisticParams",
    "NoiseCell",
    "NumericalDomainError",
    "OutputSignals",
    "QmCell",
    "RankDeficiencyError",
    "RNG_ALGORITHM",
    "RunConfig",
    "ScanResult",
    "SfaDriveError",
    "SfaModel",
    "SLOW_RATE",
    "TimeSeries",
    "TimeWindow",
    "add_noise",
    "align",
    "apply",
    "correlation",
    "delta",
    "derive_seed",
    "embed",
    "eta",
    "eta_table",
    "expand",
    "expanded_dim",
    "fit",
    "load_model",
    "logistic_series",
    "make_driving_force",
    "noise_study",
    "phase_transition_scan",
    "run_single",
    "save_model",
    "sweep_qm",
    "window_restrict",
    "winner",
]
