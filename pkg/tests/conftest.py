import numpy as np
import pytest

from sfadrive.dynamics import LogisticParams, logistic_series, make_driving_force
from sfadrive.embedding import embed
from sfadrive.experiments import RunConfig, run_single
from sfadrive.sfa import fit


@pytest.fixture(scope="session")
def record_nu20():
    """Reference run at low base frequency, full protocol defaults."""
    return run_single(RunConfig(nu_f=20.0))


@pytest.fixture(scope="session")
def record_nu80():
    """Reference run at high base frequency, full protocol defaults."""
    return run_single(RunConfig(nu_f=80.0))


@pytest.fixture(scope="session")
def small_fit():
    """Medium-size fitted model for structural and property tests.

    Returns (model, output, rows) for a chaotic run small enough to refit
    cheaply but large enough that covariance estimates are tight.
    """
    force = make_driving_force(20.0, 2000)
    series = logistic_series(force, LogisticParams(q=0.1))
    rows = embed(series, m=9, tau=1)
    model, output = fit(rows, degree=2, k=5)
    return model, output, rows


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
