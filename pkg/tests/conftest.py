import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    monkeypatch.setenv("BERGMAN_LAB_DISABLE_NUMBA", "1" if request.param == "numpy" else "0")
    return request.param
