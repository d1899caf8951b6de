import os
import subprocess
import sys

import numpy as np
import pytest

from bergman_lab import _kernels


def _both(monkeypatch, fn, *args, **kw):
    out = []
    for flag in ("0", "1"):
        monkeypatch.setenv("BERGMAN_LAB_DISABLE_NUMBA", flag)
        out.append(fn(*args, **kw))
    return out


def test_gauss_series_backends_agree(monkeypatch):
    a, b = _both(monkeypatch, _kernels.gauss_series, 0.7, 1.3, 2.0, 0.99)
    assert a == pytest.approx(b, rel=1e-13)


def test_coeff_square_sum_backends_agree(monkeypatch):
    a, b = _both(monkeypatch, _kernels.coeff_square_sum, 0.8, 2, 20000)
    assert np.allclose(a, b, rtol=1e-12, atol=0)


def test_kernel_row_means_backends_agree(monkeypatch, rng):
    z = (rng.uniform(-0.5, 0.5, (7, 2)) + 1j * rng.uniform(-0.5, 0.5, (7, 2)))
    w = (rng.uniform(-0.5, 0.5, (300, 2)) + 1j * rng.uniform(-0.5, 0.5, (300, 2)))
    a, b = _both(monkeypatch, _kernels.kernel_row_means, z, w, 1.7)
    assert np.allclose(a, b, rtol=1e-12, atol=0)


@pytest.mark.parametrize("cap", ["1", "2"])
def test_thread_cap(cap):
    env = dict(os.environ, BERGMAN_LAB_THREADS=cap)
    code = "import bergman_lab._accel as a, numba; print(numba.get_num_threads())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout
    expected = min(int(cap), int(subprocess.run(
        [sys.executable, "-c", "import numba; print(numba.config.NUMBA_NUM_THREADS)"],
        capture_output=True, text=True, check=True).stdout))
    assert int(out) == expected
