"""Numba switch for the hot kernels.

Set ``BERGMAN_LAB_DISABLE_NUMBA=1`` to force the pure-numpy fallbacks, and
``BERGMAN_LAB_THREADS=n`` to cap numba worker threads.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}


def numba_disabled():
    return os.environ.get("BERGMAN_LAB_DISABLE_NUMBA", "").strip().lower() in _TRUTHY


try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

HAVE_NUMBA = numba is not None
prange = numba.prange if HAVE_NUMBA else range


def use_numba():
    """True when the jitted kernels should be used (checked at call time)."""
    return HAVE_NUMBA and not numba_disabled()


def njit(f=None, **options):
    """``numba.njit`` with caching on, or the identity when numba is missing."""
    options.setdefault("cache", True)
    if numba is None:
        return (lambda g: g) if f is None else f
    if f is None:
        return lambda g: numba.njit(g, **options)
    return numba.njit(f, **options)


def _apply_thread_cap():
    cap = os.environ.get("BERGMAN_LAB_THREADS")
    if numba is None or not cap:
        return
    try:
        n = int(cap)
    except ValueError:
        return
    if n >= 1:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


_apply_thread_cap()
