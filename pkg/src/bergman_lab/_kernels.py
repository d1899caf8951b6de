"""Hot numeric loops, each with a numba implementation and a numpy fallback.

The public wrappers at the bottom pick the implementation at call time via
``_accel.use_numba()``; both paths implement the same algorithm so results
agree to rounding.
"""

import math

import numpy as np

from ._accel import njit, prange, use_numba
from .errors import ConvergenceError

SERIES_RTOL = 1e-16
SERIES_PATIENCE = 3
SERIES_CAP = 100_000

_CHUNK = 256


# ---------------------------------------------------------------------------
# Gauss series  sum_j (a)_j (b)_j / ((c)_j j!) x^j
# ---------------------------------------------------------------------------

@njit
def _gauss_series_nb(a, b, c, x):
    total = 1.0
    mass = 1.0
    term = 1.0
    small = 0
    for j in range(SERIES_CAP):
        term *= (a + j) * (b + j) / ((c + j) * (j + 1.0)) * x
        total += term
        mass += abs(term)
        if abs(term) < SERIES_RTOL * abs(total):
            small += 1
            if small >= SERIES_PATIENCE:
                return total, mass, j + 2
        else:
            small = 0
        if term == 0.0:
            return total, mass, j + 2
    return total, mass, -1


def _first_converged(terms, partial):
    """Index of the term closing the first run of small terms, or -1."""
    small = np.abs(terms) < SERIES_RTOL * np.abs(partial)
    small |= terms == 0.0
    if SERIES_PATIENCE > 1:
        run = small.copy()
        for shift in range(1, SERIES_PATIENCE):
            run[shift:] &= small[:-shift]
            run[:shift] = False
        small = run
    hits = np.flatnonzero(small)
    return int(hits[0]) if hits.size else -1


def _gauss_series_np(a, b, c, x):
    total = 1.0
    mass = 1.0
    term = 1.0
    start = 0
    while start < SERIES_CAP:
        j = np.arange(start, min(start + _CHUNK, SERIES_CAP), dtype=np.float64)
        ratios = (a + j) * (b + j) / ((c + j) * (j + 1.0)) * x
        terms = term * np.cumprod(ratios)
        partial = total + np.cumsum(terms)
        masses = mass + np.cumsum(np.abs(terms))
        stop = _first_converged(terms, partial)
        if stop >= 0:
            return float(partial[stop]), float(masses[stop]), start + stop + 2
        total = float(partial[-1])
        mass = float(masses[-1])
        term = float(terms[-1])
        start += j.size
    return total, mass, -1


# ---------------------------------------------------------------------------
# Logarithmic series for integer c - a - b = n >= 0:
#   sum_k (a+n)_k (b+n)_k / (k! (k+n)!) w^k
#         * [ln w - psi(k+1) - psi(k+n+1) + psi(a+n+k) + psi(b+n+k)]
# psi values at k = 0 are passed in and advanced by psi(x+1) = psi(x) + 1/x.
# ---------------------------------------------------------------------------

@njit
def _log_series_nb(a, b, n, w, lnw, psi_1, psi_n1, psi_a, psi_b):
    coef = 1.0
    for i in range(1, n + 1):
        coef /= i
    an = a + n
    bn = b + n
    total = coef * (lnw - psi_1 - psi_n1 + psi_a + psi_b)
    mass = abs(total)
    small = 0
    for k in range(SERIES_CAP):
        coef *= (an + k) * (bn + k) / ((k + 1.0) * (k + n + 1.0)) * w
        psi_1 += 1.0 / (k + 1.0)
        psi_n1 += 1.0 / (k + n + 1.0)
        psi_a += 1.0 / (an + k)
        psi_b += 1.0 / (bn + k)
        term = coef * (lnw - psi_1 - psi_n1 + psi_a + psi_b)
        total += term
        mass += abs(term)
        if abs(term) < SERIES_RTOL * abs(total):
            small += 1
            if small >= SERIES_PATIENCE:
                return total, mass, k + 2
        else:
            small = 0
        if coef == 0.0:
            return total, mass, k + 2
    return total, mass, -1


def _log_series_np(a, b, n, w, lnw, psi_1, psi_n1, psi_a, psi_b):
    coef = 1.0 / math.factorial(n)
    an = a + n
    bn = b + n
    total = coef * (lnw - psi_1 - psi_n1 + psi_a + psi_b)
    mass = abs(total)
    start = 0
    while start < SERIES_CAP:
        k = np.arange(start, min(start + _CHUNK, SERIES_CAP), dtype=np.float64)
        coefs = coef * np.cumprod((an + k) * (bn + k) / ((k + 1.0) * (k + n + 1.0)) * w)
        p1 = psi_1 + np.cumsum(1.0 / (k + 1.0))
        pn1 = psi_n1 + np.cumsum(1.0 / (k + n + 1.0))
        pa = psi_a + np.cumsum(1.0 / (an + k))
        pb = psi_b + np.cumsum(1.0 / (bn + k))
        terms = coefs * (lnw - p1 - pn1 + pa + pb)
        partial = total + np.cumsum(terms)
        masses = mass + np.cumsum(np.abs(terms))
        stop = _first_converged(terms, partial)
        if stop >= 0:
            return float(partial[stop]), float(masses[stop]), start + stop + 2
        total = float(partial[-1])
        mass = float(masses[-1])
        coef = float(coefs[-1])
        psi_1, psi_n1, psi_a, psi_b = float(p1[-1]), float(pn1[-1]), float(pa[-1]), float(pb[-1])
        start += k.size
    return total, -1


# ---------------------------------------------------------------------------
# sum_{n=0}^{N} c_n^2 * mult(n), c_n = (alpha)_n / (d+1)_n,
# mult(n) = binom(n+d-1, d-1) (dimension of degree-n homogeneous polynomials)
# ---------------------------------------------------------------------------

@njit
def _coeff_square_sum_nb(alpha, d, N):
    c = 1.0
    mult = 1.0
    total = 0.0
    comp = 0.0
    for n in range(N + 1):
        y = c * c * mult - comp
        t = total + y
        comp = (t - total) - y
        total = t
        c *= (alpha + n) / (d + 1.0 + n)
        mult *= (n + d) / (n + 1.0)
    return total


def _coeff_square_sum_np(alpha, d, N):
    n = np.arange(N, dtype=np.float64)
    c = np.empty(N + 1)
    c[0] = 1.0
    c[1:] = np.cumprod((alpha + n) / (d + 1.0 + n))
    mult = np.empty(N + 1)
    mult[0] = 1.0
    mult[1:] = np.cumprod((n + d) / (n + 1.0))
    return float(np.sum(c * c * mult))


# ---------------------------------------------------------------------------
# Row means of a weighted |kernel|:  out_i = mean_j weight_j |1 - <z_i, w_j>|^-alpha
# ---------------------------------------------------------------------------

@njit(parallel=True)
def _kernel_row_means_nb(zr, zi, wr, wi, weights, alpha):
    nz, d = zr.shape
    nw = wr.shape[0]
    out = np.empty(nz)
    for i in prange(nz):
        acc = 0.0
        for j in range(nw):
            re = 1.0
            im = 0.0
            for k in range(d):
                # <z, w> = sum z_k conj(w_k)
                re -= zr[i, k] * wr[j, k] + zi[i, k] * wi[j, k]
                im -= zi[i, k] * wr[j, k] - zr[i, k] * wi[j, k]
            acc += weights[j] * (re * re + im * im) ** (-0.5 * alpha)
        out[i] = acc / nw
    return out


def _kernel_row_means_np(z, w, weights, alpha, chunk=2048):
    out = np.empty(z.shape[0])
    wc = np.conj(w).T
    for start in range(0, z.shape[0], chunk):
        zw = z[start:start + chunk] @ wc
        out[start:start + chunk] = np.mean(np.abs(1.0 - zw) ** (-alpha) * weights, axis=1)
    return out


# ---------------------------------------------------------------------------
# Public dispatchers
# ---------------------------------------------------------------------------

def gauss_series(a, b, c, x, with_mass=False):
    """Sum the Gauss series at 0 <= x < 1; raises ConvergenceError at the cap.

    With ``with_mass`` also returns the sum of absolute terms, a cancellation
    gauge.
    """
    if use_numba():
        total, mass, used = _gauss_series_nb(float(a), float(b), float(c), float(x))
    else:
        total, mass, used = _gauss_series_np(float(a), float(b), float(c), float(x))
    if used < 0:
        raise ConvergenceError(
            f"2F1 series ({a}, {b}; {c}; {x}) not converged after {SERIES_CAP} terms")
    return (total, mass) if with_mass else total


def log_series(a, b, n, w, psi_1, psi_n1, psi_a, psi_b):
    args = (float(a), float(b), int(n), float(w), math.log(w),
            float(psi_1), float(psi_n1), float(psi_a), float(psi_b))
    if use_numba():
        total, mass, used = _log_series_nb(*args)
    else:
        total, mass, used = _log_series_np(*args)
    if used < 0:
        raise ConvergenceError(f"logarithmic 2F1 series not converged (w={w})")
    return total, mass


def coeff_square_sum(alpha, d, N):
    if use_numba():
        return float(_coeff_square_sum_nb(float(alpha), int(d), int(N)))
    return _coeff_square_sum_np(float(alpha), int(d), int(N))


def kernel_row_means(z, w, alpha, weights=None):
    z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
    w = np.atleast_2d(np.asarray(w, dtype=np.complex128))
    if weights is None:
        weights = np.ones(w.shape[0])
    weights = np.asarray(weights, dtype=np.float64)
    if use_numba():
        return _kernel_row_means_nb(
            np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag),
            np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag),
            weights, float(alpha))
    return _kernel_row_means_np(z, w, weights, float(alpha))
