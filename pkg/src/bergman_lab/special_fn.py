"""Real-parameter Gamma, Beta, Pochhammer and Gauss 2F1 on [0, 1].

``hyp2f1`` sums the Gauss series directly for ``z <= 0.5``.  Above that it
works in ``w = 1 - z``: the Euler transformation first makes ``c - a - b``
nonnegative, then the standard linear connection to the ``1 - z`` series
(non-integer ``c - a - b``) or its logarithmic form (integer ``c - a - b``)
is used.  Every series in play then has ratio at most 0.5.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import _kernels
from .errors import ConvergenceError, DivergenceError, DomainError

# |c - a - b - n| below this (but nonzero) is treated by interpolation in c
NEAR_INTEGER = 1e-3
_SWITCH = 0.5


def _is_nonpositive_int(x):
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HyperParams:
    """Arguments of 2F1(a, b; c; z) with the domain checks applied."""

    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        for name in ("a", "b", "c", "z"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
        if _is_nonpositive_int(self.c):
            raise DomainError(f"c = {self.c} is a pole of the series")
        if not 0.0 <= self.z <= 1.0:
            raise DomainError(f"z = {self.z} outside [0, 1]")

    @property
    def excess(self):
        """c - a - b, which controls behaviour at z = 1."""
        return self.c - self.a - self.b


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def gamma_sign(x):
    """Sign of Gamma(x) at a non-pole real x."""
    if x > 0:
        return 1.0
    if float(x).is_integer():
        raise DomainError(f"Gamma has a pole at {x}")
    return -1.0 if math.floor(x) % 2 else 1.0


def gamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den), via logs.

    Poles in ``den`` give 0; poles in ``num`` raise.
    """
    sign = 1.0
    log = 0.0
    for x in den:
        if _is_nonpositive_int(x):
            return 0.0
        sign *= gamma_sign(x)
        log -= math.lgamma(x)
    for x in num:
        if _is_nonpositive_int(x):
            raise DomainError(f"Gamma has a pole at {x}")
        sign *= gamma_sign(x)
        log += math.lgamma(x)
    return sign * math.exp(log)


def pochhammer(a, j):
    """Rising factorial (a)_j = a (a+1) ... (a+j-1)."""
    j = int(j)
    if j < 0:
        raise DomainError("pochhammer needs j >= 0")
    out = 1.0
    for k in range(j):
        out *= a + k
    return out


def beta(x, y):
    if not (x > 0 and y > 0):
        raise DomainError(f"beta needs positive arguments, got ({x}, {y})")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def digamma(x):
    return float(_sp.digamma(x))


# ---------------------------------------------------------------------------
# 2F1
# ---------------------------------------------------------------------------

def _polynomial(a, b, c, z):
    # a is a nonpositive integer: finite sum, fine for every z in [0, 1]
    n = int(-a)
    term = 1.0
    total = 1.0
    for j in range(n):
        term *= (a + j) * (b + j) / ((c + j) * (j + 1.0)) * z
        total += term
    return total


def _gauss_value(a, b, c):
    m = c - a - b
    if m <= 0:
        raise DivergenceError(f"2F1({a}, {b}; {c}; 1) diverges: c - a - b = {m} <= 0")
    return gamma_ratio((c, m), (c - a, c - b))


def _connection(a, b, c, w):
    """F(a, b; c; 1 - w) for non-integer m = c - a - b and 0 < w < 0.5.

    Returns (value, mass) where mass bounds the magnitudes that were summed.
    """
    m = c - a - b
    value = 0.0
    mass = 0.0
    g1 = gamma_ratio((c, m), (c - a, c - b))
    if g1 != 0.0:
        s1, m1 = _kernels.gauss_series(a, b, 1.0 - m, w, with_mass=True)
        value += g1 * s1
        mass += abs(g1) * m1
    g2 = gamma_ratio((c, -m), (a, b))
    if g2 != 0.0:
        s2, m2 = _kernels.gauss_series(c - a, c - b, 1.0 + m, w, with_mass=True)
        value += g2 * w ** m * s2
        mass += abs(g2) * w ** m * m2
    return value, mass


def _log_connection(a, b, n, w):
    """F(a, b; a + b + n; 1 - w) for integer n >= 0 and 0 < w < 0.5."""
    c = a + b + n
    value = 0.0
    mass = 0.0
    if n > 0:
        coef = gamma_ratio((float(n), c), (a + n, b + n))
        term = 1.0
        acc = 1.0
        absacc = 1.0
        for k in range(n - 1):
            term *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - n + k)) * w
            acc += term
            absacc += abs(term)
        value = coef * acc
        mass = abs(coef) * absacc
    lead = gamma_ratio((c,), (a, b))
    if lead != 0.0:
        s, ms = _kernels.log_series(
            a, b, n, w,
            digamma(1.0), digamma(n + 1.0), digamma(a + n), digamma(b + n))
        scale = w ** n * lead
        value -= (-1.0) ** n * scale * s
        mass += abs(scale) * ms
    return value, mass


def _near_integer(a, b, n, gap, w):
    # quartic interpolation in c through c - a - b = n + k*h, k = -2..2
    h = NEAR_INTEGER
    nodes = [-2.0 * h, -h, 0.0, h, 2.0 * h]
    vals = []
    mass = 0.0
    for x in nodes:
        v, mv = _log_connection(a, b, n, w) if x == 0.0 else _connection(a, b, a + b + n + x, w)
        vals.append(v)
        mass = max(mass, mv)
    out = 0.0
    for i, xi in enumerate(nodes):
        li = 1.0
        for j, xj in enumerate(nodes):
            if j != i:
                li *= (gap - xj) / (xi - xj)
        out += li * vals[i]
    return out, mass


# Above this cancellation ratio the direct series is tried as well (z <= 0.9).
_ILL_CONDITIONED = 1e3
_DIRECT_LIMIT = 0.9


def _upper(a, b, c, z, w=None):
    """2F1 for 0.5 < z < 1 with a, b not nonpositive integers.

    ``w`` may carry 1 - z exactly when the caller knows it better than 1 - z.
    """
    if w is None:
        w = 1.0 - z
    m = c - a - b
    if m < 0.0:
        return w ** m * _eval(c - a, c - b, c, z, w)
    n = round(m)
    gap = m - n
    if gap == 0.0:
        value, mass = _log_connection(a, b, int(n), w)
    elif abs(gap) < NEAR_INTEGER:
        value, mass = _near_integer(a, b, int(n), gap, w)
    else:
        value, mass = _connection(a, b, c, w)
    if z <= _DIRECT_LIMIT and mass > _ILL_CONDITIONED * abs(value):
        direct, dmass = _kernels.gauss_series(a, b, c, z, with_mass=True)
        if dmass / max(abs(direct), 1e-300) < mass / max(abs(value), 1e-300):
            return direct
    return value


def _eval(a, b, c, z, w=None):
    if z == 0.0:
        return 1.0
    if _is_nonpositive_int(a):
        return _polynomial(a, b, c, z)
    if _is_nonpositive_int(b):
        return _polynomial(b, a, c, z)
    if z == 1.0 and not w:
        return _gauss_value(a, b, c)
    if z <= _SWITCH:
        return _kernels.gauss_series(a, b, c, z)
    return _upper(a, b, c, z, w)


def hyp2f1(a, b=None, c=None, z=None):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z in [0, 1].

    Accepts either a :class:`HyperParams` or the four numbers.  Raises
    ``DivergenceError`` at z = 1 when c - a - b <= 0.
    """
    hp = a if isinstance(a, HyperParams) else HyperParams(float(a), float(b), float(c), float(z))
    return _eval(hp.a, hp.b, hp.c, hp.z)


def hyp2f1_1mz(a, b, c, w):
    """2F1(a, b; c; 1 - w), using w itself rather than the rounded 1 - w.

    Useful close to z = 1, where w carries all the information.
    """
    hp = HyperParams(float(a), float(b), float(c), min(max(1.0 - float(w), 0.0), 1.0))
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"w = {w} outside [0, 1]")
    if w == 0.0:
        return _eval(hp.a, hp.b, hp.c, 1.0)
    return _eval(hp.a, hp.b, hp.c, 1.0 - w, w)


def hyp2f1_array(a, b, c, z):
    """Elementwise :func:`hyp2f1` over an array of arguments."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty(z.shape)
    flat = out.reshape(-1)
    for i, zi in enumerate(z.reshape(-1)):
        flat[i] = hyp2f1(a, b, c, zi)
    return out


def hyp2f1_derivative(a, b=None, c=None, z=None):
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z), for z < 1."""
    hp = a if isinstance(a, HyperParams) else HyperParams(float(a), float(b), float(c), float(z))
    if hp.z >= 1.0:
        raise DomainError("derivative requires z < 1")
    if hp.a == 0.0 or hp.b == 0.0:
        return 0.0
    return hp.a * hp.b / hp.c * _eval(hp.a + 1.0, hp.b + 1.0, hp.c + 1.0, hp.z)


__all__ = [
    "HyperParams", "log_gamma", "gamma_sign", "gamma_ratio", "pochhammer",
    "beta", "digamma", "hyp2f1", "hyp2f1_1mz", "hyp2f1_array", "hyp2f1_derivative",
    "ConvergenceError", "DivergenceError", "DomainError",
]
