"""Measure and geometry on the unit ball B^d of C^d.

Points are complex numpy arrays of shape ``(d,)`` or ``(n, d)``.  The volume
measure ``dv`` is normalized to total mass one, and ``dv_beta`` is
``c_beta (1 - |z|^2)^beta dv``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError
from .special_fn import beta as beta_fn
from .special_fn import gamma_ratio

# 1 - |z|^2 below this is not representable from z itself
GAP_MIN = 2.0 ** -53


def boundary_gap(r2):
    """1 - |z|^2 from |z|^2, floored at GAP_MIN so boundary-rounded draws stay finite."""
    return np.maximum(1.0 - r2, GAP_MIN)


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    std_error: float
    n_samples: int

    @classmethod
    def from_samples(cls, samples):
        samples = np.asarray(samples, dtype=np.float64)
        n = samples.size
        sd = float(np.std(samples, ddof=1)) if n > 1 else 0.0
        return cls(float(np.mean(samples)), sd / math.sqrt(n), int(n))

    def within(self, target, n_sigma):
        return abs(self.value - target) <= n_sigma * self.std_error

    def as_dict(self):
        return {"value": self.value, "std_error": self.std_error, "n_samples": self.n_samples}


def ball_point(coords):
    """Validate and return coordinates as a complex point (or stack of points)."""
    z = np.asarray(coords, dtype=np.complex128)
    if z.ndim == 0:
        z = z.reshape(1)
    norms = np.sum(np.abs(z) ** 2, axis=-1)
    if np.any(norms >= 1.0):
        raise DomainError("point(s) outside the open unit ball")
    return z


def inner_product(z, w):
    """Hermitian pairing <z, w> = sum_k z_k conj(w_k); broadcasts over leading axes."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    if z.shape[-1:] != w.shape[-1:]:
        raise DomainError(f"dimension mismatch: {z.shape[-1:]} vs {w.shape[-1:]}")
    out = np.sum(z * np.conj(w), axis=-1)
    return complex(out) if out.ndim == 0 else out


def _sphere(rng, n, d):
    g = rng.standard_normal((n, 2 * d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, :d] + 1j * g[:, d:]


def sample_uniform(rng, n, d):
    """n points from normalized volume on B^d (Gaussian direction, radius U^(1/2d))."""
    if n < 1 or d < 1:
        raise DomainError("need n >= 1 and d >= 1")
    u = _sphere(rng, n, d)
    radius = rng.random(n) ** (1.0 / (2 * d))
    return u * radius[:, None]


@dataclass(frozen=True)
class WeightedMeasure:
    """dv_beta = c_beta (1 - |z|^2)^beta dv on B^d."""

    beta: float
    d: int = 1

    def __post_init__(self):
        if not self.beta > -1.0:
            raise DomainError(f"weight exponent must exceed -1, got {self.beta}")
        if self.d < 1:
            raise DomainError("d must be >= 1")

    @property
    def c_beta(self):
        return gamma_ratio((self.d + self.beta + 1.0,), (self.d + 1.0, self.beta + 1.0))

    def density(self, z):
        """Density with respect to dv."""
        r2 = np.sum(np.abs(np.asarray(z)) ** 2, axis=-1)
        return self.c_beta * boundary_gap(r2) ** self.beta

    def sample(self, rng, n):
        # |z|^2 ~ Beta(d, beta + 1) under dv_beta
        r2 = rng.beta(self.d, self.beta + 1.0, size=n)
        return _sphere(rng, n, self.d) * np.sqrt(r2)[:, None]


def sample_weighted(rng, n, d, beta):
    return WeightedMeasure(beta, d).sample(rng, n)


# ---------------------------------------------------------------------------
# Importance sampling for integrands singular like |1 - <z, w>|^-s near z/|z|
# ---------------------------------------------------------------------------

def _unitary_to(u):
    """A unitary U with U e_1 = u (|u| = 1), built from one Householder step."""
    d = u.size
    phase = u[0] / abs(u[0]) if abs(u[0]) > 0 else 1.0
    x = np.conj(phase) * u
    v = x.copy()
    v[0] -= 1.0
    vv = np.vdot(v, v).real
    h = np.eye(d, dtype=np.complex128)
    if vv > 1e-30:
        h -= 2.0 * np.outer(v, np.conj(v)) / vv
    return phase * h


# Floor on |1 - w| for the singular law.  Closer draws would round onto the
# unit circle (and get rejected), silently thinning the law near its pole.
RHO_MIN = 1e-8


def _disc_singular_mass(s):
    """Normalized-area mass of |1 - w|^-s over the disc minus the cap |1 - w| < RHO_MIN."""
    full = gamma_ratio((2.0, 2.0 - s), (2.0 - 0.5 * s, 2.0 - 0.5 * s))
    # the cap is a half disc up to a sliver of relative size RHO_MIN
    cap = 2.0 * math.acos(0.5 * RHO_MIN) / math.pi * RHO_MIN ** (2.0 - s) / (2.0 - s)
    return full - cap


def _disc_singular(rng, n, s):
    """n draws on the unit disc with density proportional to |1 - w|^-s off the cap
    |1 - w| < RHO_MIN, with respect to normalized area."""
    out = np.empty(n, dtype=np.complex128)
    u0 = (0.5 * RHO_MIN) ** (2.0 - s)
    filled = 0
    while filled < n:
        m = max(2 * (n - filled), 64)
        u = u0 + (1.0 - u0) * rng.random(m)
        rho = 2.0 * u ** (1.0 / (2.0 - s))
        phi = (rng.random(m) - 0.5) * math.pi
        # exact membership test, |1 - rho e^(i phi)| < 1  <=>  rho < 2 cos(phi)
        keep = rho < 2.0 * np.cos(phi)
        w = 1.0 - rho[keep] * np.exp(1j * phi[keep])
        w = w[np.abs(w) < 1.0]
        take = min(w.size, n - filled)
        out[filled:filled + take] = w[:take]
        filled += take
    return out


@dataclass(frozen=True)
class KernelAdaptedSampler:
    """Mixture of dv_gamma and a law concentrated near the boundary point z/|z|.

    The second component puts density proportional to |1 - w~_1|^-s on the
    rotated first coordinate, so integrands like |1 - <z, w>|^-a with a close
    to s keep a finite second moment.  ``sample`` returns points together with
    weights dv/dP, so ``mean(g(w) * weight)`` estimates the dv-integral of g.
    """

    z: np.ndarray
    s: float
    gamma: float = 0.0
    mix: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.s < 2.0:
            raise DomainError("singular exponent s must lie in [0, 2)")
        if not 0.0 < self.mix < 1.0:
            raise DomainError("mixture weight must lie in (0, 1)")

    @property
    def d(self):
        return int(np.asarray(self.z).size)

    def _frame(self):
        z = np.asarray(self.z, dtype=np.complex128).reshape(-1)
        nz = np.linalg.norm(z)
        u = z / nz if nz > 0 else np.eye(self.d, dtype=np.complex128)[0]
        return u, _unitary_to(u)

    def _z_s(self):
        return _disc_singular_mass(self.s)

    def density(self, w):
        """Mixture density with respect to dv."""
        d = self.d
        w = np.atleast_2d(w)
        u, _ = self._frame()
        r2 = np.sum(np.abs(w) ** 2, axis=1)
        pa = WeightedMeasure(self.gamma, d).c_beta * boundary_gap(r2) ** self.gamma
        t = w @ np.conj(u)
        gap = np.abs(1.0 - t)
        pb = np.where(gap < RHO_MIN, 0.0, np.maximum(gap, RHO_MIN) ** (-self.s)) / self._z_s()
        if d > 1:
            pb = pb / (d * (1.0 - np.abs(t) ** 2) ** (d - 1))
        return self.mix * pa + (1.0 - self.mix) * pb

    def sample(self, rng, n):
        d = self.d
        n_a = int(rng.binomial(n, self.mix))
        pts = np.empty((n, d), dtype=np.complex128)
        pts[:n_a] = WeightedMeasure(self.gamma, d).sample(rng, n_a)
        n_b = n - n_a
        if n_b:
            t = _disc_singular(rng, n_b, self.s)
            tilde = np.zeros((n_b, d), dtype=np.complex128)
            tilde[:, 0] = t
            if d > 1:
                rest = sample_uniform(rng, n_b, d - 1)
                tilde[:, 1:] = rest * np.sqrt(1.0 - np.abs(t) ** 2)[:, None]
            _, frame = self._frame()
            pts[n_a:] = tilde @ frame.T
        # keep the stream order independent of which component a draw came from
        perm = rng.permutation(n)
        pts = pts[perm]
        return pts, 1.0 / self.density(pts)


# ---------------------------------------------------------------------------
# Deterministic quadrature
# ---------------------------------------------------------------------------

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-12, limit=200)


def radial_integral(g, d, boundary_power=None, complement=False, max_levels=None):
    """Integral over B^d of g(|z|^2) dv, i.e. d * int_0^1 g(r) r^(d-1) dr.

    The interval is cut geometrically toward r = 1 and each piece goes to
    adaptive quadrature.  If the pieces have not died out after
    ``max_levels`` cuts but decay geometrically (as for a power singularity),
    the geometric tail is added; otherwise ConvergenceError.

    ``complement=True`` means g is called with t = 1 - r instead of r, which
    keeps full precision next to the boundary and allows far deeper cuts.
    With ``boundary_power=e`` the integrand is g(r) (1 - r)^e; near the
    boundary the substitution 1 - r = u^m, m = 1/(1+e), absorbs that factor
    and leaves a smooth integrand even when g itself has a fractional-power
    correction at r = 1.
    """
    if d < 1:
        raise DomainError("d must be >= 1")

    if complement:
        def f(t):
            return d * g(t) * (1.0 - t) ** (d - 1)
        levels = max_levels or 1000
    else:
        def f(t):
            r = 1.0 - t
            return d * g(r) * r ** (d - 1)
        levels = max_levels or 30

    if boundary_power is not None:
        e = float(boundary_power)
        if e <= -1.0:
            raise DomainError("boundary power must exceed -1")
        head, _ = integrate.quad(lambda t: f(t) * t ** e, 0.5, 1.0, **_QUAD_OPTS)
        m = 1.0 / (1.0 + e)
        tail, _ = integrate.quad(lambda u: m * f(u ** m), 0.0, 0.5 ** (1.0 + e), **_QUAD_OPTS)
        return head + tail

    # work in t = 1 - r, pieces [2^-(k+1), 2^-k]
    total, _ = integrate.quad(f, 0.5, 1.0, **_QUAD_OPTS)
    pieces = []
    hi = 0.5
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for _ in range(levels):
            lo = 0.5 * hi
            piece, _ = integrate.quad(f, lo, hi, **_QUAD_OPTS)
            total += piece
            pieces.append(piece)
            hi = lo
            if len(pieces) >= 3 and all(
                    abs(p) <= 1e-16 * max(abs(total), 1e-300) for p in pieces[-3:]):
                return total
    p1, p2, p3 = pieces[-3:]
    if p1 != 0.0 and p2 != 0.0:
        r1, r2 = p2 / p1, p3 / p2
        if 0.0 < r2 < 1.0 and abs(r1 - r2) <= 1e-3 * r2:
            return total + p3 * r2 / (1.0 - r2)
    raise ConvergenceError("radial integral: geometric subdivision did not settle")


def _gl_panels(levels, order=16):
    """Gauss-Legendre nodes/weights on [0,1] graded geometrically toward 1."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = [0.0] + [1.0 - 2.0 ** (-k) for k in range(1, levels + 1)] + [1.0]
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _monomial_pnorm_p(n, p, d):
    # d * int_0^1 rho^(np/2) (1 - rho)^(d-1) d rho
    return d * beta_fn(0.5 * n * p + 1.0, float(d))


def slice_norm(f, p, d, levels=None):
    """L^p(B^d) norm of w -> f(w_1), computed on the disc with weight d (1-|z|^2)^(d-1).

    ``f`` is either a sequence of power-series coefficients (a_0, a_1, ...) in
    z_1, or a vectorized callable on complex arrays.  ``p = inf`` gives the
    sup norm.  Returns ``inf`` when the integral is not finite.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    if callable(f):
        return _slice_norm_callable(f, p, d, levels or 30)
    coef = np.asarray(f, dtype=np.complex128).reshape(-1)
    nz = np.flatnonzero(coef)
    if nz.size == 0:
        return 0.0
    if nz.size == 1:
        n = int(nz[0])
        scale = abs(coef[n])
        if math.isinf(p):
            return scale
        return scale * _monomial_pnorm_p(n, p, d) ** (1.0 / p)
    deg = int(nz[-1])
    # the norm is homogeneous; rescaling keeps |f|^p clear of under/overflow
    scale = float(np.max(np.abs(coef)))
    return scale * _slice_norm_coef(coef[: deg + 1] / scale, p, d, levels)


def _slice_norm_coef(coef, p, d, levels):
    deg = coef.size - 1
    if math.isinf(p):
        m = 1 << max(6, int(math.ceil(math.log2(8 * (deg + 1)))))
        return float(np.max(np.abs(np.fft.fft(coef[: deg + 1], m))))
    if float(p).is_integer() and int(p) % 2 == 0:
        # ||f||_{2m}^{2m} = ||f^m||_2^2 and the L^2 norm is diagonal in z_1^n
        m = int(p) // 2
        power = _series_power(coef[: deg + 1], m)
        return float(_l2_squared(power, d) ** (1.0 / p))
    levels = levels or int(math.ceil(math.log2(deg + 1))) + 12
    rho, wts = _gl_panels(levels)
    m = 1 << max(5, int(math.ceil(math.log2(4 * (deg + 1)))))
    r = np.sqrt(rho)
    # values on the circle of radius r: sum a_n r^n e^{i n theta}
    powers = np.exp(np.outer(np.log(r), np.arange(deg + 1)))
    vals = np.fft.fft(powers * coef[None, : deg + 1], m, axis=1)
    ang = np.mean(np.abs(vals) ** p, axis=1)
    integral = d * np.sum(wts * ang * (1.0 - rho) ** (d - 1))
    return float(integral ** (1.0 / p))


def _l2_squared(coef, d):
    n = np.arange(coef.size)
    # d * B(n+1, d) = n! d! / (n+d)!
    mass = np.exp(math.lgamma(d + 1.0) + gammaln(n + 1.0) - gammaln(n + d + 1.0))
    return float(np.sum(np.abs(coef) ** 2 * mass))


def _series_power(coef, m):
    """Coefficients of (sum a_n z^n)^m by FFT convolution."""
    if m == 1:
        return coef
    size = 1 << int(math.ceil(math.log2(m * (coef.size - 1) + 1)))
    spec = np.fft.fft(coef, size) ** m
    out = np.fft.ifft(spec)[: m * (coef.size - 1) + 1]
    if np.all(np.isreal(coef)):
        out = out.real.astype(np.complex128)
    return out


def _slice_norm_callable(f, p, d, levels, n_theta=256):
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    rho, wts = _gl_panels(levels)
    zeta = np.sqrt(rho)[:, None] * np.exp(1j * theta)[None, :]
    vals = np.abs(np.asarray(f(zeta), dtype=np.complex128))
    if not np.all(np.isfinite(vals)):
        return math.inf
    if math.isinf(p):
        return float(np.max(vals))
    ang = np.mean(vals ** p, axis=1)
    integral = d * np.sum(wts * ang * (1.0 - rho) ** (d - 1))
    if not math.isfinite(integral):
        return math.inf
    return float(integral ** (1.0 / p))


__all__ = [
    "QuadratureEstimate", "WeightedMeasure", "KernelAdaptedSampler", "ball_point",
    "inner_product", "boundary_gap", "sample_uniform", "sample_weighted", "radial_integral", "slice_norm",
]
