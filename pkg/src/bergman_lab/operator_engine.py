"""K_alpha and R^{s,t} as diagonal operators on homogeneous expansions.

On a holomorphic f = sum f_n, K_alpha multiplies the degree-n component by
c_n = Gamma(d+1) Gamma(alpha+n) / (Gamma(alpha) Gamma(d+1+n)) = (alpha)_n / (d+1)_n.
Series inputs here are power series in z_1 alone, so each f_n is a monomial.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, zeta

from . import _kernels
from .ball_measure import slice_norm
from .errors import DomainError, NotHilbertSchmidtError
from .kernel_integrals import Params, trace_closed_form_d1
from .special_fn import gamma_ratio

_PRODUCT_LIMIT = 4096
DEFAULT_N_NORM = 10 ** 5
DEFAULT_N_TRACE = 10 ** 6


def _rising_ratio(top, bottom, n):
    """(top)_n / (bottom)_n."""
    if n <= _PRODUCT_LIMIT:
        out = 1.0
        for k in range(n):
            out *= (top + k) / (bottom + k)
        return out
    return gamma_ratio((top + n, bottom), (top, bottom + n))


def kalpha_coefficient(params, n):
    """Eigenvalue of K_alpha on degree-n homogeneous polynomials."""
    n = int(n)
    if n < 0:
        raise DomainError("degree must be >= 0")
    # (D)_n never vanishes; for alpha a nonpositive integer the sequence terminates
    return _rising_ratio(params.alpha, float(params.D), n)


def kalpha_coefficients(params, N):
    """c_0 .. c_N as an array, by a running product of the step ratios (alpha+k)/(D+k)."""
    a, D = params.alpha, float(params.D)
    if a <= 0:
        return np.array([kalpha_coefficient(params, n) for n in range(N + 1)])
    k = np.arange(N, dtype=np.float64)
    return np.concatenate(([1.0], np.cumprod((a + k) / (D + k))))


def multiplicity(d, n):
    """Dimension of the degree-n homogeneous polynomials in d variables."""
    n = np.asarray(n, dtype=np.float64)
    return np.exp(gammaln(n + d) - gammaln(n + 1.0) - gammaln(float(d)))


@dataclass(frozen=True)
class RadialOperator:
    """R^{s,t}: multiplies degree n by Gamma(d+1+s)Gamma(d+1+n+s+t)/(Gamma(d+1+s+t)Gamma(d+1+n+s))."""

    s: float
    t: float

    def _check(self, d):
        for v in (d + self.s, d + self.s + self.t):
            if v < 0 and float(v).is_integer():
                raise DomainError(f"R^(s,t) undefined: {v} is a negative integer")

    def coefficient(self, params, n):
        d = params.d
        self._check(d)
        bottom = d + 1.0 + self.s
        return _rising_ratio(bottom + self.t, bottom, int(n))

    def inverse(self):
        return RadialOperator(self.s + self.t, -self.t)


def radial_coefficient(op, params, n):
    return op.coefficient(params, n)


@dataclass(frozen=True)
class DiagonalSpectrum:
    params: Params
    coefficients: np.ndarray
    truncation: int
    tail_bound: float = math.nan


def diagonal_spectrum(params, N):
    c = kalpha_coefficients(params, N)
    tail = math.nan
    if params.alpha < (params.d + 2) / 2.0 and params.alpha > 0:
        tail = tail_extrapolation(params, N).bound
    return DiagonalSpectrum(params, c, int(N), tail)


def apply_diagonal(spectrum, series):
    """Termwise product c_n a_n (extending the spectrum if the series is longer)."""
    a = np.asarray(series)
    if isinstance(spectrum, Params):
        spectrum = DiagonalSpectrum(spectrum, kalpha_coefficients(spectrum, max(a.size - 1, 0)),
                                    max(a.size - 1, 0))
    c = spectrum.coefficients
    if a.size > c.size:
        c = kalpha_coefficients(spectrum.params, a.size - 1)
    return c[: a.size] * a


# ---------------------------------------------------------------------------
# Eigenvalue-square series and its tail
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailFit:
    exponent: float
    amplitude: float
    b: float
    c: float
    estimate: float
    bound: float


def _log_square_terms(params, j):
    a, d = params.alpha, params.d
    D = d + 1.0
    logc = gammaln(D) + gammaln(a + j) - gammaln(a) - gammaln(D + j)
    return 2.0 * logc + gammaln(j + d) - gammaln(j + 1.0) - gammaln(float(d))


def tail_extrapolation(params, N, n_fit=64):
    """Estimate sum_{j>N} c_j^2 dim(H_j) from a fit on the last decade.

    The terms behave like A j^p (1 + B/j + C/j^2) with p = 2 alpha - d - 3;
    the fitted model is summed exactly with Hurwitz zeta values.
    """
    a, d = params.alpha, params.d
    p = 2.0 * a - d - 3.0
    if not p < -1.0:
        raise NotHilbertSchmidtError("eigenvalue squares are not summable")
    lo = max(N // 10, 10)
    j = np.unique(np.geomspace(lo, N, n_fit).round())
    g = np.exp(_log_square_terms(params, j) - p * np.log(j))
    design = np.stack([np.ones_like(j), 1.0 / j, 1.0 / j ** 2], axis=1)
    amp, ab, ac = np.linalg.lstsq(design, g, rcond=None)[0]
    q = N + 1.0
    est = amp * zeta(-p, q) + ab * zeta(1.0 - p, q) + ac * zeta(2.0 - p, q)
    # the ratio g_j is monotone in the tail, so its larger end caps sup_{j>N} g_j
    bound = max(g[-1], amp) * zeta(-p, q)
    return TailFit(p, float(amp), float(ab / amp), float(ac / amp), float(est), float(bound))


@dataclass
class SpectralReport:
    spectrum: DiagonalSpectrum
    norm: float
    argmax: int
    square_sum: float
    partial_sum: float
    tail: float
    hilbert_schmidt: bool
    notes: list = field(default_factory=list)

    @property
    def eigenvalues(self):
        return self.spectrum.coefficients


def l2_spectral_report(params, N=DEFAULT_N_NORM, n_eigen=None):
    """Eigenvalues, L^2 operator norm and eigenvalue-square sum of K_alpha."""
    a, d = params.alpha, params.d
    if not a > 0:
        raise DomainError("spectral report needs alpha > 0")
    notes = []
    if d != 1:
        notes.append("for d > 1 each c_n repeats with multiplicity dim(H_n)")
    c = kalpha_coefficients(params, N if n_eigen is None else n_eigen)
    if a > params.D:
        norm, argmax = math.inf, -1
        notes.append("c_n increases without bound: unbounded on L^2")
    else:
        argmax = int(np.argmax(c))
        norm = float(c[argmax])
    hs = a < (d + 2) / 2.0
    if hs:
        partial = _kernels.coeff_square_sum(a, d, N)
        fit = tail_extrapolation(params, N)
        tail, total = fit.estimate, partial + fit.estimate
        spectrum = DiagonalSpectrum(params, c, int(N), fit.bound)
    else:
        partial = _kernels.coeff_square_sum(a, d, N)
        tail, total = math.inf, math.inf
        spectrum = DiagonalSpectrum(params, c, int(N), math.inf)
        notes.append("not Hilbert-Schmidt: the eigenvalue-square series diverges")
    if a < params.D:
        notes.append("0 is a limit point of the eigenvalues; membership of 0 in the "
                     "spectrum is not asserted")
    return SpectralReport(spectrum, norm, argmax, total, partial, tail, hs, notes)


def monotone_ratio_check(params, N=10 ** 4):
    """Sign pattern of c_{j+1}/c_j - 1 = (alpha - D)/(D + j) over j < N."""
    D = params.D
    j = np.arange(N, dtype=np.float64)
    ratio = (params.alpha + j) / (D + j)
    if np.all(ratio < 1.0):
        return "decreasing"
    if np.all(ratio == 1.0):
        return "constant"
    if np.all(ratio > 1.0):
        return "increasing"
    return "mixed"


@dataclass(frozen=True)
class EulerJacobiResult:
    alpha: float
    series: float
    closed_form: float
    residual: float
    partial_sum: float
    tail: float
    status: str


def euler_jacobi_check(alpha, N=DEFAULT_N_TRACE):
    """Compare sum_j c_j^2 (d = 1) with the closed-form trace."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.5:
        raise DomainError("euler_jacobi_check needs 0 < alpha < 1.5")
    params = Params(1, alpha)
    partial = _kernels.coeff_square_sum(alpha, 1, N)
    fit = tail_extrapolation(params, N)
    series = partial + fit.estimate
    closed = trace_closed_form_d1(alpha)
    residual = abs(series - closed)
    if residual < 1e-6 * max(1.0, abs(closed)):
        status = "agree"
    elif alpha > 1.45 and residual < 1e-3 * abs(closed):
        # both sides blow up like 1/(3 - 2 alpha); agreement is only to leading order here
        status = "divergence-consistent"
    else:
        status = "disagree"
    return EulerJacobiResult(alpha, series, closed, residual, partial, fit.estimate, status)


# ---------------------------------------------------------------------------
# Witness-family probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessFamily:
    t: float
    N: int

    @property
    def coefficients(self):
        n = np.arange(self.N + 1, dtype=np.float64)
        out = np.zeros(self.N + 1)
        out[1:] = n[1:] ** self.t
        return out


@dataclass
class GrowthReport:
    params: Params
    p: float
    q: float
    t: float
    window: tuple
    truncations: list
    ratios: list
    growth: float
    blow_up: bool
    source_converged: bool
    notes: list = field(default_factory=list)

    def as_dict(self):
        return {
            "t": self.t, "window": list(self.window), "truncations": list(self.truncations),
            "ratios": list(self.ratios), "growth": self.growth, "blow_up": self.blow_up,
            "source_converged": self.source_converged, "notes": list(self.notes),
        }


GROWTH_THRESHOLD = 10.0


def _even(p):
    return not math.isinf(p) and float(p).is_integer() and int(p) % 2 == 0


def witness_window(params, p, q):
    """Open interval of t with f_t in L^p but K_alpha f_t outside L^q."""
    D, d, a = params.D, params.d, params.alpha
    lo = (D / q if not math.isinf(q) else 0.0) + d - a
    hi = (D / p if not math.isinf(p) else 0.0) - 1.0
    return lo, hi


def unboundedness_probe(params, p, q, n_points=8, t=None):
    """Ratios ||K_alpha f_{t,N}||_q / ||f_{t,N}||_p for growing truncations N.

    With a nonempty window the exponent t is placed 90% of the way to the
    upper end, where f_t still lies in L^p but K_alpha f_t does not lie in
    L^q; otherwise t sits 0.5 inside the L^p membership range.  Growth of at
    least GROWTH_THRESHOLD over the sweep is reported as blow-up.
    """
    if not params.alpha > 0:
        raise DomainError("unboundedness_probe needs alpha > 0")
    p, q = float(p), float(q)
    lo, hi = witness_window(params, p, q)
    notes = []
    if t is None:
        if lo < hi:
            t = lo + 0.9 * (hi - lo)
        else:
            t = hi - 0.5
            notes.append("empty witness window: t placed inside the L^p range")
    fast = _even(p) and _even(q)
    base, step = (6, 2) if fast else (5, 1)
    truncs = [2 ** (base + step * k) for k in range(n_points)]
    ratios, sources = [], []
    for N in truncs:
        f = WitnessFamily(t, N).coefficients
        kf = apply_diagonal(params, f)
        num = slice_norm(kf, q, params.d)
        den = slice_norm(f, p, params.d)
        ratios.append(num / den)
        sources.append(den)
    growth = max(ratios) / ratios[0]
    converged = abs(sources[-1] - sources[-2]) <= 1e-2 * sources[-1]
    if not converged:
        notes.append("source norm still moving at the largest truncation")
    return GrowthReport(params, p, q, float(t), (lo, hi), truncs, ratios, float(growth),
                        bool(growth >= GROWTH_THRESHOLD), bool(converged), notes)


__all__ = [
    "RadialOperator", "DiagonalSpectrum", "TailFit", "SpectralReport", "EulerJacobiResult",
    "WitnessFamily", "GrowthReport", "kalpha_coefficient", "kalpha_coefficients", "multiplicity",
    "radial_coefficient", "diagonal_spectrum", "apply_diagonal", "tail_extrapolation",
    "l2_spectral_report", "monotone_ratio_check", "euler_jacobi_check", "witness_window",
    "unboundedness_probe", "GROWTH_THRESHOLD",
]
