"""Randomized and deterministic checks of the HLS bounds, weak type, and boundedness."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .ball_measure import (KernelAdaptedSampler, QuadratureEstimate,
                           radial_integral, sample_uniform, slice_norm)
from .classifier import ExponentPair, classify
from .errors import DivergenceError, DomainError
from .kernel_integrals import DistributionProfile, Params, lorentz_quasinorm
from .norm_bounds import NormBound, hls_constants
from .operator_engine import GROWTH_THRESHOLD, unboundedness_probe
from .special_fn import digamma, gamma_ratio, hyp2f1, hyp2f1_1mz


@dataclass
class VerificationReport:
    params: Params
    exponents: tuple
    n_trials: int
    seed: int
    max_ratio: float
    bound: NormBound
    violations: int
    curve: list = field(default_factory=list)  # (trial or family parameter, ratio, std error)

    def as_dict(self):
        return {
            "params": {"d": self.params.d, "alpha": self.params.alpha},
            "exponents": list(self.exponents),
            "n_trials": self.n_trials,
            "seed": self.seed,
            "max_ratio": self.max_ratio,
            "bound": None if self.bound is None else self.bound.as_dict(),
            "violations": self.violations,
            "curve": [[c[0], c[1]] for c in self.curve],
        }


N_SIGMA = 4.0


# ---------------------------------------------------------------------------
# Test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolynomialZ1:
    """sum_n c_n z_1^n."""

    coefficients: np.ndarray

    def __call__(self, w):
        return np.polyval(self.coefficients[::-1], w[:, 0])

    def norm(self, p, d):
        return slice_norm(self.coefficients, p, d)


@dataclass(frozen=True)
class RadialPower:
    """(1 - |z|^2)^-theta."""

    theta: float

    def __call__(self, w):
        return (1.0 - np.sum(np.abs(w) ** 2, axis=1)) ** (-self.theta)

    def norm(self, p, d):
        if math.isinf(p):
            if self.theta > 0:
                return math.inf
            return 1.0
        e = self.theta * p
        if e >= 1.0:
            return math.inf
        # int (1-|z|^2)^-e dv = Gamma(d+1) Gamma(1-e) / Gamma(d+1-e)
        return gamma_ratio((d + 1.0, 1.0 - e), (d + 1.0 - e,)) ** (1.0 / p)

    def kplus(self, params, r2):
        """K_alpha^+ f at |z|^2 = r2, in closed form."""
        d, a = params.d, params.alpha
        c = gamma_ratio((d + 1.0, 1.0 - self.theta), (d + 1.0 - self.theta,))
        return np.array([c * hyp2f1(a / 2.0, a / 2.0, d + 1.0 - self.theta, float(r))
                         for r in np.atleast_1d(r2)])


def _random_function(rng, p, d, max_degree=32):
    if rng.random() < 0.5:
        deg = int(rng.integers(0, max_degree + 1))
        return PolynomialZ1(rng.uniform(-1.0, 1.0, deg + 1))
    # stay below half the integrability threshold so sample variances are finite
    cap = 0.5 / p if not math.isinf(p) else 0.0
    return RadialPower(float(rng.uniform(0.0, cap)))


def _bilinear(params, f, g, rng, n_batches=16, n_outer=128, n_inner=256):
    """Estimate of int int |f(w)| |g(z)| |1 - <z,w>|^-alpha dv(w) dv(z)."""
    d, a = params.d, params.alpha
    if isinstance(g, RadialPower) and not isinstance(f, RadialPower):
        f, g = g, f
    if isinstance(f, RadialPower) and isinstance(g, RadialPower):
        th = g.theta
        value = radial_integral(lambda r: float(f.kplus(params, r)[0]) * (1.0 - r) ** (-th),
                                d)
        return QuadratureEstimate(value, 0.0, 0)
    means = []
    for _ in range(n_batches):
        z = sample_uniform(rng, n_outer, d)
        gz = np.abs(g(z))
        if isinstance(f, RadialPower):
            inner = f.kplus(params, np.sum(np.abs(z) ** 2, axis=1))
        else:
            w = sample_uniform(rng, n_inner, d)
            inner = _kernels.kernel_row_means(z, w, a, np.abs(f(w)))
        means.append(float(np.mean(gz * inner)))
    return QuadratureEstimate.from_samples(np.array(means))


def verify_hls(params, p, s, n_trials=200, seed=42):
    """Monte Carlo check of the HLS inequality with the closed-form constant.

    A trial is a violation when the estimated ratio exceeds the bound by more
    than N_SIGMA standard errors.
    """
    bound = hls_constants(params, p, s)
    p, s = float(p), float(s)
    children = np.random.SeedSequence(seed).spawn(n_trials)
    curve, violations, max_ratio = [], 0, 0.0
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        f = _random_function(rng, p, params.d)
        g = _random_function(rng, s, params.d)
        nf, ng = f.norm(p, params.d), g.norm(s, params.d)
        if not (nf > 0 and ng > 0):
            continue
        est = _bilinear(params, f, g, rng)
        ratio = est.value / (nf * ng)
        err = est.std_error / (nf * ng)
        curve.append((i, ratio, err))
        max_ratio = max(max_ratio, ratio)
        if ratio - N_SIGMA * err > bound.value:
            violations += 1
    return VerificationReport(params, (p, s), n_trials, seed, max_ratio, bound, violations, curve)


# ---------------------------------------------------------------------------
# Weak type along boundary bumps
# ---------------------------------------------------------------------------

def _cap_points(rng, n, centre, radius):
    """Uniform points of B^d inside the Euclidean ball of the given radius around centre."""
    d = centre.size
    out = np.empty((0, d), dtype=np.complex128)
    while out.shape[0] < n:
        w = centre + radius * sample_uniform(rng, 2 * n, d)
        w = w[np.sum(np.abs(w) ** 2, axis=1) < 1.0]
        out = np.concatenate([out, w])
    return out[:n]


@dataclass
class BumpMeasurement:
    k: int
    quasinorm: float
    strong_norm: float


def _kplus_bumps(params, centres, radii, masses, rng, n_z, n_inner):
    """Samples of K^+ f for f a mixture of normalized cap indicators.

    z is drawn by multiple importance sampling from samplers aimed at each
    centre; returns (values, weights dv/dP).
    """
    d, a = params.d, params.alpha
    samplers = [KernelAdaptedSampler(c, s=1.9, gamma=0.0) for c in centres]
    parts = [s.sample(rng, n_z // len(samplers))[0] for s in samplers]
    z = np.concatenate(parts)
    dens = np.mean([s.density(z) for s in samplers], axis=0)
    weight = 1.0 / dens
    values = np.zeros(z.shape[0])
    for c, rad, m in zip(centres, radii, masses):
        w = _cap_points(rng, n_inner, c, rad)
        values += m * _kernels.kernel_row_means(z, w, a)
    return values, weight


def _weak_quasinorm(values, weight, q):
    order = np.argsort(values)[::-1]
    v = values[order]
    mass = np.minimum(np.cumsum(weight[order]) / values.size, 1.0)
    lam = np.geomspace(max(v[-1], 1e-300), v[0], 512)
    # mass of {K^+ f > lambda}
    idx = np.searchsorted(-v, -lam, side="left")
    masses = np.where(idx > 0, mass[np.maximum(idx - 1, 0)], 0.0)
    return lorentz_quasinorm(DistributionProfile(lam, np.minimum.accumulate(masses)), q)


def _strong_norm(params, values, weight, q, centre, radius, rng, n_inner):
    if q == 1.0:
        # Fubini: ||K^+ f||_1 is the cap average of the kernel mass
        w = _cap_points(rng, n_inner, centre, radius)
        t = 1.0 - np.sum(np.abs(w) ** 2, axis=1)
        km = np.array([hyp2f1_1mz(params.alpha / 2, params.alpha / 2, params.D, ti) for ti in t])
        return float(np.mean(km))
    return float(np.mean(values ** q * weight)) ** (1.0 / q)


def concentrating_bumps(params, ks=range(1, 9), seed=42, n_z=40_000, n_inner=512):
    """Weak and strong L^{(d+1)/alpha} norms of K^+ f_k, f_k the normalized cap of radius 2^-k."""
    a, D = params.alpha, params.D
    if not 0 < a <= D:
        raise DomainError("weak type needs 0 < alpha <= d + 1")
    q = D / a
    centre = np.zeros(params.d, dtype=np.complex128)
    centre[0] = 1.0
    out = []
    for k, child in zip(ks, np.random.SeedSequence(seed).spawn(len(ks))):
        rng = np.random.default_rng(child)
        rad = 2.0 ** (-k)
        values, weight = _kplus_bumps(params, [centre], [rad], [1.0], rng, n_z, n_inner)
        weak = _weak_quasinorm(values, weight, q)
        strong = _strong_norm(params, values, weight, q, centre, rad, rng, 8 * n_inner)
        out.append(BumpMeasurement(int(k), weak, strong))
    return out


def verify_weak_type(params, n_trials=20, seed=42, n_z=20_000, n_inner=256):
    """Empirical weak-type constant over random mixtures of boundary caps (||f||_1 = 1)."""
    a, D = params.alpha, params.D
    if not 0 < a <= D:
        raise DomainError("weak type needs 0 < alpha <= d + 1")
    q = D / a
    curve = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(n_trials)):
        rng = np.random.default_rng(child)
        m = int(rng.integers(1, 4))
        centres = []
        for _ in range(m):
            u = sample_uniform(rng, 1, params.d)[0]
            centres.append(u / np.linalg.norm(u))
        radii = 2.0 ** (-rng.integers(1, 9, size=m).astype(float))
        masses = rng.dirichlet(np.ones(m))
        values, weight = _kplus_bumps(params, centres, radii, masses, rng, n_z, n_inner)
        curve.append((i, _weak_quasinorm(values, weight, q), 0.0))
    max_ratio = max(c[1] for c in curve)
    return VerificationReport(params, (1.0, q), n_trials, seed, max_ratio, None, 0, curve)


# ---------------------------------------------------------------------------
# Deterministic lower-bound families for ||K_alpha||_{L^p -> L^q}
# ---------------------------------------------------------------------------

def _log_hyp_1mz(beta, c, rho, log_rho):
    """log 2F1(beta, beta; c; 1 - rho) for beta, c > 0, stable for tiny rho."""
    m = c - 2.0 * beta
    if m < 0.0:
        # Euler: (rho)^m 2F1(c - beta, c - beta; c; 1 - rho), the latter finite at rho = 0
        return m * log_rho + math.log(hyp2f1_1mz(c - beta, c - beta, c, rho))
    if m == 0.0 and rho < 1e-12:
        # logarithmic growth: Gamma(c)/Gamma(beta)^2 (log(1/rho) + 2 psi(1) - 2 psi(beta))
        lead = gamma_ratio((c,), (beta, beta))
        return math.log(lead * (-log_rho + 2.0 * digamma(1.0) - 2.0 * digamma(beta)))
    return math.log(hyp2f1_1mz(beta, beta, c, rho))


def _log_berezin_ratio(params, x, y, log_rho):
    """log ||k_alpha(., z0)||_q - log ||f_z0||_p for the bump with 1 - |z0|^2 = rho.

    f_z0(w) = (1-|z0|^2)^D |1 - <w, z0>|^-2D satisfies K_alpha f_z0 = k_alpha(., z0),
    and |K_alpha f| <= K_alpha^+ f for f >= 0.
    """
    D, a = params.D, params.alpha
    rho = math.exp(log_rho)
    # log(1 - |z0|) = log(rho / (1 + sqrt(1 - rho)))
    log_gap = log_rho - math.log1p(math.sqrt(1.0 - rho))
    if x == 0.0:
        log_f = D * log_rho - 2.0 * D * log_gap
    else:
        p = 1.0 / x
        log_f = D * log_rho + _log_hyp_1mz(D * p, D, rho, log_rho) / p
    if y == 0.0:
        log_k = -a * log_gap if a > 0 else -a * math.log1p(math.sqrt(1.0 - rho))
    else:
        q = 1.0 / y
        if q * a / 2.0 <= 0.0:
            log_k = math.log(hyp2f1_1mz(q * a / 2.0, q * a / 2.0, D, rho)) / q
        else:
            log_k = _log_hyp_1mz(q * a / 2.0, D, rho, log_rho) / q
    return log_k - log_f


def _radial_ratio(params, x, y, e):
    """||K^+ f_theta||_q / ||f_theta||_p for f_theta = (1-|z|^2)^-theta, 1 - theta p = e."""
    d, D, a = params.d, params.D, params.alpha
    theta = 0.0 if x == 0.0 else (1.0 - e) * x
    if x == 0.0:
        log_f = 0.0
    else:
        # ||f||_p^p = Gamma(D) Gamma(1 - theta p) / Gamma(D - theta p), with 1 - theta p = e
        log_f = x * (math.lgamma(D) + math.lgamma(e) - math.lgamma(D - 1.0 + e))
    c = gamma_ratio((D, 1.0 - theta), (D - theta,))
    mu = a + theta - D  # boundary growth exponent of K^+ f_theta
    if y == 0.0:
        if mu >= 0.0:
            return math.inf
        return c * hyp2f1(a / 2.0, a / 2.0, D - theta, 1.0) / math.exp(log_f)
    q = 1.0 / y
    if q * mu >= 1.0:
        return math.inf
    cp = D - theta
    if mu > 0.0:
        # 2F1(a/2, a/2; cp; r) = (1-r)^-mu 2F1(cp - a/2, cp - a/2; cp; r)
        b = cp - a / 2.0
        val = radial_integral(lambda t: hyp2f1_1mz(b, b, cp, t) ** q, d,
                              boundary_power=-q * mu, complement=True)
    else:
        val = radial_integral(lambda t: hyp2f1_1mz(a / 2.0, a / 2.0, cp, t) ** q, d,
                              complement=True)
    return c * val ** y / math.exp(log_f)


@dataclass
class FamilyCurve:
    name: str
    parameters: list
    ratios: list
    verdict: str  # "blow-up", "converging" or "indeterminate"


@dataclass
class BoundednessProbe:
    params: Params
    exponents: ExponentPair
    verdict: str  # "blow-up-detected", "consistent-with-bounded", "indeterminate"
    classified_bounded: bool
    agrees: bool
    families: list

    def as_dict(self):
        return {
            "exponents": list(self.exponents.label()),
            "verdict": self.verdict,
            "classified_bounded": self.classified_bounded,
            "agrees": self.agrees,
            "families": [{"name": f.name, "parameters": list(f.parameters),
                          "ratios": list(f.ratios), "verdict": f.verdict}
                         for f in self.families],
        }


def _exp(x):
    return math.exp(x) if x < 700.0 else math.inf


def _judge(ratios):
    if any(math.isinf(r) for r in ratios):
        return "blow-up"
    first = ratios[0]
    if first > 0 and max(ratios) / first >= GROWTH_THRESHOLD:
        return "blow-up"
    if len(ratios) < 3:
        return "converging"
    d1 = ratios[-1] - ratios[-2]
    d0 = ratios[-2] - ratios[-3]
    # a falling tail is bounded by what came before
    if d1 <= 1e-3 * abs(ratios[-1]) and d0 <= 1e-3 * abs(ratios[-2]):
        return "converging"
    if abs(d1) <= 0.5 * abs(d0):
        return "converging"
    return "indeterminate"


def probe_boundedness(params, e, seed=42, n_points=10, use_witness=True):
    """Empirical boundedness verdict from explicit lower-bound families.

    (i) bumps f_z0 with |z0| -> 1 (1 - |z0|^2 = 2^-2^k); (ii) radial powers
    approaching the L^p threshold; (iii) family (i) for the adjoint at the
    conjugate pair.  If none of them settles, the witness series of
    operator_engine is tried.  ``seed`` is recorded for interface
    uniformity: these families are deterministic.
    """
    x, y = float(e.inv_p), float(e.inv_q)
    ks = range(1, n_points + 1)
    families = []
    log_rhos = [-(2.0 ** k) * math.log(2.0) for k in ks]
    families.append(FamilyCurve("bump", log_rhos,
                                [_exp(_log_berezin_ratio(params, x, y, lr)) for lr in log_rhos],
                                ""))
    ce = e.conjugate()
    cx, cy = float(ce.inv_p), float(ce.inv_q)
    families.append(FamilyCurve("dual-bump", log_rhos,
                                [_exp(_log_berezin_ratio(params, cx, cy, lr)) for lr in log_rhos],
                                ""))
    es = [4.0 ** (-k) for k in ks] if x > 0 else [1.0]
    rad = []
    for ev in es:
        try:
            rad.append(_radial_ratio(params, x, y, ev))
        except DivergenceError:
            rad.append(math.inf)
    families.append(FamilyCurve("radial", es, rad, ""))
    for fam in families:
        fam.verdict = _judge(fam.ratios)
    verdicts = {f.verdict for f in families}
    if "blow-up" not in verdicts and "indeterminate" in verdicts and use_witness \
            and params.alpha > 0 and x > 0 and y > 0:
        rep = unboundedness_probe(params, 1.0 / x, 1.0 / y)
        fam = FamilyCurve("witness", rep.truncations, rep.ratios,
                          "blow-up" if rep.blow_up else _judge(rep.ratios))
        families.append(fam)
        verdicts.add(fam.verdict)
    if "blow-up" in verdicts:
        verdict = "blow-up-detected"
    elif verdicts == {"converging"}:
        verdict = "consistent-with-bounded"
    else:
        verdict = "indeterminate"
    bounded = classify(params, e).bounded
    agrees = (verdict == "blow-up-detected") != bounded if verdict != "indeterminate" else False
    return BoundednessProbe(params, e, verdict, bounded, agrees, families)


__all__ = [
    "VerificationReport", "PolynomialZ1", "RadialPower", "BumpMeasurement", "FamilyCurve",
    "BoundednessProbe", "verify_hls", "verify_weak_type", "concentrating_bumps",
    "probe_boundedness", "N_SIGMA",
]
