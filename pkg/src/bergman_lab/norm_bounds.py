"""Closed-form operator norms and upper bounds for K_alpha and K_alpha^+.

All Gamma products are formed as sums of lgamma values and exponentiated
once at the end.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .ball_measure import QuadratureEstimate
from .classifier import ExponentPair, classify, parse_exponent
from .errors import DivergenceError, DomainError
from .kernel_integrals import Params, mc_rudin_integral, rudin_integral, trace_closed_form_d1


@dataclass(frozen=True)
class NormBound:
    value: float
    kind: str  # "exact" or "upper"
    source: str
    exponents: ExponentPair = None

    def __post_init__(self):
        if self.kind not in ("exact", "upper"):
            raise ValueError(f"kind must be exact or upper, got {self.kind!r}")
        if not self.value > 0:
            raise ValueError("norm bound must be positive")

    def as_dict(self):
        out = {"value": self.value, "kind": self.kind, "source": self.source}
        if self.exponents is not None:
            out["exponents"] = list(self.exponents.label())
        return out


def _lg(x):
    if not x > 0:
        raise DivergenceError(f"Gamma argument {x} is not positive: the norm is infinite")
    return math.lgamma(x)


def _log_mass_boundary(D, a):
    """log of Gamma(D) Gamma(D - a) / Gamma(D - a/2)^2."""
    return _lg(D) + _lg(D - a) - 2.0 * _lg(D - a / 2.0)


def norm_l1_to_lq(params, q):
    """||K_alpha||_{L^1 -> L^q} = sup_z ||k_alpha(z, .)||_q, attained as |z| -> 1."""
    a, D = params.alpha, params.D
    q = float(q)
    if not 0 < a <= D:
        raise DomainError("norm_l1_to_lq needs 0 < alpha <= d + 1")
    if q < 1:
        raise DomainError("q must be >= 1")
    if not q * a < D:
        raise DivergenceError(f"q = {q} >= (d+1)/alpha: K_alpha is unbounded L^1 -> L^q")
    value = math.exp(_log_mass_boundary(D, q * a) / q)
    e = ExponentPair(Fraction(1), parse_exponent(q))
    return NormBound(value, "exact", "Lem-ld1", e)


def norm_lp_to_linf(params, p):
    """||K_alpha||_{L^p -> L^inf} = ||K_alpha^+||_{L^p -> L^inf}."""
    a, D = params.alpha, params.D
    p = float(p)
    if not 0 < a < D:
        raise DomainError("norm_lp_to_linf needs 0 < alpha < d + 1")
    if p <= 1:
        raise DivergenceError("p = 1: K_alpha is unbounded L^1 -> L^inf")
    pc = 1.0 if math.isinf(p) else p / (p - 1.0)
    if not pc * a < D:
        raise DivergenceError(f"p = {p} <= (d+1)/(d+1-alpha): unbounded into L^inf")
    value = math.exp(_log_mass_boundary(D, pc * a) / pc)
    e = ExponentPair(parse_exponent(p), Fraction(0))
    return NormBound(value, "exact", "Eq-iiek", e)


def norm_linf_to_l1_exact_d1(alpha, operator="plus"):
    """||K_alpha^+||_{L^inf -> L^1} on the disc for 2 < alpha < 3.

    Equal to the integral of the kernel mass over the disc.  For the signed
    operator (operator="signed") the same number is reported as an upper bound.
    """
    alpha = float(alpha)
    if not 2.0 < alpha < 3.0:
        raise DomainError("norm_linf_to_l1_exact_d1 needs 2 < alpha < 3")
    # identical to the d = 1 trace formula at alpha / 2
    value = trace_closed_form_d1(alpha / 2.0)
    kind = "exact" if operator == "plus" else "upper"
    return NormBound(value, kind, "Eq-eme", ExponentPair(Fraction(0), Fraction(1)))


def _log_nm(D, a, inv_q):
    """log of the L^inf -> L^Q bound for d+1 < alpha < d+2, with 1/Q = inv_q."""
    m = a - D
    lead = (1.0 + inv_q) * _lg(D) + _lg(m) - 2.0 * _lg(a / 2.0)
    if inv_q == 0.0:
        raise DivergenceError("Q = inf is outside the admissible range")
    Q = 1.0 / inv_q
    return lead + inv_q * (_lg(Q * (D - a) + 1.0) - _lg(Q * (D - a) + D))


def upper_bound_linf_to_lq(params, q):
    a, D = params.alpha, params.D
    q = float(q)
    if not D < a < D + 1:
        raise DomainError("upper_bound_linf_to_lq needs d+1 < alpha < d+2")
    if not q * (a - D) < 1.0:
        raise DivergenceError(f"q = {q} >= 1/(alpha - (d+1)): unbounded")
    value = math.exp(_log_nm(D, a, 1.0 / q))
    return NormBound(value, "upper", "Eq-nm", ExponentPair(Fraction(0), parse_exponent(q)))


def _alno(D, a, delta):
    """(Gamma(D) Gamma(D - a/(1-delta)) / Gamma(D - a/(2(1-delta)))^2)^(1-delta)."""
    w = 1.0 - delta
    return math.exp(w * _log_mass_boundary(D, a / w))


def upper_bound_general(params, e):
    """Best closed-form upper bound on ||K_alpha^+||_{L^p -> L^q} available here."""
    verdict = classify(params, e)
    if not verdict.bounded:
        raise DivergenceError(f"K_alpha is unbounded at {e.label()} ({verdict.clause})")
    a, D = params.alpha, params.D
    x, y = float(e.inv_p), float(e.inv_q)
    if a <= 0:
        # |1 - <z,w>|^(-alpha) <= 2^(-alpha), and L^p -> L^1 -> L^inf -> L^q is contractive
        return NormBound(2.0 ** (-a), "upper", "Cor-gke-sup", e)
    if a > D:
        return NormBound(math.exp(_log_nm(D, a, y - x)), "upper", "Eq-nom", e)
    x_t = 1.0 - a / D
    if a < D and x - x_t < y <= x:
        return NormBound(_alno(D, a, x - y), "upper", "Eq-iek", e)
    if a < D and y > x:
        # L^p -> L^p bound followed by the contractive inclusion L^p -> L^q
        return NormBound(_alno(D, a, 0.0), "upper", "Eq-iek+embedding", e)
    raise DomainError(f"no closed-form bound at {e.label()}: the point lies on the critical "
                      "line (or alpha = d+1)")


def interpolate_norm(b1, b2, theta, target=None):
    """M1^theta M2^(1-theta) at the theta-combination of the two exponent pairs."""
    theta = Fraction(theta)
    if not 0 <= theta <= 1:
        raise DomainError("theta must lie in [0, 1]")
    e = None
    if b1.exponents is not None and b2.exponents is not None:
        e1, e2 = b1.exponents, b2.exponents
        e = ExponentPair(theta * e1.inv_p + (1 - theta) * e2.inv_p,
                         theta * e1.inv_q + (1 - theta) * e2.inv_q)
        if target is not None and (target.inv_p, target.inv_q) != (e.inv_p, e.inv_q):
            raise DomainError(f"target {target.label()} is not the theta-combination {e.label()}")
    elif target is not None:
        raise DomainError("bounds carry no exponents to check the target against")
    t = float(theta)
    value = math.exp(t * math.log(b1.value) + (1.0 - t) * math.log(b2.value))
    return NormBound(value, "upper", f"Lem-int({b1.source},{b2.source})", e)


def hls_constants(params, p, s):
    """Upper bounds on the best constants of the two HLS inequalities."""
    a, D = params.alpha, params.D
    ip, is_ = float(parse_exponent(p)), float(parse_exponent(s))
    e = ExponentPair(parse_exponent(p), 1 - parse_exponent(s))  # L^p -> L^{s'}
    if D < a < D + 1:
        if not (0.0 < ip < 1.0 and 0.0 < is_ < 1.0):
            raise DomainError("HLS 1 needs 1 < p, s < inf")
        if not is_ + ip + a < D + 1:
            raise DomainError("HLS 1 needs 1/s + 1/p + alpha < d + 2")
        value = math.exp(_log_nm(D, a, 1.0 - is_ - ip))
        return NormBound(value, "upper", "Cor-C1", e)
    if a > D:
        raise DomainError("no HLS inequality for alpha >= d + 2")
    if not is_ + ip + a / D <= 2.0:
        raise DomainError("HLS 2 needs 1/s + 1/p + alpha/(d+1) <= 2")
    if a <= 0:
        return NormBound(2.0 ** (-a), "upper", "Cor-gke-sup", e)
    one_minus = 1.0 - is_
    if ip < one_minus:
        if a == D:
            raise DivergenceError("case p' > s has no finite constant at alpha = d + 1")
        return NormBound(_alno(D, a, 0.0), "upper", "Cor-C2(1)", e)
    if ip - (1.0 - a / D) < one_minus <= ip:
        # the outer exponent is 1 - (1/p - 1/s') = 2 - 1/p - 1/s
        return NormBound(_alno(D, a, ip - one_minus), "upper", "Cor-C2(2)", e)
    raise DomainError("no closed-form HLS 2 constant on the critical line")


# ---------------------------------------------------------------------------
# Extremal probes
# ---------------------------------------------------------------------------

PROBE_APPROACH = 0.02


def _probe_radius(params, power, rel=PROBE_APPROACH):
    """Smallest r = 1 - 10^-k whose closed-form kernel power mass is within rel of the sup."""
    a, D = params.alpha, params.D
    target = math.exp(_log_mass_boundary(D, power * a))
    for k in range(1, 15):
        r = 1.0 - 10.0 ** (-k)
        if rudin_integral(params, power * a / 2.0, 0.0, r) >= (1.0 - rel) * target:
            return r
    raise DomainError("sup not approached before |z|^2 = 1 - 1e-14")


def extremal_probe(params, kind, exponent, rng, n=200_000):
    """Monte Carlo lower estimate of the exact norm from the extremal family.

    kind="l1_to_lq": K applied to a bump shrinking to z0 gives k_alpha(z0, .),
    so the ratio tends to ||k_alpha(z0, .)||_q.
    kind="lp_to_linf": f = |k_alpha(z0, .)|^(p'-1) gives |K f(z0)| / ||f||_p =
    ||k_alpha(z0, .)||_{p'} by equality in Hoelder.
    Returns (QuadratureEstimate of the ratio, r = |z0|^2).
    """
    p = float(exponent)
    if kind == "l1_to_lq":
        power = p
    elif kind == "lp_to_linf":
        power = 1.0 if math.isinf(p) else p / (p - 1.0)
    else:
        raise DomainError(f"unknown probe kind {kind!r}")
    r = _probe_radius(params, power)
    est = mc_rudin_integral(params, power * params.alpha / 2.0, 0.0, r, n, rng)
    value = est.value ** (1.0 / power)
    # delta method for the 1/power root
    err = value * est.std_error / (power * est.value)
    return QuadratureEstimate(value, err, est.n_samples), r


__all__ = [
    "NormBound", "norm_l1_to_lq", "norm_lp_to_linf", "norm_linf_to_l1_exact_d1",
    "upper_bound_linf_to_lq", "upper_bound_general", "interpolate_norm", "hls_constants",
    "extremal_probe", "PROBE_APPROACH",
]
