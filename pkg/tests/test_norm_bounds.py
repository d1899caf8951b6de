import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from bergman_lab.ball_measure import radial_integral
from bergman_lab.classifier import ExponentPair
from bergman_lab.errors import DivergenceError, DomainError
from bergman_lab.kernel_integrals import Params
from bergman_lab.norm_bounds import (
    NormBound, extremal_probe, hls_constants, interpolate_norm, norm_l1_to_lq,
    norm_linf_to_l1_exact_d1, norm_lp_to_linf, upper_bound_general, upper_bound_linf_to_lq,
)
from bergman_lab.special_fn import hyp2f1_1mz

mp.mp.dps = 30


def _sup_kernel_norm(d, alpha, q):
    # lim_{|z|->1} int |k_alpha(z, w)|^q dv = Gamma(D) Gamma(D - q alpha) / Gamma(D - q alpha / 2)^2
    D = d + 1
    return float((mp.gamma(D) * mp.gamma(D - q * alpha) / mp.gamma(D - q * alpha / 2) ** 2) ** (
        mp.mpf(1) / q))


def test_l1_to_lq_value():
    b = norm_l1_to_lq(Params(1, 1), 1.5)
    assert b.kind == "exact" and b.source == "Lem-ld1"
    assert b.value == pytest.approx(_sup_kernel_norm(1, 1, 1.5), rel=1e-13)
    assert b.exponents == ExponentPair(Fraction(1), Fraction(2, 3))


def test_lp_to_linf_value_and_duality():
    p = Params(2, 1.5)
    for pp in (3.0, 7.5, math.inf):
        a = norm_lp_to_linf(p, pp)
        b = norm_l1_to_lq(p, 1.0 if math.isinf(pp) else pp / (pp - 1))
        # the L^p -> L^inf norm equals the L^1 -> L^{p'} norm of the adjoint
        assert a.value == b.value
    assert norm_lp_to_linf(Params(1, 1), 4).value == pytest.approx(
        _sup_kernel_norm(1, 1, 4 / 3), rel=1e-13)


def test_bergman_projection_l1_norm():
    # d = 1, alpha = 1, q = 1: 4/pi
    assert norm_l1_to_lq(Params(1, 1), 1).value == pytest.approx(4 / math.pi, rel=1e-14)


@pytest.mark.parametrize("call", [
    lambda: norm_l1_to_lq(Params(1, 1), 2),
    lambda: norm_lp_to_linf(Params(1, 1), 2),
    lambda: norm_lp_to_linf(Params(1, 1), 1),
])
def test_exact_norms_diverge_outside(call):
    with pytest.raises(DivergenceError):
        call()


def test_exact_norm_domains():
    with pytest.raises(DomainError):
        norm_l1_to_lq(Params(1, 3), 1)
    with pytest.raises(DomainError):
        norm_l1_to_lq(Params(1, 1), 0.5)
    with pytest.raises(DomainError):
        norm_lp_to_linf(Params(1, 2), 3)


@pytest.mark.parametrize("alpha", [2.2, 2.5, 2.8])
def test_linf_to_l1_matches_mass_quadrature(alpha):
    b = norm_linf_to_l1_exact_d1(alpha)
    quad = radial_integral(lambda t: hyp2f1_1mz(alpha / 2, alpha / 2, 2.0, t), 1, complement=True)
    assert b.value == pytest.approx(quad, rel=1e-10)
    assert b.kind == "exact" and b.source == "Eq-eme"
    assert norm_linf_to_l1_exact_d1(alpha, operator="signed").kind == "upper"
    with pytest.raises(DomainError):
        norm_linf_to_l1_exact_d1(2.0)


def test_linf_to_l1_matches_mpmath():
    alpha = 2.5
    ref = mp.quad(lambda r: mp.hyp2f1(alpha / 2, alpha / 2, 2, r), [0, 0.5, 0.99, 1])
    assert norm_linf_to_l1_exact_d1(alpha).value == pytest.approx(float(ref), rel=1e-8)


def test_linf_to_lq_bound_dominates_kernel_mass():
    # ||K^+ 1||_q is a lower bound for the L^inf -> L^q norm
    p, q = Params(1, 2.5), 1.5
    b = upper_bound_linf_to_lq(p, q)
    val = radial_integral(lambda t: hyp2f1_1mz(1.25, 1.25, 2.0, t) ** q, 1,
                          complement=True) ** (1 / q)
    assert b.value >= val
    with pytest.raises(DivergenceError):
        upper_bound_linf_to_lq(p, 2.0)
    with pytest.raises(DomainError):
        upper_bound_linf_to_lq(Params(1, 1), 2.0)


def test_upper_bound_general_regimes():
    e = ExponentPair(Fraction(1, 2), Fraction(1, 2))
    b = upper_bound_general(Params(1, 1), e)
    assert b.source == "Eq-iek" and b.kind == "upper"
    # |1 - <z,w>| <= 2, so alpha = -1 gives the sup bound 2
    assert upper_bound_general(Params(1, -1), e).value == 2.0
    e2 = ExponentPair(Fraction(1, 4), Fraction(3, 4))
    assert upper_bound_general(Params(1, 1), e2).source == "Eq-iek+embedding"
    assert upper_bound_general(Params(1, "5/2"), ExponentPair(Fraction(0), Fraction(1))).source == (
        "Eq-nom")
    with pytest.raises(DivergenceError):
        upper_bound_general(Params(1, 1), ExponentPair(Fraction(1), Fraction(1, 2)))
    with pytest.raises(DomainError):
        # bounded but on the critical line
        upper_bound_general(Params(1, 1), ExponentPair(Fraction(3, 4), Fraction(1, 4)))


def test_l2_bound_not_below_true_norm():
    # ||K_alpha||_{2->2} = 1 for alpha <= D; an upper bound cannot undercut it
    for alpha in (0.5, 1.0, 1.5):
        b = upper_bound_general(Params(1, alpha), ExponentPair(Fraction(1, 2), Fraction(1, 2)))
        assert b.value >= 1.0


def test_interpolation():
    b1 = NormBound(2.0, "upper", "A", ExponentPair(Fraction(1), Fraction(1)))
    b2 = NormBound(8.0, "upper", "B", ExponentPair(Fraction(0), Fraction(0)))
    mid = interpolate_norm(b1, b2, Fraction(1, 2), ExponentPair(Fraction(1, 2), Fraction(1, 2)))
    assert mid.value == pytest.approx(4.0)
    assert mid.exponents == ExponentPair(Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(DomainError):
        interpolate_norm(b1, b2, Fraction(1, 3), ExponentPair(Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(DomainError):
        interpolate_norm(b1, b2, 2)


def test_norm_bound_validation():
    with pytest.raises(ValueError):
        NormBound(1.0, "guess", "x")
    with pytest.raises(ValueError):
        NormBound(0.0, "exact", "x")
    assert NormBound(1.0, "exact", "x").as_dict() == {"value": 1.0, "kind": "exact", "source": "x"}


def test_hls_constants():
    c2 = hls_constants(Params(1, 1), 2, 2)
    assert c2.source.startswith("Cor-C2") and c2.value == pytest.approx(4 / math.pi, rel=1e-12)
    c1 = hls_constants(Params(1, "12/5"), 4, 4)
    assert c1.source == "Cor-C1" and c1.value == pytest.approx(5.8835, abs=1e-4)
    with pytest.raises(DomainError):
        hls_constants(Params(1, "12/5"), 1.2, 1.2)
    with pytest.raises(DomainError):
        hls_constants(Params(1, 4), 2, 2)


@pytest.mark.parametrize("kind,d,alpha,e", [("l1_to_lq", 1, 1.0, 1.5), ("lp_to_linf", 2, 1.5, 3.0)])
def test_extremal_probe_approaches_exact(kind, d, alpha, e):
    p = Params(d, alpha)
    exact = (norm_l1_to_lq(p, e) if kind == "l1_to_lq" else norm_lp_to_linf(p, e)).value
    est, r = extremal_probe(p, kind, e, np.random.default_rng(5), n=200_000)
    assert 0 < r < 1
    assert abs(est.value - exact) <= 0.1 * exact
    with pytest.raises(DomainError):
        extremal_probe(p, "other", e, np.random.default_rng(0))
