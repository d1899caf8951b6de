import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from bergman_lab.errors import DivergenceError, DomainError
from bergman_lab.special_fn import (
    HyperParams, beta, digamma, gamma_ratio, gamma_sign, hyp2f1, hyp2f1_1mz, hyp2f1_array,
    hyp2f1_derivative, log_gamma, pochhammer,
)

mp.mp.dps = 40


def _ref(a, b, c, z):
    return float(mp.hyp2f1(a, b, c, z))


def test_log_gamma_matches_mpmath():
    for x in (1e-8, 0.3, 1.0, 2.5, 17.25, 1e5):
        assert log_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-14, abs=1e-14)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-1.5)


def test_gamma_sign_and_ratio():
    assert gamma_sign(-0.5) == -1.0
    assert gamma_sign(-1.5) == 1.0
    with pytest.raises(DomainError):
        gamma_sign(-2.0)
    assert gamma_ratio((-0.5,), (1.5,)) == pytest.approx(float(mp.gamma(-0.5) / mp.gamma(1.5)),
                                                          rel=1e-14)
    assert gamma_ratio((2.0,), (-3.0,)) == 0.0
    with pytest.raises(DomainError):
        gamma_ratio((0.0,), (1.0,))


def test_pochhammer_beta_digamma():
    assert pochhammer(0.5, 6) == pytest.approx(float(mp.rf(0.5, 6)), rel=1e-15)
    assert pochhammer(3.0, 0) == 1.0
    assert beta(2.5, 0.75) == pytest.approx(float(mp.beta(2.5, 0.75)), rel=1e-14)
    assert digamma(0.25) == pytest.approx(float(mp.digamma(0.25)), rel=1e-14)


CASES = [
    (0.5, 0.5, 1.0, 0.3),
    (1.0, 1.0, 2.0, 0.9),
    (0.25, 0.75, 1.5, 0.999),
    (2.5, 2.5, 2.0, 0.99),          # c - a - b = -3
    (1.5, 1.5, 3.0, 0.9999),        # c - a - b = 0, logarithmic
    (1.2, 1.2, 2.0, 0.95),          # c - a - b = -0.4
    (1.0, 1.0, 3.0, 0.99999999),    # c - a - b = 1, logarithmic
    (0.7, 0.8, 2.5005, 0.97),       # near-integer excess
    (3.0, 2.0, 1.0, 0.6),
    (-3.0, 1.5, 2.0, 1.0),          # terminating
    (0.3, 0.4, 5.0, 1.0),           # Gauss sum
]


@pytest.mark.parametrize("a,b,c,z", CASES)
def test_hyp2f1_against_mpmath(a, b, c, z):
    assert hyp2f1(a, b, c, z) == pytest.approx(_ref(a, b, c, z), rel=1e-12)


@pytest.mark.parametrize("a,b,c,z", CASES)
def test_hyp2f1_both_backends(a, b, c, z, backend):
    assert hyp2f1(a, b, c, z) == pytest.approx(_ref(a, b, c, z), rel=1e-12)


def test_hyp2f1_accepts_params_object():
    hp = HyperParams(0.5, 0.5, 1.0, 0.5)
    assert hyp2f1(hp) == hyp2f1(0.5, 0.5, 1.0, 0.5)
    assert hp.excess == 0.0


def test_hyp2f1_divergent_at_one():
    with pytest.raises(DivergenceError):
        hyp2f1(1.0, 1.0, 2.0, 1.0)


@pytest.mark.parametrize("bad", [(1.0, 1.0, -2.0, 0.5), (1.0, 1.0, 2.0, 1.5),
                                 (1.0, 1.0, 2.0, -0.1), (math.nan, 1.0, 2.0, 0.5)])
def test_hyp2f1_domain(bad):
    with pytest.raises(DomainError):
        hyp2f1(*bad)


@pytest.mark.parametrize("w", [1e-3, 1e-8, 1e-14, 1e-30])
def test_complement_argument_keeps_precision(w):
    a, b, c = 1.25, 1.25, 2.0
    ref = float(mp.hyp2f1(a, b, c, 1 - mp.mpf(w)))
    assert hyp2f1_1mz(a, b, c, w) == pytest.approx(ref, rel=1e-11)


def test_array_and_derivative():
    z = [0.1, 0.5, 0.95]
    out = hyp2f1_array(0.5, 1.5, 2.0, z)
    assert list(out) == [hyp2f1(0.5, 1.5, 2.0, t) for t in z]
    fd = float(mp.diff(lambda t: mp.hyp2f1(0.6, 0.9, 2.2, t), 0.7))
    assert hyp2f1_derivative(0.6, 0.9, 2.2, 0.7) == pytest.approx(fd, rel=1e-12)
    assert hyp2f1(0.6, 0.9, 2.2, 0.0) == 1.0
    with pytest.raises(DomainError):
        hyp2f1_derivative(0.6, 0.9, 2.2, 1.0)


@settings(max_examples=150, deadline=None)
@given(a=st.floats(0.05, 3.0), b=st.floats(0.05, 3.0), c=st.floats(0.5, 4.0),
       z=st.floats(0.0, 0.999))
def test_hyp2f1_random(a, b, c, z):
    assert hyp2f1(a, b, c, z) == pytest.approx(_ref(a, b, c, z), rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.1, 2.0), c=st.floats(1.0, 4.0), z=st.floats(0.0, 0.95))
def test_euler_transformation_holds(a, c, z):
    # 2F1(a, b; c; z) = (1 - z)^(c - a - b) 2F1(c - a, c - b; c; z)
    b = 0.5 * a + 0.3
    lhs = hyp2f1(a, b, c, z)
    rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
    assert lhs == pytest.approx(rhs, rel=1e-10)
