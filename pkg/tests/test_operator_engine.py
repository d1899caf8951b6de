import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from bergman_lab.errors import DomainError, NotHilbertSchmidtError
from bergman_lab.kernel_integrals import Params, trace_closed_form_d1
from bergman_lab.operator_engine import (
    GROWTH_THRESHOLD, RadialOperator, WitnessFamily, apply_diagonal, diagonal_spectrum,
    euler_jacobi_check, kalpha_coefficient, kalpha_coefficients, l2_spectral_report,
    monotone_ratio_check, multiplicity, radial_coefficient, tail_extrapolation,
    unboundedness_probe, witness_window,
)

mp.mp.dps = 30


@pytest.mark.parametrize("d,alpha", [(1, 0.3), (2, 2.5), (3, 1.0), (1, -0.5)])
def test_coefficients_vs_rising_factorials(d, alpha):
    p = Params(d, alpha)
    c = kalpha_coefficients(p, 300)
    ref = [float(mp.rf(alpha, n) / mp.rf(d + 1, n)) for n in (0, 1, 7, 300)]
    assert [c[0], c[1], c[7], c[300]] == pytest.approx(ref, rel=1e-12)
    assert kalpha_coefficient(p, 7) == pytest.approx(ref[2], rel=1e-14)


def test_large_degree_coefficient_uses_gamma_ratio():
    p = Params(2, 1.7)
    n = 10 ** 6
    ref = float(mp.rf(1.7, n) / mp.rf(3, n))
    assert kalpha_coefficient(p, n) == pytest.approx(ref, rel=1e-9)


def test_polynomial_kernel_coefficients_terminate():
    # alpha = -2: (1 - <z,w>)^2 only reaches degree 2
    c = kalpha_coefficients(Params(1, -2), 5)
    assert c == pytest.approx([1.0, -1.0, 1.0 / 3.0, 0.0, 0.0, 0.0])
    assert kalpha_coefficient(Params(1, -2), 1) == -1.0
    with pytest.raises(DomainError):
        kalpha_coefficient(Params(1, 1), -1)


def test_kalpha_on_monomial_by_quadrature():
    # K_alpha z^n at z0 by direct integration over the disc
    alpha, n, z0 = 0.7, 2, 0.5 + 0.1j

    def part(fn):
        def g(rho, t):
            w = rho * np.exp(1j * t)
            return fn(w ** n * (1 - z0 * np.conj(w)) ** (-alpha)) * rho / math.pi
        return integrate.dblquad(g, 0, 2 * math.pi, 0, 1, epsabs=1e-12, epsrel=1e-12)[0]

    got = part(np.real) + 1j * part(np.imag)
    coef = apply_diagonal(Params(1, alpha), [0, 0, 1])
    assert got == pytest.approx(coef[2] * z0 ** n, rel=1e-9)


def test_multiplicity():
    for d in (1, 2, 4):
        for n in (0, 3, 10):
            assert multiplicity(d, n) == pytest.approx(math.comb(n + d - 1, d - 1), rel=1e-12)


def test_radial_operator_reproduces_kalpha():
    p = Params(2, 1.3)
    op = RadialOperator(0.0, p.alpha - p.D)
    for n in (0, 5, 40):
        assert radial_coefficient(op, p, n) == pytest.approx(kalpha_coefficient(p, n), rel=1e-13)


def test_radial_operator_inverse():
    p = Params(1, 1)
    op = RadialOperator(0.5, 1.25)
    for n in (0, 3, 20):
        assert op.coefficient(p, n) * op.inverse().coefficient(p, n) == pytest.approx(1.0, rel=1e-13)
    with pytest.raises(DomainError):
        RadialOperator(-3.0, 0.0).coefficient(p, 2)


def test_apply_diagonal_extends_spectrum():
    p = Params(1, 1)
    spec = diagonal_spectrum(p, 4)
    out = apply_diagonal(spec, np.ones(10))
    assert out == pytest.approx(1.0 / np.arange(1, 11))
    assert spec.tail_bound > 0


@pytest.mark.parametrize("d,alpha,N", [(1, 0.5, 2000), (1, 1.2, 5000), (2, 1.4, 2000)])
def test_tail_estimate_and_bound(d, alpha, N):
    p = Params(d, alpha)
    total = float(mp.hyp3f2(alpha, alpha, d, d + 1, d + 1, 1))
    partial = float(mp.fsum(mp.binomial(n + d - 1, d - 1) * (mp.rf(alpha, n) / mp.rf(d + 1, n)) ** 2
                            for n in range(N + 1)))
    fit = tail_extrapolation(p, N)
    true_tail = total - partial
    assert fit.estimate == pytest.approx(true_tail, rel=1e-6)
    assert fit.bound >= true_tail
    assert fit.exponent == 2 * alpha - d - 3


def test_tail_rejects_non_summable():
    with pytest.raises(NotHilbertSchmidtError):
        tail_extrapolation(Params(1, 1.5), 1000)


def test_spectrum_of_k1_on_disc():
    rep = l2_spectral_report(Params(1, 1), N=10 ** 5, n_eigen=50)
    assert np.max(np.abs(rep.eigenvalues - 1.0 / np.arange(1, 52))) < 1e-15
    assert rep.norm == 1.0 and rep.argmax == 0
    assert rep.square_sum == pytest.approx(math.pi ** 2 / 6, rel=1e-10)
    assert rep.hilbert_schmidt
    assert any("limit point" in n for n in rep.notes)


def test_spectral_report_regimes():
    assert l2_spectral_report(Params(1, 2.5), N=1000).norm == math.inf
    rep = l2_spectral_report(Params(1, 2), N=1000)
    assert rep.norm == 1.0 and not rep.hilbert_schmidt and rep.square_sum == math.inf
    # alpha > D would need growing c_n; alpha < D has c_0 = 1 as the maximum
    assert l2_spectral_report(Params(3, 2.2), N=1000).norm == 1.0
    with pytest.raises(DomainError):
        l2_spectral_report(Params(1, 0), N=10)


@pytest.mark.parametrize("alpha,expected", [(0.5, "decreasing"), (1.5, "decreasing"),
                                            (2.0, "constant"), (2.5, "increasing")])
def test_monotone_ratio(alpha, expected):
    assert monotone_ratio_check(Params(1, alpha)) == expected


@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0, 1.3, 1.44])
def test_euler_jacobi_agrees(alpha):
    res = euler_jacobi_check(alpha, N=10 ** 6)
    assert res.status == "agree"
    assert res.residual < 1e-6
    assert res.closed_form == trace_closed_form_d1(alpha)


def test_euler_jacobi_domain():
    for bad in (0.0, 1.5, -1.0):
        with pytest.raises(DomainError):
            euler_jacobi_check(bad)


def test_witness_family_and_window():
    f = WitnessFamily(-0.5, 4).coefficients
    assert f == pytest.approx([0, 1, 2 ** -0.5, 3 ** -0.5, 0.5])
    lo, hi = witness_window(Params(1, 2), 2, 4)
    assert (lo, hi) == pytest.approx((-0.5, 0.0))


def test_probe_detects_blow_up_outside_region():
    # d = 1, alpha = 2, L^2 -> L^4 lies below the diagonal
    rep = unboundedness_probe(Params(1, 2), 2, 4)
    assert rep.blow_up and rep.growth >= GROWTH_THRESHOLD
    assert set(rep.as_dict()) >= {"t", "ratios", "growth", "blow_up"}


def test_probe_flat_inside_region():
    rep = unboundedness_probe(Params(1, 1), 2, 2)
    assert not rep.blow_up and rep.growth < 2.0
