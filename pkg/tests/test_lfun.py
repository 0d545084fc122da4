"""Zeta, Dirichlet series, gamma factors and the approximate functional equation."""
import math

import mpmath
import pytest
from mpmath import mp, mpf

from qeverify import lfun
from qeverify.special_core import DomainError

HALF = mpf(1) / 2


def rel(a, b):
    return abs(a - b) / abs(b)


def test_lambda_divisor_examples():
    assert lfun.lambda_divisor(1, mpf("0.7")) == 1
    t = mpf("0.7")
    assert rel(lfun.lambda_divisor(7, t), 2 * mpmath.cos(t * mpmath.log(7))) < mpf(10) ** -35
    assert abs(mpmath.im(lfun.lambda_divisor(7, t))) < mpf(10) ** -35
    assert lfun.lambda_divisor(4, 0) == 3


def test_lambda_divisor_rejects_zero():
    with pytest.raises(DomainError):
        lfun.lambda_divisor(0, 1)


def test_zeta_values():
    assert rel(lfun.zeta(2), mp.pi ** 2 / 6) < mpf(10) ** -30
    # frozen at 40 digits from an independent high-precision Euler-Maclaurin run
    assert rel(lfun.zeta(HALF), mpf("-1.460354508809586812889499152515298012467")) < mpf(10) ** -30
    with pytest.raises(DomainError):
        lfun.zeta(1)


def test_zeta_reflection_branch():
    assert rel(lfun.zeta(-1), mpf(-1) / 12) < mpf(10) ** -30
    assert lfun.zeta(-4) == 0


# |zeta(1+2it)| * log(3+|t|) on t in [0, 50]; observed minimum 0.77
ZETA_EDGE_LOWER = mpf("0.25")


def test_zeta_edge_lower_bound():
    vals = [abs(lfun.zeta(1 + 2j * mpf(t) / 4)) * mpmath.log(3 + mpf(t) / 4) for t in range(1, 201)]
    assert min(vals) >= ZETA_EDGE_LOWER


def test_xi_symmetries():
    s = mpf("0.3") + 2j
    assert rel(lfun.xi_completed(s), lfun.xi_completed(1 - s)) < mpf(10) ** -30
    assert rel(lfun.xi_completed(mpmath.conj(s)), mpmath.conj(lfun.xi_completed(s))) < mpf(10) ** -30
    assert rel(lfun.xi_completed(2), mp.pi / 6) < mpf(10) ** -30


def test_dirichlet_zeta_within_tail():
    val, tail = lfun.dirichlet_value(lfun.zeta_spec(), 2, N=10 ** 4)
    assert abs(val - mp.pi ** 2 / 6) <= tail
    assert tail < mpf(2) * 10 ** -4


def test_dirichlet_rejects_abscissa():
    with pytest.raises(DomainError):
        lfun.dirichlet_value(lfun.zeta_spec(), 1)


def test_gamma_factor_parameters():
    assert lfun.gamma_factors("maass_ad", 10) == [20j, 0, -20j]
    assert lfun.gamma_factors("hol", 6) == [mpf("6.5"), mpf("5.5")]
    six = lfun.gamma_factors("ad_tensor_hol", 2, 6)
    assert len(six) == 6 and mpf("6.5") + 4j in six and mpf("5.5") - 4j in six
    with pytest.raises(DomainError):
        lfun.gamma_factors("unknown")


def test_analytic_conductor_examples():
    assert lfun.analytic_conductor(lfun.zeta_spec(), HALF) == mpf(3) / 2
    ad = lfun.LFunctionSpec(3, lambda n: mpf(1), lfun.gamma_factors("maass_ad", 10))
    expected = (1 + abs(HALF + 20j)) * mpf(3) / 2 * (1 + abs(HALF - 20j))
    assert rel(lfun.analytic_conductor(ad, HALF), expected) < mpf(10) ** -35
    # monotone in |t| when every mu is real
    for spec in (lfun.zeta_spec(), lfun.LFunctionSpec(2, lambda n: mpf(1), lfun.gamma_factors("hol", 6))):
        along = [lfun.analytic_conductor(spec, HALF + 1j * t) for t in range(0, 40, 5)]
        assert all(a < b for a, b in zip(along, along[1:]))


def test_local_polynomials():
    # ad: (1 - a^2 X)(1 - X)(1 - a^-2 X) with a + 1/a = lam
    a = mpf("1.3") * mpmath.expj(mpf("0.4"))
    a = a / abs(a)
    lam = a + 1 / a
    p = lfun.ad_local_poly(lam)
    X = mpf("0.37")
    direct = (1 - a * a * X) * (1 - X) * (1 - X / (a * a))
    assert rel(p[0] + p[1] * X + p[2] * X ** 2 + p[3] * X ** 3, direct) < mpf(10) ** -30


def test_multiplicative_coefficients_recover_tau(delta):
    lam = delta.hecke
    out = lfun.multiplicative_coefficients(200, lambda p: lfun.degree2_local_poly(lam[p]))
    assert max(abs(out[n] - lam[n]) for n in range(1, 201)) < mpf(10) ** -30


def test_afe_zeta_half():
    assert rel(lfun.afe_value(lfun.zeta_spec(), HALF), lfun.zeta(HALF)) < 1e-8


def test_afe_zeta_off_axis():
    s = mpf("0.5") + 3j
    assert rel(lfun.afe_value(lfun.zeta_spec(), s), lfun.zeta(s)) < 1e-8


def test_afe_delta_balance_point(delta):
    spec = lfun.hol_spec(delta, 2000)
    v1 = lfun.afe_value(spec, HALF, 1)
    v2 = lfun.afe_value(spec, HALF, 2)
    assert rel(v1, v2) < 1e-8
    assert mpmath.re(v1) > 0 and abs(mpmath.im(v1)) < 1e-20


def test_afe_delta_matches_series_right_of_abscissa(delta):
    spec = lfun.hol_spec(delta, 2000)
    s = mpf("1.8") + 1j
    val, tail = lfun.dirichlet_value(spec, s, N=2000)
    assert abs(lfun.afe_value(spec, s) - val) <= 2 * tail + mpf(10) ** -20


def test_afe_functional_equation(delta):
    spec = lfun.hol_spec(delta, 2000)
    s = mpf("0.3") + mpf("0.8") * 1j
    a = lfun.afe_value(spec, s, return_completed=True)
    b = lfun.afe_value(spec, 1 - mpmath.conj(s), return_completed=True)
    assert rel(a, mpmath.conj(b)) < 1e-8


def test_afe_needs_epsilon():
    spec = lfun.LFunctionSpec(1, lambda n: mpf(1), [0])
    with pytest.raises(DomainError):
        lfun.afe_value(spec, HALF)


def test_rankin_selberg_small():
    """Same identities as the suite, with 10^4 terms and a tolerance sized to that truncation."""
    from qeverify import verify
    reps = verify.rankin_selberg_reports(N=10 ** 4)
    assert len(reps) == 4
    assert all(r.rel_err < 1e-5 for r in reps), [str(r) for r in reps]


def test_convexity_envelope_positive():
    spec = lfun.zeta_spec()
    assert lfun.convexity_envelope(spec, HALF + 10j) > 1
    assert math.isclose(float(lfun.convexity_envelope(spec, HALF)), 1.5 ** 0.25)
