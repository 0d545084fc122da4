"""Property-based invariants."""
import mpmath
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st
from mpmath import mp, mpf

from qeverify import archimedean as arch
from qeverify import forms, hyper, lfun
from qeverify.reports import VerificationReport
from qeverify.special_core import cgamma, pochhammer
from qeverify.whittaker import WhittakerParams, whittaker_w

QUICK = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
SLOW = settings(max_examples=6, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

reals = st.decimals(min_value=-20, max_value=20, places=3, allow_nan=False, allow_infinity=False).map(
    lambda d: mpf(str(d)))
positive = st.decimals(min_value="0.05", max_value=30, places=3).map(lambda d: mpf(str(d)))


def rel(a, b):
    return abs(a - b) / abs(b)


@QUICK
@given(reals, st.decimals(min_value="0.1", max_value=15, places=3))
def test_gamma_recurrence(re_part, im_part):
    mp.prec = 128
    s = mpmath.mpc(re_part, mpf(str(im_part)))
    assert rel(cgamma(s + 1), s * cgamma(s)) < mpf(10) ** -30


@QUICK
@given(positive, st.integers(min_value=0, max_value=25))
def test_pochhammer_gamma_quotient(b, m):
    mp.prec = 128
    assert rel(pochhammer(b, m), cgamma(b + m) / cgamma(b)) < mpf(10) ** -30


@QUICK
@given(st.lists(reals, min_size=2, max_size=2), st.lists(positive, min_size=2, max_size=2),
       st.integers(min_value=0, max_value=6), st.permutations(range(3)), st.permutations(range(2)))
def test_pfq_permutation_invariance(nums, dens, k, pn, pd):
    mp.prec = 128
    numerator = [-k] + nums
    denominator = dens
    base = hyper.pfq(numerator, denominator)
    shuffled = hyper.pfq([numerator[i] for i in pn], [denominator[i] for i in pd])
    assert abs(base - shuffled) <= mpf(10) ** -30 * max(abs(base), 1)


@QUICK
@given(st.integers(min_value=-8, max_value=8), reals, reals, reals)
def test_pfq_term_count(k, a, b, g):
    mp.prec = 128
    # b + 1/3 keeps the fourth numerator off the nonpositive integers
    spec = hyper.HypergeometricSpec((-abs(k), abs(k), a + 1j, b + mpf(1) / 3), (mpf(1) / 2, mpf(1) / 2 + 1j * g, 1 + 1j * a))
    assert spec.termination_index() == (abs(k) if k else 0)


@QUICK
@given(st.integers(min_value=0, max_value=4), reals, reals, reals)
def test_ik_conjugation_symmetry(k, a, b, g):
    mp.prec = 128
    v = arch.i_k_closed(k, a, b, g)
    w = arch.i_k_closed(k, -a, -b, -g)
    assert abs(w - mpmath.conj(v)) <= mpf(10) ** -28 * max(abs(v), mpf(10) ** -60)


@QUICK
@given(st.integers(min_value=0, max_value=4), st.decimals(min_value=0, max_value=40, places=2),
       st.decimals(min_value=0, max_value=40, places=2))
def test_gamma_envelope_seam_and_positivity(k, r, t):
    mp.prec = 128
    r, t = mpf(str(r)), mpf(str(t))
    assert arch.gamma_ratio_envelope(r, t) > 0
    seam = 2 * r
    below = arch.gamma_ratio_envelope(r, seam * (1 - mpf(10) ** -30))
    assert rel(below, arch.gamma_ratio_envelope(r, seam)) < mpf(10) ** -20


@settings(max_examples=12, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.decimals(min_value="0.5", max_value=20, places=2),
       st.decimals(min_value="0.2", max_value=30, places=2))
def test_whittaker_contiguous_relation(a, r, y):
    """W_{a+1} = (y - 2a) W_a - ((a - 1/2)^2 + r^2) W_{a-1} for W_{a, ir}."""
    mp.prec = 128
    r, y = mpf(str(r)), mpf(str(y))
    w = [whittaker_w(WhittakerParams.imag(a + d, r), y) for d in (-1, 0, 1)]
    rhs = (y - 2 * a) * w[1] - ((a - mpf(1) / 2) ** 2 + r ** 2) * w[0]
    scale = max(abs(w[2]), abs((y - 2 * a) * w[1]), abs(w[0]) * (a ** 2 + r ** 2))
    assert abs(w[2] - rhs) <= mpf(10) ** -25 * scale


@QUICK
@given(st.integers(min_value=1, max_value=400).flatmap(
    lambda m: st.tuples(st.just(m), st.integers(min_value=1, max_value=2000 // m))))
def test_delta_hecke_relation(delta, mn):
    m, n = mn
    mp.prec = 128
    from math import gcd
    g = gcd(m, n)
    lhs = delta.lam(m) * delta.lam(n)
    rhs = mpmath.fsum(delta.lam(m * n // (d * d)) for d in range(1, g + 1) if g % d == 0)
    assert abs(lhs - rhs) < mpf(10) ** -25 * max(1, abs(lhs))


@QUICK
@given(st.integers(min_value=1, max_value=5000), st.decimals(min_value=-5, max_value=5, places=3))
def test_lambda_divisor_real_and_bounded(n, t):
    mp.prec = 128
    v = lfun.lambda_divisor(n, mpf(str(t)))
    assert abs(mpmath.im(v)) < mpf(10) ** -30
    assert abs(v) <= abs(lfun.lambda_divisor(n, 0)) + mpf(10) ** -30


@QUICK
@given(reals, reals.filter(lambda v: abs(v) > mpf("0.01")), st.decimals(min_value="0.001", max_value=1000, places=3))
def test_report_relative_scale_invariance(a, b, factor):
    f = mpf(str(factor))
    r1 = VerificationReport.compare("x", a, b, 1e-3)
    r2 = VerificationReport.compare("x", a * f, b * f, 1e-3)
    assert abs(r1.rel_err - r2.rel_err) <= 1e-12 * max(r1.rel_err, 1e-300)


@pytest.fixture(scope="module")
def unfolding_base(delta):
    from qeverify import verify
    mp.prec = 128
    return verify.unfold_eis_hol(delta, 6, mpf("0.7"), mpf(2))


@pytest.mark.parametrize("rho", ["0.1", "-3.5"])
def test_unfolding_rho_homogeneity(delta, unfolding_base, rho):
    """Scaling rho on both sides leaves the unfolding report's relative error unchanged."""
    from qeverify import verify
    scaled = verify.unfold_eis_hol(delta, 6, mpf("0.7"), mpf(2), rho=mpf(rho))
    assert abs(scaled.rel_err - unfolding_base.rel_err) <= 1e-3 * unfolding_base.rel_err + 1e-20
    assert rel(scaled.lhs, unfolding_base.lhs * mpf(rho)) < mpf(10) ** -20


@QUICK
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=6))
def test_c_k_l_squares_are_rational(ell, extra):
    mp.prec = 128
    k = ell + extra
    from math import factorial
    want = mpf(factorial(2 * ell - 1)) / (factorial(k + ell - 1) * factorial(k - ell))
    assert rel(forms.c_k_l(k, ell) ** 2, want) < mpf(10) ** -35
