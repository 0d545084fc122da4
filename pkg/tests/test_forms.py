"""Form records, Fourier evaluators, operators, Hecke relations and fixture I/O."""
import mpmath
import pytest
from mpmath import mp, mpf

from qeverify import forms, lfun
from qeverify.special_core import DomainError

HALF = mpf(1) / 2


def rel(a, b):
    return abs(a - b) / abs(b)


# --- normalising constants ---------------------------------------------------------

def test_d_k_r_examples():
    assert forms.d_k_r(0, mpf("3.1"), "+") == 1 and forms.d_k_r(0, mpf("3.1"), "-") == 1
    assert rel(forms.d_k_r(1, 0, "+"), -2) < mpf(10) ** -35
    # G(1/2 + i) / G(-3/2 + i) = (-3/2 + i)(-1/2 + i) by the recurrence
    assert rel(forms.d_k_r(2, 1, "-"), (-mpf(3) / 2 + 1j) * (-HALF + 1j)) < mpf(10) ** -35
    with pytest.raises(DomainError):
        forms.d_k_r(1, 0, "*")


def test_c_k_l_examples():
    assert forms.c_k_l(6, 6) == 1
    assert rel(forms.c_k_l(7, 6), -1 / mpmath.sqrt(12)) < mpf(10) ** -35
    # 11! / (13! 2!) = 1 / 312
    assert rel(forms.c_k_l(8, 6), 1 / mpmath.sqrt(312)) < mpf(10) ** -35
    with pytest.raises(DomainError):
        forms.c_k_l(5, 6)


# --- Ramanujan tau ---------------------------------------------------------------

def test_tau_small():
    tau = forms.tau_coefficients(30)
    assert tau[1] == 1 and tau[2] == -24 and tau[3] == 252
    assert tau[6] == tau[2] * tau[3]
    assert tau[4] == tau[2] ** 2 - 2 ** 11


def test_tau_against_naive_product():
    N = 60
    poly = [0] * (N + 1)
    poly[0] = 1
    for n in range(1, N + 1):
        for _ in range(24):
            for m in range(N, n - 1, -1):
                poly[m] -= poly[m - n]
    assert forms.tau_coefficients(N)[1:] == poly[:N]


def test_delta_hecke_relations(delta):
    lam = delta.lam
    assert rel(lam(2) * lam(3), lam(6)) < mpf(10) ** -35
    assert rel(lam(2) ** 2, lam(4) + 1) < mpf(10) ** -35
    assert forms.hecke_validate(delta, 30).passed


def test_fixture_hecke_sweep(fixture_forms):
    for f in fixture_forms:
        rep = forms.hecke_validate(f, 30)
        assert rep.passed, str(rep)


# --- Fourier evaluators -----------------------------------------------------------

def test_maass_parity(first_maass):
    z = mpf("0.21") + mpf("0.93") * 1j
    a = forms.eval_maass_shifted(first_maass, 0, z)
    b = forms.eval_maass_shifted(first_maass, 0, -mpmath.conj(z))
    assert rel(b, (-1) ** first_maass.kappa * a) < mpf(10) ** -25


def test_maass_translation(first_maass):
    z = mpf("0.21") + mpf("0.93") * 1j
    for k in (0, 2):
        a = forms.eval_maass_shifted(first_maass, k, z)
        assert rel(forms.eval_maass_shifted(first_maass, k, z + 1), a) < mpf(10) ** -25


def test_maass_inversion(first_maass):
    z = mpf("0.3") + mpf("0.8") * 1j
    defect, size = forms.automorphy_defect(forms.maass_series(first_maass), 0, z)
    # fixture eigenvalues carry about 12 correct digits
    assert defect <= 1e-9 * size


def test_maass_shifted_inversion(first_maass):
    z = mpf("0.3") + mpf("0.8") * 1j
    defect, size = forms.automorphy_defect(forms.maass_series(first_maass, 2), 2, z)
    assert defect <= 1e-9 * size


def test_maass_tail_estimate(first_maass):
    val, tail = forms.eval_maass_shifted(first_maass, 0, mpf("0.1") + 1j, with_tail=True)
    assert 0 <= tail < mpf(10) ** -20 * max(abs(val), 1e-30)


def test_delta_against_q_product(delta):
    # f_l(i) = (4 pi)^6 y^6 Delta(i), Delta(i) from q prod (1 - q^n)^24 at q = e^{-2 pi}
    q = mpmath.exp(-2 * mp.pi)
    prod = q
    for n in range(1, 80):
        prod *= (1 - q ** n) ** 24
    want = (4 * mp.pi) ** 6 * prod
    got = forms.eval_hol_shifted(delta, 6, mpmath.mpc(0, 1))
    assert rel(got, want) < mpf(10) ** -30


def test_hol_translation_and_conjugation(delta):
    z = mpf("0.17") + mpf("0.9") * 1j
    for k in (6, 7):
        v = forms.eval_hol_shifted(delta, k, z)
        assert rel(forms.eval_hol_shifted(delta, k, z + 1), v) < mpf(10) ** -25
        assert rel(forms.eval_hol_shifted(delta, -k, z), mpmath.conj(v)) < mpf(10) ** -30


def test_hol_weight_precondition(delta):
    with pytest.raises(DomainError):
        forms.eval_hol_shifted(delta, 3, mpmath.mpc(0, 1))


def test_hol_inversion(delta):
    z = mpf("0.3") + mpf("0.8") * 1j
    for k in (6, 7):
        defect, size = forms.automorphy_defect(forms.hol_series(delta, k), k, z)
        assert defect <= mpf(10) ** -25 * size


def test_eisenstein_against_epstein_zeta():
    # sum' (m^2+n^2)^{-s} = 4 zeta(s) beta(s), so E(i, s) = 2 zeta(s) beta(s) / zeta(2s)
    t = HALF
    s = HALF + 1j * t
    beta = mpmath.dirichlet(s, [0, 1, 0, -1])
    want = 2 * mpmath.zeta(s) * beta / mpmath.zeta(2 * s)
    got = forms.eval_eisenstein(forms.EisensteinParams(t, 0), mpmath.mpc(0, 1))
    assert rel(got, want) < mpf(10) ** -25


def test_eisenstein_translation_and_k0():
    z = mpf("0.4") + mpf("1.1") * 1j
    p = forms.EisensteinParams(mpf("0.7"), 0)
    v = forms.eval_eisenstein(p, z)
    assert rel(forms.eval_eisenstein(p, z + 1), v) < mpf(10) ** -25
    assert rel(forms.eval_eisenstein_general_s(0, p.s, z), v) < mpf(10) ** -25


def test_eisenstein_weight_inversion():
    z = mpf("0.3") + mpf("0.8") * 1j
    for k, s in ((1, HALF + mpf("0.7") * 1j), (2, mpf(2))):
        defect, size = forms.automorphy_defect(forms.eisenstein_series(k, s), k, z)
        assert defect <= mpf(10) ** -25 * size


# --- differential operators -----------------------------------------------------

Z0 = mpf("0.13") + mpf("1.05") * 1j


def test_laplace_eigenvalue(first_maass):
    assert forms.raising_lowering_check(first_maass, 0, Z0, h=1e-10, tolerance=1e-12, which="laplace").passed


@pytest.mark.parametrize("k", [0, 1, -1])
def test_raise_and_lower(first_maass, k):
    for which in ("raise", "lower"):
        rep = forms.raising_lowering_check(first_maass, k, Z0, h=1e-10, tolerance=1e-12, which=which)
        assert rep.passed, str(rep)


def test_holomorphic_bottom(delta):
    assert forms.raising_lowering_check(delta, 6, Z0, h=1e-10, tolerance=1e-12, which="hol-bottom").passed


# --- Petersson norm -------------------------------------------------------------

def test_petersson_y_doubling(delta):
    s = forms.hol_series(delta)
    a = forms.fundamental_domain_integral([s, s.conj()], y_top=2)
    b = forms.fundamental_domain_integral([s, s.conj()], y_top=4)
    assert rel(a, b) < 1e-13


# L(1, ad phi) log r for the first fixture form; observed 1.537
L1AD_LOG_R_LOWER = mpf(1)


def test_maass_l1ad_lower_bound(first_maass):
    l1 = forms.l1ad_from_norm(first_maass, forms.petersson_norm(first_maass))
    assert l1 > 0
    assert l1 * mpmath.log(first_maass.r) >= L1AD_LOG_R_LOWER


# --- fixture files --------------------------------------------------------------

def test_fixture_contents(fixture_forms):
    maass = [f for f in fixture_forms if isinstance(f, forms.MaassFormData)]
    assert len(maass) == 3
    assert abs(forms.first_maass(fixture_forms).r - mpf("9.53369526135355755434424")) < mpf(10) ** -20
    hol = [f for f in fixture_forms if isinstance(f, forms.HolomorphicFormData)]
    assert hol and hol[0].ell == 6


def test_fixture_round_trip(tmp_path, fixture_forms):
    path = tmp_path / "copy.txt"
    forms.write_fixture(str(path), fixture_forms)
    again = forms.ingest_forms(str(path))
    for a, b in zip(fixture_forms, again):
        assert type(a) is type(b)
        if isinstance(a, forms.MaassFormData):
            assert a.r == b.r and a.kappa == b.kappa and a.lam(97) == b.lam(97)


def test_fixture_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        forms.ingest_forms(str(tmp_path / "absent.txt"))


def test_fixture_rejects_broken_hecke(tmp_path):
    text = open(forms.FIXTURE_PATH, encoding="utf-8").read()
    head, maass = text.split("type maass", 1)
    # lambda(4) = lambda(2)^2 - 1 no longer holds
    old = next(line for line in maass.splitlines() if line.startswith("4 "))
    bad = tmp_path / "bad.txt"
    bad.write_text(head + "type maass" + maass.replace(old, "4 0.123456789", 1), encoding="utf-8")
    with pytest.raises(forms.FixtureError):
        forms.ingest_forms(str(bad))


def test_fixture_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("type maass\nr not-a-number\n", encoding="utf-8")
    with pytest.raises(forms.FixtureError):
        forms.ingest_forms(str(bad))


def test_maass_ad_spec_uses_fixture(first_maass):
    spec = lfun.maass_ad_spec(first_maass)
    assert spec.degree == 3 and spec.coefficient(1) == 1
