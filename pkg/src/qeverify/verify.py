"""End-to-end checks: unfolding identities, triple periods, tail sums and the
acceptance suites that bundle them into JSONL/CSV report batches."""
from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import time
from dataclasses import dataclass, asdict

import mpmath
from mpmath import mp, mpf

from . import archimedean as arch
from . import forms, lfun
from .reports import VerificationReport
from .special_core import DomainError
from .whittaker import WhittakerParams, asymptotic_normalization, whittaker_bessel, \
    whittaker_laguerre, whittaker_ode

HALF = mpf(1) / 2

# Recorded from the decay sweeps: observed maxima 2.0875 (k=0, r=1, t=0) and
# 0.3436 (k=l=6, plateau for large r), each with a ~1.45x margin.
DECAY_BOUND_NONHOL = 3.0
DECAY_BOUND_HOL = 0.5
WEYL_SPREAD_FACTOR = 2.0


@dataclass(frozen=True)
class UnfoldConfig:
    rel_tol: float = 1e-14
    truncation_tol: float = 1e-26

    def domain(self):
        return forms.DomainConfig(rel_tol=self.rel_tol, truncation_tol=self.truncation_tol)


# ---------------------------------------------------------------------------
# unfolding


def _zeta_afe(s):
    return lfun.afe_value(lfun.zeta_spec(), s)


def unfold_eis_hol(F, k, t, s, cfg=None, rho=1, tolerance=1e-6):
    """Integral of E(z,1/2+it) E_{-2k}(z,s) f_k(z) over the fundamental domain vs its unfolded form.

    Identity tier (Re s > 1):
        (4 pi)^{1-s} C_{k,l} rho / xi(1+2it) * L(s+it,F) L(s-it,F)/zeta(2s) * M(s),
    where the Dirichlet series sum lambda_F(n) lambda(n,t) n^{-s} is evaluated
    through its L-function factorisation (AFE values) and
    M(s) = int W_{0,it} W_{k,l-1/2} u^{s-1} du/u by quadrature.
    Central tier (s = 1/2 - it): the same expression at the continued point,
    L(1/2,F) L(1/2-2it,F) / zeta(1-2it), all L-values from AFEs.
    """
    cfg = cfg or UnfoldConfig()
    k, t = int(k), mpf(t)
    s = mpmath.mpmathify(s)
    ell = int(F.ell)
    rho = mpmath.mpmathify(rho)
    central = abs(s - (HALF - 1j * t)) < mpf(10) ** -20
    if not central and mpmath.re(s) <= 1:
        raise DomainError("identity tier needs Re(s) > 1; the central tier needs s = 1/2 - it")
    series = [forms.eisenstein_series(0, HALF + 1j * t), forms.eisenstein_series(-k, s),
              forms.hol_series(F, k, rho)]
    lhs, lhs_err, Y = forms.fundamental_domain_integral(series, cfg.domain(), with_error=True)

    N = min(F.available(), 2000)
    Lspec = lfun.hol_spec(F, N)
    xi1 = lfun.gamma_R(1 + 2j * t) * _zeta_afe(1 + 2j * t) if central else lfun.xi_completed(1 + 2j * t)
    if central:
        dser = lfun.afe_value(Lspec, HALF) * lfun.afe_value(Lspec, HALF - 2j * t) / _zeta_afe(1 - 2j * t)
    else:
        dser = lfun.afe_value(Lspec, s + 1j * t) * lfun.afe_value(Lspec, s - 1j * t) / lfun.zeta(2 * s)
    mel = arch.whittaker_mellin(WhittakerParams.imag(0, t), WhittakerParams.holomorphic(k, ell), s,
                                arch.QuadratureConfig(rel_tol=cfg.rel_tol * 100))
    rhs = mpmath.power(4 * mp.pi, 1 - s) * forms.c_k_l(k, ell) * rho / xi1 * dser * mel
    echo = {"k": k, "ell": ell, "t": t, "s": s, "rho": rho, "tier": "central" if central else "identity",
            "lhs_error": mpmath.nstr(lhs_err, 3), "Y": Y}
    label = f"unfold hol k={k} t={mpmath.nstr(t, 4)} s={mpmath.nstr(s, 4)}"
    return VerificationReport.compare(label, lhs, rhs, tolerance, echo)


def dirichlet_hol_partial(F, t, s, N):
    """sum_{n <= N} lambda_F(n) lambda(n, t) n^{-s}: the unfolded series itself (diagnostic)."""
    return mpmath.fsum(F.lam(n) * lfun.lambda_divisor(n, t) * mpmath.power(n, -s) for n in range(1, N + 1))


def unfold_eis_maass(phi, k, t, s, cfg=None, rho=1, tolerance=None):
    """Integral of phi_j conj(phi_{j,k}) E_{2k}(z,s) over the fundamental domain vs its unfolded form.

    RHS = |rho|^2 (4 pi)^{1-s} zeta(s) L(s, ad phi)/zeta(2s)
          * int W_{0,ir} (conj D^+ W_{k,ir} + conj D^- W_{-k,ir}) u^{s-1} du/u,
    with L(s, ad phi) from its AFE.  ``t`` only labels the report (the
    identity tier does not depend on it).
    """
    cfg = cfg or UnfoldConfig()
    k = int(k)
    s = mpmath.mpmathify(s)
    if mpmath.re(s) <= 1:
        raise DomainError("identity tier needs Re(s) > 1")
    tol = tolerance if tolerance is not None else max(1e-4, 10 * float(phi.coeff_precision))
    rho = mpmath.mpmathify(rho)
    series = [forms.maass_series(phi, 0, rho), forms.maass_series(phi, k, rho).conj(),
              forms.eisenstein_series(k, s)]
    lhs, lhs_err, Y = forms.fundamental_domain_integral(series, cfg.domain(), with_error=True)
    ad = lfun.afe_value(lfun.maass_ad_spec(phi), s)
    dser = lfun.zeta(s) * ad / lfun.zeta(2 * s)
    r = phi.r
    weights = [(mpmath.conj(forms.d_k_r(k, r, "+")), WhittakerParams.imag(k, r)),
               (mpmath.conj(forms.d_k_r(k, r, "-")), WhittakerParams.imag(-k, r))]
    mel = arch.whittaker_mellin(WhittakerParams.imag(0, r), weights, s,
                                arch.QuadratureConfig(rel_tol=cfg.rel_tol * 100))
    rhs = abs(rho) ** 2 * mpmath.power(4 * mp.pi, 1 - s) * dser * mel
    echo = {"k": k, "t": t, "s": s, "r": mpmath.nstr(r, 12), "kappa": phi.kappa, "rho": rho,
            "lhs_error": mpmath.nstr(lhs_err, 3), "Y": Y}
    label = f"unfold maass r={mpmath.nstr(r, 6)} k={k} s={mpmath.nstr(s, 4)}"
    return VerificationReport.compare(label, lhs, rhs, tol, echo)


# ---------------------------------------------------------------------------
# triple periods


def triple_period_quadrature(phi_j, phi_l, k, cfg=None, with_error=False):
    """(3/pi) int_F phi_j conj(phi_{j,k}) phi_{l,k} dmu with all rho = 1."""
    cfg = cfg or UnfoldConfig()
    k = int(k)
    series = [forms.maass_series(phi_j, 0), forms.maass_series(phi_j, k).conj(), forms.maass_series(phi_l, k)]
    val, err, _ = forms.fundamental_domain_integral(series, cfg.domain(), with_error=True)
    val, err = 3 / mp.pi * val, 3 / mp.pi * err
    return (val, err) if with_error else val


def triple_period_hol(phi_j, F, k, cfg=None, with_error=False):
    """(3/pi) int_F phi_j conj(phi_{j,k}) f_k dmu with all rho = 1 (k >= l)."""
    cfg = cfg or UnfoldConfig()
    k = int(k)
    if k < F.ell:
        raise DomainError(f"weight bookkeeping: need k >= l = {F.ell}")
    series = [forms.maass_series(phi_j, 0), forms.maass_series(phi_j, k).conj(), forms.hol_series(F, k)]
    val, err, _ = forms.fundamental_domain_integral(series, cfg.domain(), with_error=True)
    val, err = 3 / mp.pi * val, 3 / mp.pi * err
    return (val, err) if with_error else val


def triple_ratio_reports(label, values, factors, tolerance=1e-2):
    """|value_k|^2 / |factor_k|^2 compared with the first k's ratio."""
    ks = sorted(values)
    ratios = {k: abs(values[k]) ** 2 / abs(factors[k]) ** 2 for k in ks}
    base = ratios[ks[0]]
    out = []
    for k in ks[1:]:
        out.append(VerificationReport.compare(f"{label} ratio k={k} vs k={ks[0]}", ratios[k], base, tolerance,
                                              {"k": k, "k_ref": ks[0], "value": values[k], "factor": factors[k]}))
    return out


def triple_maass_reports(phi_j, phi_l, ks=(0, 1, 2), cfg=None, tolerance=1e-2):
    values = {k: triple_period_quadrature(phi_j, phi_l, k, cfg) for k in ks}
    factors = {k: arch.i_k_closed(k, phi_j.r, -phi_j.r, phi_l.r) for k in ks}
    return triple_ratio_reports(f"triple maass r_j={mpmath.nstr(phi_j.r, 6)} r_l={mpmath.nstr(phi_l.r, 6)}",
                                values, factors, tolerance)


def triple_hol_reports(phi_j, F, ks=None, cfg=None, tolerance=1e-2):
    ks = ks or (F.ell, F.ell + 1)
    values = {k: triple_period_hol(phi_j, F, k, cfg) for k in ks}
    factors = {k: arch.i_kl_closed(k, F.ell, phi_j.r) for k in ks}
    return triple_ratio_reports(f"triple hol r_j={mpmath.nstr(phi_j.r, 6)} l={F.ell}", values, factors, tolerance)


def parity_vanishing_report(phi_j, phi_l_odd, k, cfg=None, tolerance=1e-12):
    """Triple period with an odd phi_l, scaled by ||phi_j||^2 ||phi_l||; must vanish."""
    if phi_l_odd.kappa != 1:
        raise DomainError("parity check needs an odd phi_l")
    cfg = cfg or UnfoldConfig()
    scale = 3 / mp.pi * forms.petersson_norm(phi_j) * mpmath.sqrt(forms.petersson_norm(phi_l_odd))
    # the value is zero, so only an absolute target makes sense
    dom = dataclasses.replace(cfg.domain(), abs_floor=float(tolerance * scale * 3 / mp.pi) / 100)
    k = int(k)
    series = [forms.maass_series(phi_j, 0), forms.maass_series(phi_j, k).conj(), forms.maass_series(phi_l_odd, k)]
    val, err, _ = forms.fundamental_domain_integral(series, dom, with_error=True)
    val, err = 3 / mp.pi * val, 3 / mp.pi * err
    return VerificationReport.compare(
        f"triple parity vanishing r_l={mpmath.nstr(phi_l_odd.r, 6)} k={k}", val / scale, 0, tolerance,
        {"k": k, "raw_value": val, "scale": scale, "quadrature_error": err})


# ---------------------------------------------------------------------------
# tails and envelopes


def synthetic_spectrum(count):
    """r_l = sqrt(12 l): the counting function N(T) = T^2/12 of Weyl's law, exactly."""
    return [math.sqrt(12.0 * l) for l in range(1, count + 1)]


def weyl_tail_sum(r_j, epsilon, count=None):
    """sum_l r_l^{-5/2+eps} (2 r_j + r_l)^{-1/2} (1 + |2 r_j - r_l|)^{-1/2} over the synthetic spectrum.

    Terms are summed for r_l up to 64 r_j (at least 10^5 terms); the rest is
    bounded by the Weyl-density integral of r^{-3+eps}, which is added.
    """
    r_j = float(r_j)
    R = max(64 * r_j, 400.0)
    count = count or max(int(R * R / 12) + 1, 10 ** 5)
    a = -2.5 + epsilon
    total = math.fsum(r ** a * (2 * r_j + r) ** -0.5 * (1 + abs(2 * r_j - r)) ** -0.5
                      for r in synthetic_spectrum(count))
    Rmax = math.sqrt(12.0 * count)
    # beyond Rmax: term <= r^{a-1}, density r/6 dr
    tail = Rmax ** (a + 1) / (6 * -(a + 1))
    return total + tail


def weyl_tail_continuous(r_j, epsilon):
    """int_0^inf (1+t)^{-5/2+eps} (2 r_j + t)^{-1/2} (1 + |2 r_j - t|)^{-1/2} (t/6) dt."""
    r_j = mpf(r_j)
    a = mpf(-2.5) + epsilon

    def f(t):
        return (1 + t) ** a * (2 * r_j + t) ** -HALF * (1 + abs(2 * r_j - t)) ** -HALF * t / 6
    return mpmath.quad(f, [0, 1, 2 * r_j, 4 * r_j, mpmath.inf])


def weyl_tail_check(r_values=(10, 50, 100, 200), epsilon=0.01):
    """sum * r_j across r_j; pass when max/min stays within WEYL_SPREAD_FACTOR."""
    prods = {r: weyl_tail_sum(r, epsilon) * r for r in r_values}
    lo, hi = min(prods.values()), max(prods.values())
    return VerificationReport.bound(f"weyl tail sum*r_j spread eps={epsilon}", hi / lo, WEYL_SPREAD_FACTOR,
                                    {"products": {str(k): f"{v:.12e}" for k, v in prods.items()},
                                     "epsilon": epsilon})


def theorem_envelope(kind, delta, A, r_j=None, t=0, r_l=None, eps=0.0):
    """Bound envelopes around the conditional theorems (plumbing for tables, no verification)."""
    if delta <= 0 or A <= 0:
        raise DomainError("delta and A must be positive")
    delta, A, eps = mpf(delta), mpf(A), mpf(eps)
    if kind == "eis":
        r_j = mpf(r_j)
        return r_j ** (HALF - 2 * delta) * mpmath.log(r_j) * (1 + abs(mpf(t))) ** (A - mpf(1) / 4 + eps)
    if kind == "maass":
        return mpf(r_l) ** (A - mpf(1) / 4 + eps)
    if kind == "hol":
        r_j = mpf(r_j)
        return r_j ** (-2 * delta) * mpmath.log(r_j)
    raise DomainError(f"unknown envelope kind {kind!r}")


# ---------------------------------------------------------------------------
# suites


class MissingFixture(RuntimeError):
    pass


@dataclass
class RunConfig:
    precision_bits: int = 128
    rel_tol: float = 1e-11
    fixtures: str = forms.FIXTURE_PATH
    out: str = "."
    extended: bool = False
    suite: str = "all"

    def echo(self):
        return {k: str(v) for k, v in asdict(self).items()}


SUITES = ("appendix", "local-models", "lfun", "unfolding", "unfolding-central", "triple", "tails")
NEEDS_FIXTURE = {"unfolding", "triple"}


def _load_fixture(cfg):
    if not os.path.exists(cfg.fixtures):
        raise MissingFixture(cfg.fixtures)
    fs = forms.ingest_forms(cfg.fixtures)
    return fs


def _pick(fs, target, parity=None):
    cands = [f for f in fs if isinstance(f, forms.MaassFormData) and (parity is None or f.parity == parity)]
    if not cands:
        return None
    best = min(cands, key=lambda f: abs(f.r - target))
    return best if abs(best.r - target) < 0.05 else None


def suite_appendix(cfg):
    reps = []
    qcfg = arch.QuadratureConfig(rel_tol=cfg.rel_tol)
    # calibration of the closed-form constants against the oracle at one point
    q = arch.i_kl_quadrature(6, 6, 1, qcfg)
    reps.append(VerificationReport.compare("calibration I_{6,6}(1) closed/quadrature", arch.i_kl_closed(6, 6, 1) / q,
                                           1, 1e-8))
    q = arch.i_k_quadrature(1, 1, -1, 1, qcfg)
    reps.append(VerificationReport.compare("calibration I_1(1,-1,1) closed/quadrature",
                                           arch.i_k_closed(1, 1, -1, 1) / q, 1, 1e-8))
    for k in (0, 1, 2, 3):
        for a in ("0", "1", "9.5337"):
            for g in ("0", "1", "5", "20"):
                al = mpf(a)
                q = arch.i_k_quadrature(k, al, -al, mpf(g), qcfg)
                c = arch.i_k_closed(k, al, -al, mpf(g))
                reps.append(VerificationReport.compare(f"I_{k}({a},-{a},{g}) closed vs quadrature", c, q, 1e-8,
                                                       {"k": k, "alpha": a, "gamma": g}))
    for k, ell in ((6, 6), (7, 6), (8, 6), (1, 1), (3, 1)):
        for r in ("0", "1", "9.5337"):
            q = arch.i_kl_quadrature(k, ell, mpf(r), qcfg)
            c = arch.i_kl_closed(k, ell, mpf(r))
            reps.append(VerificationReport.compare(f"I_{{{k},{ell}}}({r}) closed vs quadrature", c, q, 1e-8,
                                                   {"k": k, "ell": ell, "r": r}))
    reps += decay_reports()
    reps += whittaker_cross_reports()
    return reps


def decay_reports():
    reps = []
    worst = mpf(0)
    for k in (0, 1, 2):
        for r in ("1", "9.5337"):
            rr = mpf(r)
            ts = [mpf(60) * j / 199 for j in range(200)] + [2 * rr]
            for t in ts:
                worst = max(worst, arch.decay_ratio_nonhol(k, rr, t))
    reps.append(VerificationReport.bound("decay ratio non-holomorphic sweep max", worst, DECAY_BOUND_NONHOL,
                                         {"k": "0,1,2", "r": "1,9.5337", "t": "[0,60] 200 pts + 2r"}))
    worst = mpf(0)
    for k, ell in ((6, 6), (7, 6)):
        for j in range(200):
            worst = max(worst, arch.decay_ratio_hol(k, ell, mpf(60) * j / 199))
    reps.append(VerificationReport.bound("decay ratio holomorphic sweep max", worst, DECAY_BOUND_HOL,
                                         {"k,l": "(6,6),(7,6)", "r": "[0,60] 200 pts"}))
    return reps


def whittaker_cross_reports():
    reps = []
    for y in ("0.1", "1", "10", "40"):
        yy = mpf(y)
        p = WhittakerParams.imag(0, 2)
        reps.append(VerificationReport.compare(f"W_{{0,2i}}({y}) ode vs bessel", whittaker_ode(p, yy),
                                               whittaker_bessel(p, yy), 1e-10))
        p = WhittakerParams.holomorphic(7, 6)
        reps.append(VerificationReport.compare(f"W_{{7,11/2}}({y}) ode vs laguerre", whittaker_ode(p, yy),
                                               whittaker_laguerre(p, yy), 1e-10))
    p = WhittakerParams.imag(0, 2)
    norm = asymptotic_normalization(p, 200)
    # literal limit check; the 1/y correction is about 2e-2 here, so this is expected to fail
    reps.append(VerificationReport.compare("asymptotic normalization W_{0,2i} at y=200 vs 1", norm, 1, 1e-6))
    # the same quantity against mpmath's independent whitw
    ref = mpmath.whitw(0, 2j, 200) * mpmath.exp(100)
    reps.append(VerificationReport.compare("asymptotic normalization W_{0,2i} at y=200 vs whitw", norm, ref, 1e-10))
    return reps


def suite_local_models(cfg):
    reps = []
    for k in (0, 1):
        for y in (1, -1, 2):
            reps.append(arch.local_whittaker_principal_check(k, 1, 0, y))
    for y in (1, -1):
        reps.append(arch.local_whittaker_discrete_check(6, 6, y))
    for r in ("0", "1", "9.5337"):
        reps.append(arch.induced_model_check(mpf(r)))
    return reps


def suite_lfun(cfg, fs=None):
    reps = []
    reps.append(VerificationReport.compare("zeta(2) = pi^2/6", lfun.zeta(2), mp.pi ** 2 / 6, 1e-20))
    reps.append(VerificationReport.compare("AFE zeta(1/2) vs Euler-Maclaurin", _zeta_afe(HALF), lfun.zeta(HALF), 1e-8))
    reps += rankin_selberg_reports()
    F = forms.delta_form(2000)
    norm = forms.petersson_norm(F)
    reps.append(VerificationReport.compare("L(1, ad Delta) Petersson vs AFE", forms.l1ad_from_norm(F, norm),
                                           lfun.afe_value(lfun.hol_ad_spec(F, 2000), 1), 1e-3))
    return reps


RS_TERMS = 10 ** 6


def rankin_selberg_reports(N=RS_TERMS, t=mpf("0.7")):
    """Dirichlet-series identities for Delta at s = 2.2, 2.5, in float64 over N terms.

    sum lambda_F(n)^2 n^{-s} = zeta(s) L(s, ad F)/zeta(2s): both sides as series;
    the left side has a pole at s = 1 so its tail is replaced by the residue
    term R N^{1-s}/(s-1), R = L(1, ad F)/zeta(2).
    sum lambda_F(n) lambda(n,t) n^{-s} = L(s+it, F) L(s-it, F)/zeta(2s).
    """
    import numpy as np
    tau = forms.tau_coefficients(N)
    n = np.arange(1, N + 1, dtype=np.float64)
    lam = np.array([float(v) for v in tau[1:]], dtype=np.float64) / n ** 5.5
    coeffs = np.concatenate([[0.0], lam])
    # adjoint coefficients by the multiplicative sieve in float64
    ad = lfun.multiplicative_coefficients(N, lambda p: lfun.ad_local_poly(coeffs[p]), numeric="np")
    F = forms.delta_form(400)
    L1 = float(mpmath.re(lfun.afe_value(lfun.hol_ad_spec(F, 400), 1)))
    reps = []
    logn = np.log(n)
    lt = _lambda_t_np(N, float(t))
    for s in (2.2, 2.5):
        w = np.exp(-s * logn)
        lhs = float(np.sum(lam * lam * w)) + L1 / float(lfun.zeta(2)) * N ** (1 - s) / (s - 1)
        rhs = float(lfun.zeta(s)) * float(np.sum(ad[1:].real * w)) / float(lfun.zeta(2 * s))
        reps.append(VerificationReport.compare(f"Rankin-Selberg lambda^2 s={s}", lhs, rhs, 1e-8,
                                               {"N": N, "tail": "residue term"}))
        lhs2 = float(np.sum(lam * lt * w))
        ws = np.exp(-1j * float(t) * logn)
        Lp = complex(np.sum(lam * w * ws))
        Lm = complex(np.sum(lam * w / ws))
        rhs2 = Lp * Lm / float(lfun.zeta(2 * s))
        reps.append(VerificationReport.compare(f"Rankin-Selberg lambda*lambda_t s={s}", lhs2, rhs2.real, 1e-8,
                                               {"N": N, "t": str(t), "imag_rhs": f"{rhs2.imag:.3e}"}))
    return reps


def _lambda_t_np(N, t):
    """lambda(n, t) = sum_{ab=n} (a/b)^{it} for n <= N, real by symmetry: sum_{d|n} cos(t log(d^2/n))."""
    import numpy as np
    out = np.zeros(N + 1)
    logs = np.log(np.arange(1, N + 1, dtype=np.float64))
    for d in range(1, N + 1):
        m = np.arange(d, N + 1, d)
        out[m] += np.cos(t * (2 * logs[d - 1] - logs[m - 1]))
    return out[1:]


def suite_unfolding(cfg, fs):
    reps = []
    F = forms.delta_form(2000)
    for k, t, s in ((6, "0.7", "2"), (7, "0.7", "2"), (6, "0.3", "2.5")):
        reps.append(unfold_eis_hol(F, k, mpf(t), mpf(s)))
    phi = forms.first_maass(fs)
    for k, t, s in ((0, "0", "2"), (1, "0.5", "2.5")):
        reps.append(unfold_eis_maass(phi, k, mpf(t), mpf(s)))
    return reps


def suite_unfolding_central(cfg, fs=None):
    F = forms.delta_form(2000)
    t = mpf("0.7")
    reps = [unfold_eis_hol(F, k, t, HALF - 1j * t, tolerance=1e-4) for k in (6, 7)]
    if cfg.extended:
        if fs is None:
            raise MissingFixture(cfg.fixtures)
        reps += maass_central_reports(forms.first_maass(fs))
    return reps


def maass_central_reports(phi, t=mpf("0.5"), k=1):
    """Continuation of the Maass unfolding to s = 1/2 + it: FD integral against the AFE-assembled value."""
    s = HALF + 1j * t
    series = [forms.maass_series(phi, 0), forms.maass_series(phi, k).conj(), forms.eisenstein_series(k, s)]
    lhs = forms.fundamental_domain_integral(series)
    ad = lfun.afe_value(lfun.maass_ad_spec(phi), s)
    dser = _zeta_afe(s) * ad / _zeta_afe(2 * s)
    r = phi.r
    weights = [(mpmath.conj(forms.d_k_r(k, r, "+")), WhittakerParams.imag(k, r)),
               (mpmath.conj(forms.d_k_r(k, r, "-")), WhittakerParams.imag(-k, r))]
    mel = arch.whittaker_mellin(WhittakerParams.imag(0, r), weights, s)
    rhs = mpmath.power(4 * mp.pi, 1 - s) * dser * mel
    return [VerificationReport.compare(f"unfold maass central k={k} t={mpmath.nstr(t, 3)}", lhs, rhs,
                                       max(1e-4, 10 * phi.coeff_precision), {"k": k, "t": t})]


def suite_triple(cfg, fs):
    reps = []
    phi_j = forms.first_maass(fs)
    even = _pick(fs, 13.78, "even")
    odd = _pick(fs, 12.17, "odd")
    if even is not None:
        reps += triple_maass_reports(phi_j, even)
    reps += triple_hol_reports(phi_j, forms.delta_form(400))
    if odd is not None:
        for k in (0, 1):
            reps.append(parity_vanishing_report(phi_j, odd, k))
    return reps


def suite_tails(cfg):
    reps = [weyl_tail_check()]
    return reps


def run_suite(name, cfg):
    """Run one suite (or 'all'); raises MissingFixture when fixture data are required but absent."""
    names = SUITES if name == "all" else (name,)
    if name != "all" and name not in SUITES:
        raise DomainError(f"unknown suite {name!r}")
    fs = None
    if any(n in NEEDS_FIXTURE for n in names) or (cfg.extended and "unfolding-central" in names):
        fs = _load_fixture(cfg)
    reps = []
    with mp.workprec(cfg.precision_bits):
        for n in names:
            if n == "appendix":
                reps += suite_appendix(cfg)
            elif n == "local-models":
                reps += suite_local_models(cfg)
            elif n == "lfun":
                reps += suite_lfun(cfg)
            elif n == "unfolding":
                reps += suite_unfolding(cfg, fs)
            elif n == "unfolding-central":
                reps += suite_unfolding_central(cfg, fs)
            elif n == "triple":
                reps += suite_triple(cfg, fs)
            elif n == "tails":
                reps += suite_tails(cfg)
    for r in reps:
        r.config_echo = {**r.config_echo, **{f"run.{k}": v for k, v in cfg.echo().items() if k != "out"}}
    return reps


def write_reports(reps, out_dir, stem="reports", timestamp=None):
    """JSON lines (one report per line plus a trailing run record) and a CSV summary."""
    os.makedirs(out_dir, exist_ok=True)
    jpath = os.path.join(out_dir, f"{stem}.jsonl")
    cpath = os.path.join(out_dir, f"{stem}.csv")
    with open(jpath, "w", encoding="utf-8") as fh:
        for r in reps:
            fh.write(r.to_json() + "\n")
        fh.write(json.dumps({"timestamp": timestamp if timestamp is not None else time.time(),
                             "count": len(reps), "passed": sum(r.passed for r in reps)}, sort_keys=True) + "\n")
    with open(cpath, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err", "pass"])
        for r in reps:
            d = r.to_dict()
            w.writerow([d["label"], d["lhs_re"], d["lhs_im"], d["rhs_re"], d["rhs_im"], d["rel_err"], d["pass"]])
    return jpath, cpath
