"""Archimedean Whittaker integrals: closed forms, quadrature, size envelopes
and the local Whittaker/induced model checks.

Two integral families appear:

    I_k(a, b, g)   = int_0^inf W_{0,ia}(y)/G(1/2+ia)
                      * (W_{k,ib}(y)/G(1/2+k+ib) + W_{-k,ib}(y)/G(1/2-k+ib))
                      * y^{-1/2+ig} dy/y

    I_{k,l}(r)     = int_0^inf W_{0,ir}(u)/G(1/2+ir)
                      * W_{k,l-1/2}(u)/sqrt(G(k+l) G(k-l+1)) * u^{-1/2-ir} du/u

Each has a gamma/hypergeometric closed form and a quadrature oracle that only
uses Whittaker function values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import mpmath
from mpmath import mp, mpf, mpc

from . import _gmp
from .forms import c_k_l, d_k_r
from .hyper import pfq
from .quadrature import integrate, integrate_log_scale
from .reports import VerificationReport
from .special_core import DomainError, cgamma
from .whittaker import FAMILY_CLOSED, FAMILY_LAGUERRE, WhittakerParams, gmp_evaluator, whittaker_w

HALF = mpf(1) / 2
QUARTER = mpf(1) / 4


@dataclass(frozen=True)
class ArchIntegralSpec:
    kind: str
    k: int
    ell: int = 0
    alpha: float = 0
    beta: float = 0
    gamma: float = 0
    r: float = 0

    def __post_init__(self):
        if self.kind not in ("nonholomorphic", "holomorphic"):
            raise DomainError(f"unknown integral kind {self.kind!r}")
        if self.kind == "holomorphic" and not self.k >= self.ell >= 1:
            raise DomainError("holomorphic kind needs k >= ell >= 1")

    def closed(self):
        if self.kind == "holomorphic":
            return i_kl_closed(self.k, self.ell, self.r)
        return i_k_closed(self.k, self.alpha, self.beta, self.gamma)

    def quadrature(self, cfg=None):
        if self.kind == "holomorphic":
            return i_kl_quadrature(self.k, self.ell, self.r, cfg)
        return i_k_quadrature(self.k, self.alpha, self.beta, self.gamma, cfg)


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-11
    panel_scheme: str = "dyadic-gauss"
    u_min_exponent: int = -10
    u_max: float = 0.0
    max_panels: int = 40000
    nodes: int = 24

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.panel_scheme != "dyadic-gauss":
            raise DomainError("only the dyadic-gauss panel scheme is implemented")
        if self.max_panels < 1:
            raise DomainError("max_panels must be positive")

    def y_max(self, first_index, bits=None):
        """Upper cutoff u with e^{-u} u^{|k|} below 2^-bits * rel_tol (the integrand
        is a product of two Whittaker functions, each decaying like e^{-u/2})."""
        bits = bits or mp.prec
        k = abs(float(first_index))
        u = float(self.u_max) if self.u_max else (bits + 30) * math.log(2) + 20
        while -u + k * math.log(u) > -bits * math.log(2) + math.log(self.rel_tol):
            u *= 1.1
        return u

    def check(self, first_index):
        """The stated invariant e^{-u_max/2} u_max^{|k|} < rel_tol/10."""
        u = self.y_max(first_index)
        if -u / 2 + abs(first_index) * math.log(u) >= math.log(self.rel_tol / 10):
            raise DomainError("u_max too small for rel_tol")


DEFAULT_QUADRATURE = QuadratureConfig()


# ---------------------------------------------------------------------------
# closed forms


def i_k_gamma_quotient(alpha, beta, gamma):
    """The gamma product in front of the 4F3, without (-1)^k 4^{ig} / (2 pi)."""
    alpha, beta, gamma = mpf(alpha), mpf(beta), mpf(gamma)
    num = mpf(1)
    for e1 in (1, -1):
        for e2 in (1, -1):
            num *= cgamma(QUARTER + 1j * (e1 * alpha + e2 * beta + gamma) / 2)
    den = cgamma(HALF + 1j * alpha) * cgamma(HALF + 1j * beta) * cgamma(HALF + 1j * gamma)
    return num / den


def i_k_hypergeometric(k, alpha, beta, gamma):
    alpha, beta, gamma = mpf(alpha), mpf(beta), mpf(gamma)
    k = int(k)
    return pfq(
        [-k, k, QUARTER + 1j * (-alpha + beta + gamma) / 2, QUARTER + 1j * (alpha + beta + gamma) / 2],
        [HALF, HALF + 1j * beta, HALF + 1j * gamma],
    )


def i_k_closed(k, alpha, beta, gamma):
    """Closed form of I_k(alpha, beta, gamma) through a terminating 4F3 at unit argument."""
    k = int(k)
    gamma = mpf(gamma)
    pref = (-1) ** k * mpmath.power(4, 1j * gamma) / (2 * mp.pi)
    return pref * i_k_gamma_quotient(alpha, beta, gamma) * i_k_hypergeometric(k, alpha, beta, gamma)


def i_kl_terms(k, ell, r):
    """Summands of the finite sum for I_{k,l}(r), m = 0..k-l."""
    r = mpf(r)
    out = []
    for m in range(k - ell + 1):
        num = (-1) ** m * mpmath.factorial(ell + m - 1) * cgamma(ell + m - 2j * r)
        den = (mpmath.factorial(k - ell - m) * mpmath.factorial(2 * ell + m - 1)
               * cgamma(HALF + ell + m - 1j * r) * mpmath.factorial(m))
        out.append(num / den)
    return out


def i_kl_closed(k, ell, r):
    """Closed form of I_{k,l}(r) as a finite alternating sum of gamma quotients.

    The overall constant is the one the quadrature oracle reproduces: the
    sum is multiplied by (-1)^{k-l} sqrt(G(k+l) G(k-l+1)) / G(1/2+ir) and
    nothing else.
    """
    k, ell = int(k), int(ell)
    if not k >= ell >= 1:
        raise DomainError("I_{k,l} needs k >= l >= 1")
    r = mpf(r)
    pref = (-1) ** (k - ell) * mpmath.sqrt(cgamma(k + ell) * cgamma(k - ell + 1)) / cgamma(HALF + 1j * r)
    return pref * mpmath.fsum(i_kl_terms(k, ell, r))


# ---------------------------------------------------------------------------
# quadrature oracles


def _gmp_c(x):
    return _gmp.to_num(mpc(x))


def _whittaker_integral(first, weights, power, decay_low, frequency, cfg, bits):
    """int_0^inf (sum_j weights[j] * W_j(y)) * W_first(y) * y^{power} dy/y.

    ``first`` is a WhittakerParams, ``weights`` a list of (coefficient,
    WhittakerParams) pairs.  Returns (value, error) as mpmath numbers.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    y_hi = cfg.y_max(max([abs(mpmath.re(first.alpha))] + [abs(mpmath.re(p.alpha)) for _, p in weights]), bits)
    y_lo_guess = 2.0 ** cfg.u_min_exponent
    with _gmp.context(bits):
        f0 = gmp_evaluator(first, y_lo_guess, bits)
        parts = [(_gmp_c(c), gmp_evaluator(p, y_lo_guess, bits)) for c, p in weights]
        pw = _gmp_c(power)
        pw_re, pw_im = pw.real, pw.imag

        def g(v):
            y = gmpy2.exp(v)
            acc = 0
            for c, ev in parts:
                acc += c * ev(y)
            mag = gmpy2.exp(pw_re * v)
            ph = pw_im * v
            return acc * f0(y) * mag * gmpy2.mpc(gmpy2.cos(ph), gmpy2.sin(ph))

    return integrate_log_scale(
        g, cfg.rel_tol, frequency=frequency, decay_low=decay_low,
        v_low=cfg.u_min_exponent * math.log(2), y_high=y_hi, n=cfg.nodes, bits=bits,
        max_panels=cfg.max_panels)


def i_k_quadrature(k, alpha, beta, gamma, cfg=None, with_error=False):
    """I_k(alpha, beta, gamma) from its defining integral, Whittaker values only."""
    k = int(k)
    alpha, beta, gamma = mpf(alpha), mpf(beta), mpf(gamma)
    bits = mp.prec
    first = WhittakerParams.imag(0, alpha)
    c0 = 1 / cgamma(HALF + 1j * alpha)
    weights = [(c0 / cgamma(HALF + k + 1j * beta), WhittakerParams.imag(k, beta)),
               (c0 / cgamma(HALF - k + 1j * beta), WhittakerParams.imag(-k, beta))]
    freq = float(abs(alpha) + abs(beta) + abs(gamma)) + 1.0
    value, err = _whittaker_integral(first, weights, -HALF + 1j * gamma, 0.5, freq, cfg, bits)
    return (value, err) if with_error else value


def i_kl_quadrature(k, ell, r, cfg=None, with_error=False):
    """I_{k,l}(r) from its defining integral, Whittaker values only."""
    k, ell = int(k), int(ell)
    if not k >= ell >= 1:
        raise DomainError("I_{k,l} needs k >= l >= 1")
    r = mpf(r)
    bits = mp.prec
    first = WhittakerParams.imag(0, r)
    c = 1 / (cgamma(HALF + 1j * r) * mpmath.sqrt(cgamma(k + ell) * cgamma(k - ell + 1)))
    weights = [(c, WhittakerParams.holomorphic(k, ell))]
    freq = float(2 * abs(r)) + 1.0
    value, err = _whittaker_integral(first, weights, -HALF - 1j * r, float(ell), freq, cfg, bits)
    return (value, err) if with_error else value


def small_y_exponent(p):
    """c with W_p(y) ~ y^c as y -> 0 (leading power, logs ignored)."""
    fam = p.family
    if fam == FAMILY_CLOSED:
        return float(mpmath.re(p.alpha))
    if fam == FAMILY_LAGUERRE:
        return float(HALF + abs(mpmath.re(p.beta)))
    return float(HALF - abs(mpmath.re(p.beta)))


def whittaker_mellin(first, second, s, cfg=None, coefficient=1, decay_low=None, frequency=None):
    """int_0^inf W_first(u) * c * W_second(u) * u^{s-1} du/u by the same quadrature.

    ``second`` is a WhittakerParams or a list of (coefficient, WhittakerParams)
    pairs whose weighted sum replaces c * W_second.  Used by the unfolding
    checks, whose Whittaker integrals carry a general exponent s.
    """
    s = mpmath.mpmathify(s)
    weights = [(coefficient, second)] if isinstance(second, WhittakerParams) else list(second)
    if decay_low is None:
        decay_low = float(mpmath.re(s)) - 1 + small_y_exponent(first) + min(
            small_y_exponent(p) for _, p in weights)
    if decay_low <= 0:
        raise DomainError("integrand is not integrable at 0 for this exponent")
    if frequency is None:
        frequency = float(abs(mpmath.im(first.beta)) + max(abs(mpmath.im(p.beta)) for _, p in weights)
                          + abs(mpmath.im(s))) + 1.0
    value, _ = _whittaker_integral(first, weights, s - 1, decay_low, frequency, cfg, mp.prec)
    return value


# ---------------------------------------------------------------------------
# envelopes


def gamma_quotient_nonhol(r, t):
    """The gamma quotient of I_k(r, -r, t), whose size the Stirling envelope controls."""
    return i_k_gamma_quotient(r, -r, t)


def gamma_ratio_envelope(r, t):
    """(1+|t|)^{-1/2} (1+|2r+t|)^{-1/4} (1+|2r-t|)^{-1/4}, times e^{-pi(|t|-2|r|)/2} when |t| >= 2|r|."""
    r, t = mpf(r), mpf(t)
    env = (1 + abs(t)) ** (-HALF) * (1 + abs(2 * r + t)) ** (-QUARTER) * (1 + abs(2 * r - t)) ** (-QUARTER)
    if abs(t) >= 2 * abs(r):
        env *= mpmath.exp(-mp.pi * (abs(t) - 2 * abs(r)) / 2)
    return env


def hypergeometric_envelope(k, r, t):
    """1 + ((1 + |2r - t|) / (1 + |r|))^{|k|}."""
    r, t = mpf(r), mpf(t)
    return 1 + ((1 + abs(2 * r - t)) / (1 + abs(r))) ** abs(int(k))


def decay_ratio_nonhol(k, r, t):
    """|I_k(r, -r, t)| over (1+|t|)^{-1/2} (1+|2r+t|)^{-1/4} (1+|2r-t|)^{-1/4}."""
    r, t = mpf(r), mpf(t)
    env = (1 + abs(t)) ** (-HALF) * (1 + abs(2 * r + t)) ** (-QUARTER) * (1 + abs(2 * r - t)) ** (-QUARTER)
    return abs(i_k_closed(k, r, -r, t)) / env


def decay_ratio_hol(k, ell, r):
    """|I_{k,l}(r)| (1 + |r|)^{1/2}."""
    r = mpf(r)
    return abs(i_kl_closed(k, ell, r)) * (1 + abs(r)) ** HALF


# ---------------------------------------------------------------------------
# local Whittaker and induced models


def _sgn(x):
    return (x > 0) - (x < 0)


def _schwartz_fourier(k, y, a, scale):
    """int_R Phi(y/a, x) e(-a x) dx for Phi = scale (x2 - sgn(k) i x1)^{2|k|} e^{-pi |x|^2}.

    Completing the square (x = u - i a) turns the oscillatory Fourier
    integral into a Gaussian moment integral over u without cancellation.
    Works on gmpy2 numbers inside the caller's context.
    """
    K = abs(k)
    s = _sgn(k)
    x1 = y / a
    shift = gmpy2.mpc(0, -1) * a - gmpy2.mpc(0, s) * x1
    damp = gmpy2.exp(-gmpy2.const_pi() * (x1 * x1 + a * a))
    if K == 0:
        moment = gmpy2.mpfr(1)
    else:
        # int (u + shift)^{2K} e^{-pi u^2} du = sum_j C(2K, 2j) shift^{2K-2j} (2j-1)!! / (2 pi)^j
        moment = 0
        two_pi = 2 * gmpy2.const_pi()
        dfact = gmpy2.mpfr(1)
        for j in range(K + 1):
            if j:
                dfact *= 2 * j - 1
            moment += math.comb(2 * K, 2 * j) * shift ** (2 * K - 2 * j) * dfact / two_pi ** j
    return scale * damp * moment


def _a_integral(k, y, exponent, scale, bits, rel_tol):
    """sum over both signs of a of int_0^inf |a|^{exponent} G(+-b) db/b, G as above."""
    T = ((bits + 40) * math.log(2)) / math.pi + 4 * abs(k) + 4
    b_max = math.sqrt(T)
    b_min = abs(float(y)) / math.sqrt(T)
    ex = _gmp_c(exponent)
    with _gmp.context(bits):
        yy = _gmp.to_real(mpf(y))
        sc = _gmp_c(scale)

        def g(w):
            b = gmpy2.exp(w)
            pw = gmpy2.exp(ex * w)
            return pw * (_schwartz_fourier(k, yy, b, sc) + _schwartz_fourier(k, yy, -b, sc))

        freq = float(abs(ex.imag)) + 1
        value, err = integrate(g, math.log(b_min), math.log(b_max), rel_tol,
                               width=min(0.5, 6 / freq), bits=bits,
                               abs_floor=gmpy2.mpfr(2) ** (-bits))
        return _gmp.from_num(value)


def local_whittaker_principal(k, r, kappa, y, tol=1e-12):
    """W(diag(y,1)) from the Schwartz-function double integral (principal series, rho = 1)."""
    k, r, y = int(k), mpf(r), mpf(y)
    if y == 0:
        raise DomainError("y must be nonzero")
    K = abs(k)
    scale = mp.pi ** K * cgamma(HALF + 1j * r) / cgamma(HALF + K + 1j * r)
    inner = _a_integral(k, y, -2j * r, scale, mp.prec, tol)
    return _sgn(y) ** kappa * abs(y) ** (HALF + 1j * r) * inner


def local_whittaker_principal_closed(k, r, kappa, y):
    k, r, y = int(k), mpf(r), mpf(y)
    sg = _sgn(y)
    return d_k_r(k, r, "+" if sg > 0 else "-") * sg ** kappa * whittaker_w(
        WhittakerParams.imag(sg * k, r), 4 * mp.pi * abs(y))


def local_whittaker_principal_check(k, r, kappa, y, tolerance=1e-6):
    lhs = local_whittaker_principal(k, r, kappa, y)
    rhs = local_whittaker_principal_closed(k, r, kappa, y)
    return VerificationReport.compare(
        f"local-principal k={k} r={r} kappa={kappa} y={y}", lhs, rhs, tolerance,
        {"k": k, "r": r, "kappa": kappa, "y": y, "prec": mp.prec})


def local_whittaker_discrete(k, ell, y, tol=1e-12):
    """W(diag(y,1)) from the Schwartz-function double integral (discrete series, rho = 1)."""
    k, ell, y = int(k), int(ell), mpf(y)
    if y == 0:
        raise DomainError("y must be nonzero")
    K = abs(k)
    if K < ell:
        raise DomainError("discrete series model needs |k| >= l")
    scale = mp.pi ** K * (-1) ** k * c_k_l(K, ell)
    inner = _a_integral(k, y, 1 - 2 * ell, scale, mp.prec, tol)
    return abs(y) ** ell * inner


def local_whittaker_discrete_closed(k, ell, y):
    k, ell, y = int(k), int(ell), mpf(y)
    if _sgn(y) == -_sgn(k):
        return mpf(0)
    return c_k_l(abs(k), ell) * whittaker_w(WhittakerParams.holomorphic(abs(k), ell), 4 * mp.pi * abs(y))


def local_whittaker_discrete_check(k, ell, y, tolerance=1e-6, zero_tolerance=1e-8):
    lhs = local_whittaker_discrete(k, ell, y)
    rhs = local_whittaker_discrete_closed(k, ell, y)
    tol = zero_tolerance if rhs == 0 else tolerance
    return VerificationReport.compare(
        f"local-discrete k={k} l={ell} y={y}", lhs, rhs, tol,
        {"k": k, "ell": ell, "y": y, "prec": mp.prec})


def induced_model_identity_value(r):
    """f(identity) = pi^{-1/2-ir} Gamma(1/2+ir) (rho = 1)."""
    r = mpf(r)
    return mp.pi ** (-HALF - 1j * r) * cgamma(HALF + 1j * r)


def induced_model_identity_numeric(r, k=0, tol=1e-12):
    """int over R^x of Phi((0, a)) |a|^{1+2ir} d^x a with the principal-series Phi."""
    r = mpf(r)
    K = abs(int(k))
    scale = mp.pi ** K * cgamma(HALF + 1j * r) / cgamma(HALF + K + 1j * r)
    bits = mp.prec
    T = ((bits + 40) * math.log(2)) / math.pi + 4 * K + 4
    ex = _gmp_c(1 + 2j * r + 2 * K)
    with _gmp.context(bits):
        sc = _gmp_c(scale)
        pi = gmpy2.const_pi()

        def g(w):
            # a = e^w; Phi(0, a) = scale a^{2K} e^{-pi a^2}, both signs of a equal
            return 2 * sc * gmpy2.exp(ex * w) * gmpy2.exp(-pi * gmpy2.exp(2 * w))

        lo = -((bits + 40) * math.log(2)) - 10
        value, _ = integrate(g, lo / max(1.0, float(ex.real)), 0.5 * math.log(T), tol,
                             width=min(0.5, 6 / (float(abs(ex.imag)) + 1)), bits=bits,
                             abs_floor=gmpy2.mpfr(2) ** (-bits))
        return _gmp.from_num(value)


def induced_model_check(r, k=0, tolerance=1e-6):
    return VerificationReport.compare(
        f"induced-identity r={r} k={k}", induced_model_identity_numeric(r, k),
        induced_model_identity_value(r), tolerance, {"r": r, "k": k, "prec": mp.prec})
