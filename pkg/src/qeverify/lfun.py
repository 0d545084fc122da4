"""Dirichlet series, completed L-functions and smoothed approximate functional
equations for the degree <= 3 L-functions attached to level-one forms.

Coefficients are produced from local Euler factors by a multiplicative sieve.
Central and off-line values come from

    Lambda(s) = sum a(n) n^{-s} F_s(n/X) + eps sum conj(a(n)) n^{s-1} F~_{1-s}(n X)
                - polar terms,

    F_s(y) = (1/2 pi i) int_(c) gamma(s+w) y^{-w} exp(w^2/A) dw / w,

with F computed by the trapezoid rule on the vertical line (the integrand is
analytic in a strip around it and decays like a Gaussian).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp, mpf, mpc

from .special_core import DomainError, cgamma, gamma_R

HALF = mpf(1) / 2
SMOOTHING_WIDTH = 16
AFE_BITS = 96


# ---------------------------------------------------------------------------
# arithmetic helpers


def lambda_divisor(n, t):
    """lambda(n, t) = sum_{ab=n} a^{it} b^{-it}."""
    return lambda_divisor_general(n, 1j * mpf(t))


def lambda_divisor_general(n, w):
    """sum_{ab=n} (a/b)^w; w = it gives lambda(n, t), w = s - 1/2 the weight-s Eisenstein coefficient."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be positive")
    w = mpmath.mpmathify(w)
    total = 0
    for a in _divisors(n):
        total += mpmath.power(mpf(a) / (n // a), w)
    return total


def _divisors(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=8)
def smallest_prime_factors(N):
    spf = np.zeros(N + 1, dtype=np.int64)
    spf[1] = 1
    for p in range(2, N + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def primes_up_to(N):
    spf = smallest_prime_factors(max(N, 2))
    return [p for p in range(2, N + 1) if spf[p] == p]


def factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_factor_series(poly, emax):
    """Power-series coefficients of 1 / poly(X) up to X^emax; poly[0] must be 1."""
    out = [1]
    for e in range(1, emax + 1):
        acc = 0
        for j in range(1, min(e, len(poly) - 1) + 1):
            acc -= poly[j] * out[e - j]
        out.append(acc)
    return out


def multiplicative_coefficients(N, local_poly, numeric="mp"):
    """a(1..N) for the Euler product prod_p 1/local_poly(p)(p^{-s}).

    ``local_poly(p)`` returns [1, c1, c2, ...].  ``numeric`` selects mpmath
    ('mp', list) or float64/complex128 ('np', numpy array).
    """
    if numeric == "np":
        a = np.zeros(N + 1, dtype=np.complex128)
    else:
        a = [mpf(0)] * (N + 1)
    a[1] = 1
    spf = smallest_prime_factors(max(N, 2))
    for n in range(2, N + 1):
        p = int(spf[n])
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        if m == 1:
            # prime power: fill all powers of p at once when first reached
            if e == 1:
                emax = int(math.log(N) / math.log(p) + 1e-9)
                coeffs = euler_factor_series(local_poly(p), emax)
                q = p
                for j in range(1, emax + 1):
                    if q > N:
                        break
                    a[q] = coeffs[j]
                    q *= p
        else:
            a[n] = a[n // m] * a[m]
    return a


# ---------------------------------------------------------------------------
# zeta and xi


def _zeta_em(s):
    """Euler-Maclaurin summation for Re(s) > 0, s != 1."""
    bits = mp.prec
    t = abs(mpmath.im(s))
    N = int(max(12, 0.25 * bits + t / 2))
    with mp.workprec(bits + 20):
        s = mpmath.mpmathify(s)
        total = mpmath.fsum(mpmath.power(n, -s) for n in range(1, N))
        Nm = mpf(N)
        total += mpmath.power(Nm, 1 - s) / (s - 1) + mpmath.power(Nm, -s) / 2
        rising = s
        powN = mpmath.power(Nm, -s - 1)
        eps = mpf(2) ** (-bits - 10) * abs(total)
        for j in range(1, 4 * N):
            term = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * rising * powN
            total += term
            if abs(term) < eps:
                break
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            powN /= Nm * Nm
        return +total


def zeta(s):
    """Riemann zeta; Euler-Maclaurin for Re(s) > 0, the functional equation elsewhere."""
    s = mpmath.mpmathify(s)
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    if mpmath.re(s) > 0:
        return _zeta_em(s)
    if s == 0:
        return -HALF
    if mpmath.im(s) == 0 and mpmath.re(s) < 0 and mpmath.re(s) % 2 == 0:
        return mpf(0)
    # zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
    return mpmath.power(2, s) * mpmath.power(mp.pi, s - 1) * mpmath.sin(mp.pi * s / 2) * cgamma(1 - s) * _zeta_em(1 - s)


def xi_completed(s):
    """pi^{-s/2} Gamma(s/2) zeta(s)."""
    s = mpmath.mpmathify(s)
    return gamma_R(s) * zeta(s)


# ---------------------------------------------------------------------------
# L-function specs


@dataclass
class LFunctionSpec:
    degree: int
    coefficients: object
    langlands_mu: list
    completed_label: str = ""
    epsilon: object = None
    pole_data: object = None
    self_dual: bool = True
    epsilon_note: str = ""

    def __post_init__(self):
        self.langlands_mu = [mpmath.mpmathify(m) for m in self.langlands_mu]
        if len(self.langlands_mu) != self.degree:
            raise DomainError("langlands_mu length must equal the degree")
        if self.coefficient(1) != 1:
            raise DomainError("coefficients(1) must be 1")

    def coefficient(self, n):
        c = self.coefficients
        if callable(c):
            return c(n)
        if n >= len(c):
            raise DomainError(f"coefficient a({n}) not available; have {len(c) - 1}")
        return c[n]

    def available(self):
        c = self.coefficients
        return math.inf if callable(c) else len(c) - 1

    def gamma_factor(self, s):
        out = mpf(1)
        for mu in self.langlands_mu:
            out *= gamma_R(s + mu)
        return out

    def completed(self, s):
        return self.gamma_factor(s) * dirichlet_value(self, s)[0]


def gamma_factors(kind, *params):
    """Langlands parameters mu_i for the supported families.

    maass(r, kappa), maass_ad(r), ad_tensor_maass(r, r_tilde, kappa_tilde),
    hol(l), hol_ad(l), ad_tensor_hol(r, l), zeta().
    """
    if kind == "zeta":
        return [mpf(0)]
    if kind == "maass":
        r, kappa = mpf(params[0]), int(params[1]) if len(params) > 1 else 0
        return [kappa + 1j * r, kappa - 1j * r]
    if kind == "maass_ad":
        r = mpf(params[0])
        return [2j * r, mpf(0), -2j * r]
    if kind == "ad_tensor_maass":
        r, rt = mpf(params[0]), mpf(params[1])
        kt = int(params[2]) if len(params) > 2 else 0
        out = []
        for pm in (1, -1):
            out += [kt + 2j * r + pm * 1j * rt, kt + pm * 1j * rt, kt - 2j * r + pm * 1j * rt]
        return out
    if kind == "hol":
        ell = mpf(params[0])
        return [ell + HALF, ell - HALF]
    if kind == "hol_ad":
        ell = int(params[0])
        return [mpf(1), mpf(2 * ell - 1), mpf(2 * ell)]
    if kind == "ad_tensor_hol":
        r, ell = mpf(params[0]), mpf(params[1])
        out = []
        for pm in (1, -1):
            out += [2j * r + ell + pm * HALF, ell + pm * HALF, -2j * r + ell + pm * HALF]
        return out
    raise DomainError(f"unknown gamma factor kind {kind!r}")


def analytic_conductor(spec, s):
    """prod (1 + |s + mu_i|)."""
    s = mpmath.mpmathify(s)
    out = mpf(1)
    for mu in spec.langlands_mu:
        out *= 1 + abs(s + mu)
    return out


def convexity_envelope(spec, s):
    """C(s)^{1/4} (the epsilon in the exponent is left to the caller)."""
    return analytic_conductor(spec, s) ** (mpf(1) / 4)


def zeta_spec():
    return LFunctionSpec(1, lambda n: mpf(1), [0], "zeta", epsilon=1,
                         pole_data=((1, 1), (0, -1)), epsilon_note="classical")


def dirichlet_value(spec, s, N=None, ramanujan_degree=None):
    """Truncated Dirichlet series with a tail bound.

    The bound assumes |a(n)| <= d_k(n) (k = degree unless given) and equals
    zeta(sigma)^k minus the partial sum of d_k(n) n^{-sigma}, which is exact
    for that majorant.  Returns (value, tail_bound).
    """
    s = mpmath.mpmathify(s)
    sigma = mpmath.re(s)
    k = ramanujan_degree or spec.degree
    if sigma <= 1:
        raise DomainError("Dirichlet series needs Re(s) > 1")
    if N is None:
        N = min(spec.available(), 10 ** 4)
    if N > spec.available():
        raise DomainError(f"need {N} coefficients, have {spec.available()}")
    total = mpmath.fsum(spec.coefficient(n) * mpmath.power(n, -s) for n in range(1, N + 1))
    dk = _divisor_k_counts(N, k)
    partial = mpmath.fsum(dk[n] * mpmath.power(n, -sigma) for n in range(1, N + 1))
    tail = max(zeta(sigma) ** k - partial, mpf(0))
    return total, tail


def _divisor_k_counts(N, k):
    d = np.ones(N + 1, dtype=np.int64)
    for _ in range(k - 1):
        nd = np.zeros(N + 1, dtype=np.int64)
        for a in range(1, N + 1):
            nd[a::a] += d[1: N // a + 1]
        d = nd
    return [int(x) for x in d]


def dirichlet_sum_np(coeffs, s):
    """sum_{n>=1} coeffs[n] n^{-s} in complex128 with pairwise summation (large N, modest tolerance)."""
    n = np.arange(1, len(coeffs), dtype=np.float64)
    s = complex(s)
    w = np.exp(-s * np.log(n))
    return complex(np.sum(coeffs[1:] * w))


# ---------------------------------------------------------------------------
# approximate functional equation


class _MellinKernel:
    """F_s(y) = (1/2 pi i) int_(c) gamma(s+w) y^{-w} G(w) dw/w, G(w) = exp(w^2/A).

    Trapezoid rule on Re w = c.  A wide Gaussian keeps the decay of F in y
    governed by the gamma factor; nodes are dropped once |gamma G / w| falls
    below the working precision.
    """

    def __init__(self, mus, s, c=None, A=SMOOTHING_WIDTH):
        self.mus = mus
        self.s = mpmath.mpmathify(s)
        self.A = mpf(A)
        bits = mp.prec
        sre = float(mpmath.re(self.s))
        mre = min(float(mpmath.re(m)) for m in mus)
        self.c = c if c is not None else max(1.5, 1.0 - sre - mre + 0.5)
        # singularities: w = 0 and gamma poles, all at distance >= dist from the line
        dist = min(self.c, self.c + sre + mre)
        budget = (bits + 20) * math.log(2)
        self.h = 2 * math.pi * dist / (budget + 10)
        c, h = mpf(self.c), mpf(self.h)
        eps = mpf(2) ** (-bits - 20)
        # weights on the grid w = c + i j h, j = -K..K
        centre = self._weight(mpc(c, 0))
        pos, neg = [], []
        peak = abs(centre)
        for sign, out in ((1, pos), (-1, neg)):
            quiet, j = 0, 1
            while quiet < 8:
                g = self._weight(mpc(c, sign * j * h))
                out.append(g)
                peak = max(peak, abs(g))
                quiet = quiet + 1 if abs(g) < eps * peak else 0
                j += 1
        self.centre, self.pos, self.neg = centre, pos, neg
        self.hfac = h / (2 * mp.pi)

    def _weight(self, w):
        g = mpf(1)
        for mu in self.mus:
            g *= gamma_R(self.s + w + mu)
        return g * smoothing(w, self.A) / w

    def __call__(self, y):
        logy = mpmath.log(y)
        base = mpmath.exp(-self.c * logy)
        rot = mpmath.expj(-self.h * logy)
        acc = self.centre
        zp = zm = mpf(1)
        rinv = mpmath.conj(rot)
        for gp, gn in zip(self.pos, self.neg):
            zp *= rot
            zm *= rinv
            acc += gp * zp + gn * zm
        return acc * base * self.hfac


def smoothing(w, A=None):
    return mpmath.exp(w * w / (A if A is not None else SMOOTHING_WIDTH))


def afe_value(spec, s0, X=1, tol=None, return_completed=False, bits=AFE_BITS):
    """L(s0) from the smoothed approximate functional equation.

    ``X`` is the balance point: changing it must not change the result,
    which is how the epsilon factor and normalisations are self-checked.
    Runs at ``bits`` of working precision (None keeps the ambient one).
    """
    if bits is None:
        return _afe(spec, s0, X, tol, return_completed)
    with mp.workprec(bits):
        out = _afe(spec, s0, X, tol, return_completed)
    return +out


def _afe(spec, s0, X, tol, return_completed):
    if spec.epsilon is None:
        raise DomainError("afe needs LFunctionSpec.epsilon (root number)")
    s0 = mpmath.mpmathify(s0)
    X = mpf(X)
    tol = mpf(tol) if tol is not None else mpf(2) ** (-mp.prec + 8)
    mus = spec.langlands_mu
    dual_mus = [mpmath.conj(m) for m in mus]
    k1 = _MellinKernel(mus, s0)
    k2 = _MellinKernel(dual_mus, 1 - s0)
    total = 0
    scale = None
    n = 1
    small = 0
    last = mpf(0)
    while True:
        if n > spec.available():
            raise DomainError(f"afe needs more coefficients than the {spec.available()} available "
                              f"(stopped at n = {n}, term size {mpmath.nstr(abs(last), 3)})")
        a = spec.coefficient(n)
        abar = a if spec.self_dual else mpmath.conj(a)
        f1 = mpmath.power(n, -s0) * k1(n / X)
        f2 = mpmath.power(n, s0 - 1) * k2(n * X)
        t1, t2 = a * f1, abar * f2
        last = abs(t1) + abs(t2)
        total += t1 + spec.epsilon * t2
        if scale is None:
            scale = max(last, mpf(2) ** (-mp.prec))
        # kernels decay monotonically beyond the transition region
        kmag = abs(f1) + abs(f2)
        if kmag * n ** 0.5 * max(1, spec.degree) < tol * scale:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        n += 1
    if spec.pole_data:
        for where, residue in spec.pole_data:
            w = where - s0
            total -= residue * mpmath.power(X, w) * smoothing(w) / w
    if return_completed:
        return total
    return total / spec.gamma_factor(s0)


def afe_central_value(spec, s0=HALF, X=1):
    return afe_value(spec, s0, X)


# ---------------------------------------------------------------------------
# spec builders


def ad_local_poly(lam):
    """1 - (l^2-1) X + (l^2-1) X^2 - X^3 for a unitary degree-2 Satake pair with trace l."""
    q = lam * lam - 1
    return [1, -q, q, -1]


def degree2_local_poly(lam):
    return [1, -lam, 1]


def maass_ad_spec(form, N=None):
    N = N or form.max_prime()
    coeffs = multiplicative_coefficients(N, lambda p: ad_local_poly(form.lam(p)))
    return LFunctionSpec(3, coeffs, gamma_factors("maass_ad", form.r), "L(s, ad phi)",
                         epsilon=1, epsilon_note="self-dual adjoint lift, root number 1")


def hol_spec(form, N):
    coeffs = [mpf(0)] + [form.lam(n) for n in range(1, N + 1)]
    eps = (-1) ** form.ell  # i^{2l}
    return LFunctionSpec(2, coeffs, gamma_factors("hol", form.ell), "L(s, F)", epsilon=eps,
                         epsilon_note="level one, weight 2l: i^{2l}")


def hol_ad_spec(form, N):
    coeffs = multiplicative_coefficients(N, lambda p: ad_local_poly(form.lam(p)))
    return LFunctionSpec(3, coeffs, gamma_factors("hol_ad", form.ell), "L(s, ad F)", epsilon=1,
                         epsilon_note="self-dual adjoint lift, root number 1")
