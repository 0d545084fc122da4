"""Whittaker functions W_{alpha,beta}(y) for y > 0.

Strategies:

* closed form ``y^alpha e^{-y/2}`` when beta = +-(alpha - 1/2),
* Laguerre polynomials when alpha = k >= l and beta = +-(l - 1/2),
* K-Bessel of imaginary order when alpha = 0 and beta = i r,
* otherwise the Whittaker ODE

      W'' + (-1/4 + alpha/y + (1/4 - beta^2)/y^2) W = 0

  integrated from large y (asymptotic initial data) towards 0 with a Taylor
  series method.  The ODE has polynomial coefficients after multiplying by
  y^2, so local Taylor coefficients come from a four-term recurrence and the
  series doubles as dense output.

The ODE solution is held in a :class:`WhittakerProfile` which is cached per
parameter pair and precision; batch evaluation on many points (quadrature)
goes through it.
"""
from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass

import gmpy2
import mpmath
from mpmath import mp, mpf, mpc

from . import _gmp
from .special_core import DomainError, bessel_k_imag, laguerre

HALF = mpf(1) / 2

FAMILY_CLOSED = "closed"
FAMILY_LAGUERRE = "laguerre"
FAMILY_BESSEL = "bessel"
FAMILY_INTEGER_IMAG = "integer-imag"
FAMILY_GENERAL = "general"


def _as_integer(z):
    z = mpmath.mpmathify(z)
    if mpmath.im(z) != 0:
        return None
    x = mpmath.re(z)
    if x == mpmath.floor(x):
        return int(x)
    return None


@dataclass(frozen=True)
class WhittakerParams:
    alpha: object
    beta: object

    def __post_init__(self):
        object.__setattr__(self, "alpha", mpmath.mpmathify(self.alpha))
        object.__setattr__(self, "beta", mpmath.mpmathify(self.beta))

    @classmethod
    def imag(cls, k, r):
        """W_{k, i r}."""
        return cls(k, mpc(0, r))

    @classmethod
    def holomorphic(cls, k, ell):
        """W_{k, l - 1/2}."""
        return cls(k, mpf(ell) - HALF)

    @property
    def beta_squared(self):
        b2 = self.beta ** 2
        if mpmath.im(b2) == 0:
            return mpmath.re(b2)
        return b2

    @property
    def family(self):
        a, b = self.alpha, self.beta
        if b == a - HALF or b == HALF - a:
            return FAMILY_CLOSED
        k = _as_integer(a)
        ell2 = _as_integer(2 * b)
        if k is not None and ell2 is not None and ell2 % 2 != 0:
            ell = (abs(ell2) + 1) // 2
            if k >= ell >= 1:
                return FAMILY_LAGUERRE
        if mpmath.re(b) == 0:
            if a == 0:
                return FAMILY_BESSEL
            if k is not None:
                return FAMILY_INTEGER_IMAG
        return FAMILY_GENERAL

    def key(self):
        return (str(self.alpha), str(self.beta_squared))


def _laguerre_w(k, ell, y):
    n = k - ell
    return (-1) ** n * mpmath.factorial(n) * mpmath.exp(-y / 2) * y ** ell * laguerre(n, 2 * ell - 1, y)


def whittaker_closed(p, y):
    return mpmath.power(y, p.alpha) * mpmath.exp(-y / 2)


def whittaker_laguerre(p, y):
    k = _as_integer(p.alpha)
    ell = (abs(_as_integer(2 * p.beta)) + 1) // 2
    return _laguerre_w(k, ell, mpf(y))


def whittaker_bessel(p, y):
    y = mpf(y)
    return mpmath.sqrt(y / mp.pi) * bessel_k_imag(mpmath.im(p.beta), y / 2)


def whittaker_ode(p, y):
    """W via the ODE path regardless of family (used for cross-checks)."""
    y = mpf(y)
    if not y > 0:
        raise DomainError("Whittaker functions are evaluated for y > 0 only")
    return profile_for(p).value(y)


def whittaker_w(p, y):
    """W_{alpha,beta}(y), choosing the cheapest exact strategy for the family."""
    y = mpmath.mpmathify(y)
    if mpmath.im(y) != 0 or not mpmath.re(y) > 0:
        raise DomainError("Whittaker functions are evaluated for y > 0 only")
    y = mpmath.re(y)
    fam = p.family
    if fam == FAMILY_CLOSED:
        return whittaker_closed(p, y)
    if fam == FAMILY_LAGUERRE:
        return whittaker_laguerre(p, y)
    if fam == FAMILY_BESSEL:
        return whittaker_bessel(p, y)
    return whittaker_ode(p, y)


def whittaker_many(p, ys):
    """Evaluate W at many points; ODE-family evaluations share one cached profile."""
    fam = p.family
    if fam == FAMILY_CLOSED:
        return [whittaker_closed(p, mpf(y)) for y in ys]
    if fam == FAMILY_LAGUERRE:
        return [whittaker_laguerre(p, y) for y in ys]
    ys = [mpf(y) for y in ys]
    prof = profile_for(p, min(ys))
    return prof.values(ys)


def asymptotic_normalization(p, y):
    """y^{-alpha} e^{y/2} W(y), which tends to 1 as y grows."""
    y = mpf(y)
    if p.family == FAMILY_CLOSED:
        return mpf(1)
    w = whittaker_w(p, y)
    return w * mpmath.power(y, -p.alpha) * mpmath.exp(y / 2)


class WhittakerProfile:
    """Dense Taylor-series solution of the Whittaker ODE on [y_low, y_top].

    Each node stores (center, step, scaled coefficients b_n = a_n h^n) valid on
    [center - step, center]; beyond y_top the asymptotic series is used.
    Arithmetic runs in gmpy2 at mp.prec + guard bits.
    """

    RATIO = 0.22
    MAX_STEP = 4.0

    def __init__(self, p, bits=None):
        self.params = p
        self.bits = bits or mp.prec
        self._lock = threading.Lock()
        self._ratio_lock = threading.Lock()
        with _gmp.context(self.bits):
            self.alpha = _gmp.to_num(p.alpha)
            self.c = _gmp.to_num(mpf(1) / 4 - p.beta_squared)
            self.eps = gmpy2.mpfr(2) ** (-(self.bits + 12))
            self._ratios = [gmpy2.mpfr(0)]
            self.y_top = self._choose_top()
            w, dw = self._asymptotic(self.y_top)
        self.centers = []
        self.steps = []
        self.coeffs = []
        self._state = (self.y_top, w, dw)
        self.y_low = self.y_top

    # asymptotic expansion ------------------------------------------------
    def _ratio(self, n):
        """((n - 1/2 - alpha)^2 - beta^2) / n, cached (independent of y)."""
        f = self._ratios
        if len(f) <= n:
            with self._ratio_lock:
                while len(f) <= n:
                    m = len(f)
                    f.append(((m - gmpy2.mpfr(1) / 2 - self.alpha) ** 2 - (gmpy2.mpfr(1) / 4 - self.c)) / m)
        return f[n]

    def _series_terms(self, y):
        inv = -1 / y
        t = gmpy2.mpfr(1)
        terms = [t]
        n = 0
        while True:
            n += 1
            t = t * self._ratio(n) * inv
            if n > 2 and abs(t) > abs(terms[-1]):
                return terms, False
            terms.append(t)
            if abs(t) < self.eps:
                return terms, True
            if n > 4000:
                return terms, False

    def _series_sum(self, y):
        inv = -1 / y
        t = gmpy2.mpfr(1)
        acc = t
        n = 0
        eps = self.eps
        while True:
            n += 1
            t = t * self._ratio(n) * inv
            acc += t
            if abs(t) < eps:
                return acc

    def _choose_top(self):
        a = float(abs(mpmath.mpmathify(self.params.alpha)))
        b2 = float(abs(mpmath.mpmathify(self.params.beta_squared)))
        y = max(40.0, 4 * (a + b2) ** 0.5, 2 * a)
        while True:
            _, ok = self._series_terms(gmpy2.mpfr(y))
            if ok:
                return gmpy2.mpfr(y)
            y *= 1.25

    def _asymptotic(self, y):
        terms, ok = self._series_terms(y)
        s = sum(terms)
        ds = sum(-n * t / y for n, t in enumerate(terms))
        pref = gmpy2.exp(-y / 2) * y ** self.alpha
        w = pref * s
        dw = w * (-gmpy2.mpfr(1) / 2 + self.alpha / y) + pref * ds
        return w, dw

    # Taylor stepping ---------------------------------------------------------
    def _step(self, yc, w, dw):
        a, c = self.alpha, self.c
        q0 = -yc * yc / 4 + a * yc + c
        q1 = a - yc / 2
        q2 = gmpy2.mpfr(-1) / 4
        kloc = max(float(abs(q0)) ** 0.5 / float(yc), 0.5)
        h = gmpy2.mpfr(min(self.RATIO * float(yc), 2.2 / kloc, self.MAX_STEP))
        yc2 = yc * yc
        b = [w, dw * h]
        scale = max(abs(w), abs(b[1]))
        n = 0
        small = 0
        h2, h3, h4 = h * h, h * h * h, h * h * h * h
        while True:
            acc = 2 * yc * n * (n + 1) * h * b[n + 1] + (n * (n - 1) + q0) * h2 * b[n]
            if n >= 1:
                acc += q1 * h3 * b[n - 1]
            if n >= 2:
                acc += q2 * h4 * b[n - 2]
            nxt = -acc / (yc2 * (n + 1) * (n + 2))
            b.append(nxt)
            m = abs(nxt)
            if m > scale:
                scale = m
            small = small + 1 if m < self.eps * scale else 0
            n += 1
            if small >= 3 and n > 6:
                break
            if n > 600:
                raise ArithmeticError("Taylor series did not converge; step too large")
        return h, b

    def _extend(self, y_target):
        yc, w, dw = self._state
        while yc > y_target:
            h, b = self._step(yc, w, dw)
            self.centers.append(yc)
            self.steps.append(h)
            self.coeffs.append(b)
            # evaluate at tau = -1
            w = gmpy2.mpfr(0) if not isinstance(b[0], gmpy2.mpc) else gmpy2.mpc(0)
            dw = w
            sign = 1
            for n, bn in enumerate(b):
                w += sign * bn
                if n:
                    dw -= sign * n * bn
                sign = -sign
            dw = dw / h
            yc = yc - h
        self._state = (yc, w, dw)
        self.y_low = yc

    def ensure(self, y_low):
        with self._lock:
            with _gmp.context(self.bits):
                target = _gmp.to_real(mpf(y_low)) if not isinstance(y_low, gmpy2.mpfr) else y_low
                if target < self.y_low:
                    self._extend(target * (1 - 1e-12))

    # evaluation --------------------------------------------------------------
    def _eval_gmp(self, y):
        if y >= self.y_top:
            w, _ = self._asymptotic_at(y)
            return w
        # centers decrease; find node with center >= y > center - step
        idx = self._locate(y)
        yc, h, b = self.centers[idx], self.steps[idx], self.coeffs[idx]
        tau = (y - yc) / h
        acc = b[-1]
        for bn in reversed(b[:-1]):
            acc = acc * tau + bn
        return acc

    def _asymptotic_at(self, y):
        # y >= y_top, where the series is known to converge to eps
        return gmpy2.exp(-y / 2) * y ** self.alpha * self._series_sum(y), True

    def _locate(self, y):
        # self._neg_centers is increasing
        neg = self._neg_centers()
        i = bisect.bisect_left(neg, -y)
        if i >= len(neg):
            i = len(neg) - 1
        return i

    def _neg_centers(self):
        if getattr(self, "_neg_cache_len", -1) != len(self.centers):
            self._neg_cache = [-c for c in self.centers]
            self._neg_cache_len = len(self.centers)
        return self._neg_cache

    def value_gmp(self, y):
        return self._eval_gmp(y)

    def value(self, y):
        self.ensure(y)
        with _gmp.context(self.bits):
            return _gmp.from_num(self._eval_gmp(_gmp.to_real(mpf(y))))

    def values(self, ys):
        if not ys:
            return []
        self.ensure(min(ys))
        with _gmp.context(self.bits):
            return [_gmp.from_num(self._eval_gmp(_gmp.to_real(y))) for y in ys]


_PROFILE_CACHE = {}
_PROFILE_LOCK = threading.Lock()


def profile_for(p, y_low=None, bits=None):
    """Cached ODE profile for the parameter pair, extended down to y_low if given."""
    bits = bits or mp.prec
    key = p.key() + (bits,)
    with _PROFILE_LOCK:
        prof = _PROFILE_CACHE.get(key)
        if prof is None:
            prof = WhittakerProfile(p, bits)
            _PROFILE_CACHE[key] = prof
    if y_low is not None:
        prof.ensure(y_low)
    return prof


def whittaker_recurrence(k, r, y):
    """W_{k, ir}(y) for integer k >= 0 from the contiguous relation in the first index.

    W_{a+1,b} = (y - 2a) W_{a,b} - ((a - 1/2)^2 - b^2) W_{a-1,b}, seeded with
    ODE values at a = 0 and a = 1.  Kept as an independent cross-check.
    """
    if k < 0:
        raise DomainError("recurrence path supports k >= 0")
    b2 = -mpf(r) ** 2
    y = mpf(y)
    w_prev = whittaker_ode(WhittakerParams.imag(0, r), y)
    if k == 0:
        return w_prev
    w_cur = whittaker_ode(WhittakerParams.imag(1, r), y)
    for a in range(1, k):
        w_prev, w_cur = w_cur, (y - 2 * a) * w_cur - ((a - HALF) ** 2 - b2) * w_prev
    return w_cur


def gmp_evaluator(p, y_low, bits=None):
    """Callable on gmpy2 reals returning W(y) as a gmpy2 number.

    Must be called inside ``_gmp.context(bits)``.  Closed-form and Laguerre
    families are evaluated directly; all others go through the cached ODE
    profile, extended down to ``y_low``.
    """
    bits = bits or mp.prec
    fam = p.family
    if fam == FAMILY_CLOSED:
        a = _gmp.to_num(p.alpha) if mpmath.im(p.alpha) else _gmp.to_real(p.alpha)
        return lambda y: y ** a * gmpy2.exp(-y / 2)
    if fam == FAMILY_LAGUERRE:
        k = _as_integer(p.alpha)
        ell = (abs(_as_integer(2 * p.beta)) + 1) // 2
        n = k - ell
        sign_fact = (-1) ** n * math.factorial(n)
        alpha = 2 * ell - 1

        def lag(y):
            prev, cur = gmpy2.mpfr(1), 1 + alpha - y
            if n == 0:
                cur = prev
            for j in range(1, n):
                prev, cur = cur, ((2 * j + 1 + alpha - y) * cur - (j + alpha) * prev) / (j + 1)
            return sign_fact * gmpy2.exp(-y / 2) * y ** ell * cur
        return lag
    prof = profile_for(p, mpf(y_low), bits)

    def ode(y):
        if y < prof.y_low:
            prof.ensure(y)
        return prof.value_gmp(y)
    return ode
