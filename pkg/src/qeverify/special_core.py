"""Scalar special functions at configurable binary precision.

All routines work on mpmath numbers at the current ``mp.prec``.  Use
:func:`working_precision` to evaluate a block at a different precision.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf, mpc

DEFAULT_BITS = 128


class DomainError(ValueError):
    """Argument outside the domain of a function (pole, sign condition, ...)."""


class AccuracyError(ArithmeticError):
    """Requested tolerance was not reached; ``best`` holds the best estimate."""

    def __init__(self, message, best=None, error_estimate=None):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class Precision:
    bits: int = DEFAULT_BITS
    target_rel_err: float = 1e-30

    def __post_init__(self):
        if self.bits < 53:
            raise DomainError("precision below 53 bits is not supported")
        if not self.target_rel_err > 0:
            raise DomainError("target_rel_err must be positive")


@contextlib.contextmanager
def working_precision(bits):
    """Temporarily set mpmath's binary precision."""
    with mp.workprec(int(bits)):
        yield


def _is_nonpositive_integer(z):
    z = mpmath.mpmathify(z)
    if isinstance(z, mpc):
        if z.imag != 0:
            return False
        z = z.real
    return z <= 0 and z == mpmath.floor(z)


def cgamma(s):
    """Gamma function; raises DomainError at the poles 0, -1, -2, ..."""
    if _is_nonpositive_integer(s):
        raise DomainError(f"Gamma has a pole at {s}")
    return mpmath.gamma(s)


def log_cgamma(s):
    """Principal branch of log Gamma, safe for large |s| where Gamma overflows."""
    if _is_nonpositive_integer(s):
        raise DomainError(f"Gamma has a pole at {s}")
    return mpmath.loggamma(s)


def gamma_R(s):
    """pi^{-s/2} Gamma(s/2)."""
    s = mpmath.mpmathify(s)
    return mpmath.power(mp.pi, -s / 2) * cgamma(s / 2)


def pochhammer(b, m):
    """Rising factorial (b)_m = b (b+1) ... (b+m-1), exact zero when it vanishes."""
    if m < 0 or int(m) != m:
        raise DomainError("m must be a nonnegative integer")
    m = int(m)
    b = mpmath.mpmathify(b)
    if m == 0:
        return mpf(1)
    if _is_nonpositive_integer(b):
        nb = -int(mpmath.re(b))
        if m > nb:
            return mpf(0)
        # (-1)^m Gamma(1-b) / Gamma(1-b-m) with both arguments positive integers
        return (-1) ** m * mpmath.factorial(nb) / mpmath.factorial(nb - m)
    if m <= 64:
        out = mpf(1)
        for j in range(m):
            out *= b + j
        return out
    return mpmath.gammaprod([b + m], [b])


def stirling_envelope(sigma, tau):
    """(1+|tau|)^(sigma-1/2) exp(-pi |tau| / 2), the size of |Gamma(sigma + i tau)|."""
    sigma = mpf(sigma)
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    tau = abs(mpf(tau))
    return (1 + tau) ** (sigma - mpf(1) / 2) * mpmath.exp(-mp.pi * tau / 2)


def _trapezoid_plan(tau, x, bits):
    """Step h and cutoff U for the trapezoid rule on int_0^inf exp(-x cosh u) cos(tau u) du.

    The integrand extends analytically to the strip |Im u| < pi/2; on the line
    Im u = d it is bounded by exp(-x cosh(u) cos d + |tau| d), which gives the
    discretisation error exp(-2 pi d / h) times that bound.  Relative to the
    result (about exp(-x - pi|tau|/2)) we need
        2 pi d / h >= B + |tau| d + pi |tau| / 2 + x (1 - cos d).
    """
    budget = (bits + 10) * math.log(2)
    best_h = 0.0
    for j in range(1, 60):
        d = j * (math.pi / 2) / 61
        need = budget + tau * d + math.pi * tau / 2 + x * (1 - math.cos(d)) + 5
        h = 2 * math.pi * d / need
        best_h = max(best_h, h)
    # cutoff: exp(-x cosh U) below 2^-(bits+8) relative to exp(-x - pi tau / 2)
    target = x + math.pi * tau / 2 + (bits + 8) * math.log(2)
    U = math.acosh(max(target / x, 1.0)) + 0.5
    return best_h, U


def bessel_k_imag(tau, x):
    """K_{i tau}(x) for real tau and x > 0.

    Trapezoid rule on the even, doubly exponentially decaying integrand
    exp(-x cosh u) cos(tau u); the step follows from the strip of
    analyticity so the discretisation error sits below 2^-(bits+10).
    Extra guard bits absorb the exp(-pi|tau|/2) cancellation.
    """
    x = mpf(x)
    if not x > 0:
        raise DomainError("bessel_k_imag needs x > 0")
    tau = abs(mpf(tau))
    bits = mp.prec
    ftau, fx = float(tau), float(x)
    h, U = _trapezoid_plan(ftau, fx, bits)
    guard = int(math.pi * ftau / 2 / math.log(2)) + 20
    with mp.workprec(bits + guard):
        hh = mpf(h)
        n = int(math.ceil(U / h))
        total = mpmath.exp(-x) / 2
        for j in range(1, n + 1):
            u = j * hh
            total += mpmath.exp(-x * mpmath.cosh(u)) * mpmath.cos(tau * u)
        value = hh * total
    return +value


def laguerre(n, alpha, x):
    """Associated Laguerre polynomial L_n^(alpha)(x) by the three-term recurrence."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    alpha = mpmath.mpmathify(alpha)
    x = mpmath.mpmathify(x)
    prev, cur = mpf(1), 1 + alpha - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur
