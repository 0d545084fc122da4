"""Terminating generalized hypergeometric series pFq(a; b; z)."""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .special_core import DomainError


def _nonpositive_int(z):
    z = mpmath.mpmathify(z)
    if mpmath.im(z) != 0:
        return None
    x = mpmath.re(z)
    if x <= 0 and x == mpmath.floor(x):
        return int(-x)
    return None


@dataclass(frozen=True)
class HypergeometricSpec:
    numerator_params: tuple
    denominator_params: tuple
    argument: object = field(default=1)

    def __post_init__(self):
        object.__setattr__(self, "numerator_params",
                           tuple(mpmath.mpmathify(a) for a in self.numerator_params))
        object.__setattr__(self, "denominator_params",
                           tuple(mpmath.mpmathify(b) for b in self.denominator_params))
        object.__setattr__(self, "argument", mpmath.mpmathify(self.argument))
        if self.termination_index() is None:
            raise DomainError("series does not terminate: no nonpositive integer numerator parameter")

    def termination_index(self):
        idx = [m for m in (_nonpositive_int(a) for a in self.numerator_params) if m is not None]
        return min(idx) if idx else None


class _Kahan:
    __slots__ = ("total", "comp")

    def __init__(self):
        self.total = mpf(0)
        self.comp = mpf(0)

    def add(self, x):
        y = x - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t


def pfq_terminating(spec):
    """Sum of the terminating series over m = 0..K.

    Terms are built by the ratio recurrence, which reproduces the Pochhammer
    products exactly including the zero branch.  A denominator parameter
    that is a nonpositive integer -K' with K' < K makes (b)_m vanish and is
    rejected.
    """
    K = spec.termination_index()
    for j, b in enumerate(spec.denominator_params):
        nb = _nonpositive_int(b)
        if nb is not None and nb < K:
            raise DomainError(f"denominator parameter b[{j}] = {b} vanishes in (b)_m for m <= {K}")
    z = spec.argument
    acc = _Kahan()
    term = mpf(1)
    acc.add(term)
    for m in range(K):
        num = 1
        for a in spec.numerator_params:
            num *= a + m
        den = m + 1
        for b in spec.denominator_params:
            den *= b + m
        term = term * num / den * z
        if term == 0:
            break
        acc.add(term)
    return acc.total


def pfq(numerator, denominator, z=1):
    return pfq_terminating(HypergeometricSpec(tuple(numerator), tuple(denominator), z))
