"""Conversions between mpmath numbers and gmpy2 mpfr/mpc for the hot inner loops."""
import gmpy2
import mpmath
from mpmath import mp
from mpmath.libmp import from_man_exp, MPZ

GUARD_BITS = 24


def context(bits=None):
    return gmpy2.context(gmpy2.get_context(), precision=(bits or mp.prec) + GUARD_BITS)


def to_real(x):
    x = mpmath.mpf(x)
    sign, man, exp, _ = x._mpf_
    if not man:
        return gmpy2.mpfr(0)
    v = gmpy2.mul_2exp(gmpy2.mpfr(int(man)), int(exp))
    return -v if sign else v


def to_num(x):
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc):
        return gmpy2.mpc(to_real(x.real), to_real(x.imag))
    return to_real(x)


def from_real(v):
    if not v:
        return mpmath.mpf(0)
    m, e = v.as_mantissa_exp()
    return mp.make_mpf(from_man_exp(MPZ(int(m)), int(e), mp.prec, "n"))


def from_num(v):
    if isinstance(v, gmpy2.mpc):
        return mpmath.mpc(from_real(v.real), from_real(v.imag))
    return from_real(v)
