"""Automorphic forms for SL2(Z): data records, Fourier-Whittaker evaluators,
normalising constants, operator checks and Petersson norms.

Every form is represented as a :class:`FourierSeries`

    sum_{n != 0} c(n) W_{sgn n}(4 pi |n| y) e(n x) + sum_j a_j y^{e_j},

with one Whittaker parameter pair per sign of n.  Products of such series
are integrated over the standard fundamental domain by doing the x-integral
exactly (the integrand is a trigonometric sum in x) so only a one-dimensional
quadrature in y remains.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath
from mpmath import mp, mpf, mpc

from . import _gmp, lfun
from .quadrature import integrate
from .reports import VerificationReport
from .special_core import DomainError, cgamma
from .whittaker import WhittakerParams, gmp_evaluator

HALF = mpf(1) / 2

FIXTURE_PATH = os.path.join(os.path.dirname(__file__), "data", "forms.txt")
FIRST_MAASS_R = mpf("9.534")


def d_k_r(k, r, sign):
    """(-1)^k Gamma(1/2 + ir) / Gamma(1/2 +- k + ir); sign is '+' or '-' (or +1/-1)."""
    k = int(k)
    if sign not in ("+", "-", 1, -1):
        raise DomainError("sign must be '+' or '-'")
    sg = 1 if sign in ("+", 1) else -1
    r = mpmath.mpmathify(r)
    return (-1) ** k * cgamma(HALF + 1j * r) / cgamma(HALF + sg * k + 1j * r)


def c_k_l(k, ell):
    """(-1)^{k-l} sqrt(Gamma(2l) / (Gamma(k+l) Gamma(k-l+1)))."""
    k, ell = int(k), int(ell)
    if not k >= ell >= 1:
        raise DomainError("C_{k,l} needs k >= l >= 1")
    return (-1) ** (k - ell) * mpmath.sqrt(
        mpmath.factorial(2 * ell - 1) / (mpmath.factorial(k + ell - 1) * mpmath.factorial(k - ell)))


# ---------------------------------------------------------------------------
# records


def _hecke_power(lam_p, e):
    """lambda(p^e) from lambda(p) by lambda(p^{j+1}) = lambda(p) lambda(p^j) - lambda(p^{j-1})."""
    prev, cur = mpf(1), lam_p
    if e == 0:
        return prev
    for _ in range(e - 1):
        prev, cur = cur, lam_p * cur - prev
    return cur


@dataclass
class MaassFormData:
    """Even or odd Hecke-Maass cusp form; ``hecke`` holds ingested lambda(n)."""
    r: object
    kappa: int
    hecke: dict
    coeff_precision: float = 1e-12
    L1ad: object = None
    source: str = ""

    def __post_init__(self):
        self.r = mpf(self.r)
        if self.kappa not in (0, 1):
            raise DomainError("kappa must be 0 or 1")
        if mpmath.mpf(self.hecke.get(1, 0)) != 1:
            raise DomainError("lambda(1) must be 1")

    @property
    def parity(self):
        return "odd" if self.kappa else "even"

    @property
    def rho1(self):
        if self.L1ad is None:
            raise DomainError("rho1 needs L(1, ad phi)")
        return mpmath.sqrt(mpmath.cosh(mp.pi * self.r) / (2 * self.L1ad))

    def max_prime(self):
        return max(p for p in self.hecke if p > 1 and all(p % q for q in range(2, int(p ** 0.5) + 1)))

    def lam(self, n):
        n = int(n)
        hit = self.hecke.get(n)
        if hit is not None:
            return mpf(hit)
        out = mpf(1)
        for p, e in lfun.factorize(n).items():
            lp = self.hecke.get(p)
            if lp is None:
                raise DomainError(f"lambda({p}) not ingested (needed for n = {n})")
            pe = self.hecke.get(p ** e)
            out *= mpf(pe) if pe is not None else _hecke_power(mpf(lp), e)
        return out

    def available(self):
        """Largest N with lambda(n) known for all n <= N."""
        n = 1
        while True:
            try:
                self.lam(n + 1)
            except DomainError:
                return n
            n += 1
            if n > 10 ** 6:
                return n


@dataclass
class HolomorphicFormData:
    """Level-one Hecke eigenform of weight 2*ell; lambda_F(n) = a(n) / n^{(2 ell - 1)/2}."""
    ell: int
    hecke: dict
    L1ad: object = None
    source: str = ""
    coeff_precision: float = 0.0

    def __post_init__(self):
        if mpmath.mpf(self.hecke.get(1, 0)) != 1:
            raise DomainError("lambda_F(1) must be 1")

    @property
    def rho1(self):
        if self.L1ad is None:
            raise DomainError("rho1 needs L(1, ad F)")
        return mpmath.sqrt(mp.pi / (2 * mpmath.gamma(2 * self.ell) * self.L1ad))

    def lam(self, n):
        n = int(n)
        hit = self.hecke.get(n)
        if hit is None:
            raise DomainError(f"lambda_F({n}) not available; have n <= {self.available()}")
        return mpf(hit)

    def available(self):
        return max(self.hecke)


@dataclass(frozen=True)
class EisensteinParams:
    """E_{2k}(z, 1/2 + it)."""
    t: object
    k: int = 0

    @property
    def s(self):
        return HALF + 1j * mpf(self.t)


# ---------------------------------------------------------------------------
# Ramanujan tau


def tau_coefficients(N):
    """[0, tau(1), ..., tau(N)] from q * prod (1 - q^n)^24.

    Uses eta^3 = sum_m (-1)^m (2m+1) q^{m(m+1)/2} raised to the eighth power
    by three squarings of Kronecker-packed integers (exact arithmetic).
    """
    N = int(N)
    if N < 1:
        raise DomainError("N must be positive")
    M = N - 1  # need prod up to q^{N-1}
    series = [0] * (M + 1)
    m = 0
    while m * (m + 1) // 2 <= M:
        series[m * (m + 1) // 2] = (-1) ** m * (2 * m + 1)
        m += 1
    bound = 2 * math.isqrt(2 * M + 2) + 2
    for _ in range(3):
        # coefficients of the square are bounded by (M+1) * bound^2
        bits = 2 * bound.bit_length() + (M + 1).bit_length() + 2
        series = _square_truncated(series, M, bits)
        bound = max(abs(c) for c in series) + 1
    return [0] + series[: N]


def _square_truncated(coeffs, M, bits):
    width = (bits + 7) // 8
    packed = _pack(coeffs, width)
    sq = packed * packed
    return _unpack(sq, width, M + 1)


def _pack(coeffs, width):
    """Signed coefficients -> integer value at 2^(8*width), via byte strings (linear time)."""
    pos = b"".join((c if c > 0 else 0).to_bytes(width, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(width, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _unpack(value, width, count):
    sign = -1 if value < 0 else 1
    raw = int(abs(value)).to_bytes(width * (count + 1) + 8 + (int(abs(value)).bit_length() + 7) // 8, "little")
    full = 1 << (8 * width)
    half = full >> 1
    out = []
    carry = 0
    for i in range(count):
        chunk = int.from_bytes(raw[i * width:(i + 1) * width], "little") + carry
        if chunk >= half:
            chunk -= full
            carry = 1
        else:
            carry = 0
        out.append(sign * chunk)
    return out


def hol_eigenvalues(coeffs, ell):
    """lambda_F(n) = a(n) / n^{(2 ell - 1)/2} as mpf, keyed by n."""
    w = mpf(2 * ell - 1) / 2
    return {n: mpf(int(a)) / mpmath.power(n, w) for n, a in enumerate(coeffs) if n >= 1}


def delta_form(N=400):
    return HolomorphicFormData(6, hol_eigenvalues(tau_coefficients(N), 6), source="tau_coefficients")


# ---------------------------------------------------------------------------
# Fourier series


def _sgn(n):
    return 1 if n > 0 else -1


class FourierSeries:
    """sum_{n != 0} c(n) W_{params[sgn n]}(4 pi |n| y) e(n x) + sum_j a_j y^{e_j}.

    ``coefficient`` maps a nonzero integer to a complex number (0 when the
    term is absent); ``params`` maps +1/-1 to WhittakerParams or None;
    ``constant`` is a sequence of (a_j, e_j).  ``limit`` bounds the available
    |n| (coefficient data).
    """

    def __init__(self, label, coefficient, params, constant=(), limit=None, real_whittaker=True):
        self.label = label
        self._coefficient = coefficient
        self.params = dict(params)
        self.constant = tuple((mpmath.mpmathify(a), mpmath.mpmathify(e)) for a, e in constant)
        self.limit = limit
        self._cache = {}
        for p in self.params.values():
            if p is not None and real_whittaker:
                if mpmath.im(p.alpha) != 0 or mpmath.im(p.beta_squared) != 0:
                    raise DomainError("only real-valued Whittaker factors are supported")

    def coefficient(self, n):
        if self.params.get(_sgn(n)) is None:
            return 0
        if self.limit is not None and abs(n) > self.limit:
            raise DomainError(f"{self.label}: coefficient for |n| = {abs(n)} needed, "
                              f"data covers |n| <= {self.limit}")
        key = n
        hit = self._cache.get(key)
        if hit is None:
            hit = mpmath.mpmathify(self._coefficient(n))
            self._cache[key] = hit
        return hit

    def conj(self):
        """Complex conjugate as a function of z (W factors are real)."""
        return FourierSeries(
            f"conj({self.label})",
            lambda n: mpmath.conj(self.coefficient(-n)),
            {1: self.params.get(-1), -1: self.params.get(1)},
            [(mpmath.conj(a), mpmath.conj(e)) for a, e in self.constant],
            self.limit,
        )

    def scaled(self, factor):
        factor = mpmath.mpmathify(factor)
        return FourierSeries(f"{factor}*{self.label}", lambda n: factor * self.coefficient(n),
                             self.params, [(factor * a, e) for a, e in self.constant], self.limit)

    def signs(self):
        return [s for s in (1, -1) if self.params.get(s) is not None]

    # -- truncation -------------------------------------------------------

    def truncation(self, y, tol, bits=None):
        """Smallest N such that the terms with |n| > N are below tol relative to the largest term.

        Scans term magnitudes at height y; terms beyond the Whittaker turning
        point decay geometrically, and the scan stops after three consecutive
        small terms past it.  The a posteriori tail is the size of the first
        omitted term times a geometric factor.
        """
        bits = bits or mp.prec
        y = mpf(y)
        key = (str(y), str(tol), bits)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        peak = mpf(0)
        for a, e in self.constant:
            peak = max(peak, abs(a) * abs(mpmath.power(y, e)))
        turning = 0
        for sg in self.signs():
            p = self.params[sg]
            turning = max(turning, float(abs(p.alpha) + abs(mpmath.sqrt(abs(p.beta_squared)))))
        quiet, n, last = 0, 0, []
        with _gmp.context(bits):
            evs = {sg: gmp_evaluator(self.params[sg], 4 * mp.pi * y, bits) for sg in self.signs()}
            while quiet < 3:
                n += 1
                mag = mpf(0)
                for sg in self.signs():
                    c = self.coefficient(sg * n)
                    if c == 0:
                        continue
                    w = _gmp.from_num(evs[sg](_gmp.to_real(4 * mp.pi * n * y)))
                    mag = max(mag, abs(c) * abs(w))
                peak = max(peak, mag)
                past = 4 * math.pi * n * float(y) > 2 * turning + 4
                quiet = quiet + 1 if (past and mag <= tol * peak) else 0
                last.append(mag)
        N = n - 3
        tail = last[-3] * 2 if len(last) >= 3 else mpf(0)
        self._cache[key] = (N, tail, peak)
        return N, tail, peak

    # -- evaluation --------------------------------------------------------

    def gmp_terms(self, N, y_low, bits=None):
        """Prepared (n, c_n, evaluator) triples and constants, for use inside _gmp.context."""
        bits = bits or mp.prec
        evs = {sg: gmp_evaluator(self.params[sg], 4 * mp.pi * mpf(y_low), bits) for sg in self.signs()}
        terms = []
        for n in range(1, N + 1):
            for sg in self.signs():
                c = self.coefficient(sg * n)
                if c != 0:
                    terms.append((sg * n, _gmp.to_num(mpc(c)), evs[sg]))
        consts = [(_gmp.to_num(mpc(a)), _gmp.to_num(mpc(e))) for a, e in self.constant]
        return _PreparedSeries(terms, consts)

    def value(self, z, N=None, tol=None, with_tail=False):
        z = mpmath.mpmathify(z)
        x, y = mpmath.re(z), mpmath.im(z)
        if y <= 0:
            raise DomainError("Im z must be positive")
        bits = mp.prec
        tol = mpf(tol) if tol is not None else mpf(2) ** (-bits + 10)
        if N is None:
            N, tail, _ = self.truncation(y, tol)
        else:
            tail = None
        with _gmp.context(bits):
            prep = self.gmp_terms(N, y, bits)
            coeffs = prep.at(_gmp.to_real(y))
            total = 0
            xg = _gmp.to_real(x)
            twopi = 2 * gmpy2.const_pi()
            for n, v in coeffs.items():
                total += v * _expi(twopi * n * xg)
            out = _gmp.from_num(gmpy2.mpc(total))
        if with_tail:
            if tail is None:
                _, tail, _ = self.truncation(y, tol)
            return out, tail
        return out


class _PreparedSeries:
    __slots__ = ("terms", "consts")

    def __init__(self, terms, consts):
        self.terms = terms
        self.consts = consts

    def at(self, y):
        """Frequency -> coefficient value at height y (gmpy2), including n = 0."""
        out = {}
        scale = 4 * gmpy2.const_pi() * y
        wcache = {}
        for n, c, ev in self.terms:
            key = (id(ev), abs(n))
            w = wcache.get(key)
            if w is None:
                w = ev(scale * abs(n))
                wcache[key] = w
            out[n] = c * w
        if self.consts:
            logy = gmpy2.log(y)
            acc = 0
            for a, e in self.consts:
                acc += a * gmpy2.exp(e * logy)
            out[0] = out.get(0, 0) + acc
        return out


def _expi(theta):
    return gmpy2.mpc(gmpy2.cos(theta), gmpy2.sin(theta))


# ---------------------------------------------------------------------------
# series constructors


def maass_series(form, k=0, rho=1):
    """phi_{j,k}: coefficients D^{sgn n}_{k,r} sgn(n)^kappa rho lambda(|n|)/sqrt|n|, W_{sgn(n) k, ir}."""
    k = int(k)
    rho = mpmath.mpmathify(rho)
    dp, dm = d_k_r(k, form.r, "+"), d_k_r(k, form.r, "-")

    def coef(n):
        sg = _sgn(n)
        d = dp if sg > 0 else dm
        return d * (sg ** form.kappa) * rho * form.lam(abs(n)) / mpmath.sqrt(abs(n))

    params = {1: WhittakerParams.imag(k, form.r), -1: WhittakerParams.imag(-k, form.r)}
    return FourierSeries(f"maass(r={mpmath.nstr(form.r, 8)},k={k})", coef, params, limit=form.available())


def hol_series(form, k=None, rho=1):
    """f_k for k >= l (n >= 1); for k <= -l the conjugate expansion f_{-|k|} (e(-nx))."""
    ell = int(form.ell)
    k = ell if k is None else int(k)
    if k <= -ell:
        return hol_series(form, -k, mpmath.conj(mpmath.mpmathify(rho))).conj()
    if k < ell:
        raise DomainError(f"weight bookkeeping: need |k| >= l = {ell}, got k = {k}")
    c = c_k_l(k, ell) * mpmath.mpmathify(rho)
    return FourierSeries(f"hol(l={ell},k={k})",
                         lambda n: c * form.lam(n) / mpmath.sqrt(n) if n > 0 else 0,
                         {1: WhittakerParams.holomorphic(k, ell), -1: None}, limit=form.available())


def eisenstein_series(k, s):
    """E_{2k}(z, s) = y^s + c_k(s) y^{1-s} + sum_{n != 0} D^{sgn n}_k(s)/xi(2s) lambda_s(|n|)/sqrt|n| W_{sgn(n)k, s-1/2}(4 pi |n| y) e(nx).

    c_k(s) = (-1)^k Gamma(s)^2/(Gamma(s-k)Gamma(s+k)) xi(2s-1)/xi(2s), D^{+-}_k(s) = (-1)^k Gamma(s)/Gamma(s +- k),
    lambda_s(n) = sum_{ab=n} (a/b)^{s-1/2}.  At s = 1/2 + it this is lambda(n, t).
    """
    k = int(k)
    s = mpmath.mpmathify(s)
    xi2s = lfun.xi_completed(2 * s)
    gs = cgamma(s)
    sign = (-1) ** k
    c1 = sign * gs * gs * mpmath.rgamma(s - k) * mpmath.rgamma(s + k) * lfun.xi_completed(2 * s - 1) / xi2s
    d = {1: sign * gs * mpmath.rgamma(s + k) / xi2s, -1: sign * gs * mpmath.rgamma(s - k) / xi2s}
    w = s - HALF

    @lru_cache(maxsize=None)
    def lam(n):
        return lfun.lambda_divisor_general(n, w)

    def coef(n):
        return d[_sgn(n)] * lam(abs(n)) / mpmath.sqrt(abs(n))

    params = {sg: (WhittakerParams(sg * k, w) if d[sg] != 0 else None) for sg in (1, -1)}
    const = [(1, s)]
    if c1 != 0:
        const.append((c1, 1 - s))
    return FourierSeries(f"eis(k={k},s={mpmath.nstr(s, 8)})", coef, params, const)


def eval_maass_shifted(form, k, z, N=None, rho=1, with_tail=False):
    return maass_series(form, k, rho).value(z, N, with_tail=with_tail)


def eval_hol_shifted(form, k, z, N=None, rho=1, with_tail=False):
    return hol_series(form, k, rho).value(z, N, with_tail=with_tail)


def eval_eisenstein(p, z, N=None, with_tail=False):
    return eisenstein_series(p.k, p.s).value(z, N, with_tail=with_tail)


def eval_eisenstein_general_s(k, s, z, N=None, with_tail=False):
    return eisenstein_series(k, s).value(z, N, with_tail=with_tail)


# ---------------------------------------------------------------------------
# fundamental-domain integration


@dataclass(frozen=True)
class DomainConfig:
    rel_tol: float = 1e-14
    truncation_tol: float = 1e-26
    y_top: float = 4.0
    nodes: int = 24
    max_panels: int = 4000
    abs_floor: float = 0.0  # absolute error target for integrals expected to vanish


def _convolve(a, b):
    out = {}
    for n, u in a.items():
        for m, v in b.items():
            key = n + m
            out[key] = out.get(key, 0) + u * v
    return out


def fundamental_domain_integral(series, cfg=None, y_top=None, with_error=False):
    """int_F prod(series) dx dy / y^2 over F = {|x| <= 1/2, |z| >= 1}.

    Writes the product as sum_m P_m(y) e(mx) and integrates in x exactly:
    for y >= 1 only P_0 survives; for sqrt(3)/2 <= y < 1 the arc removes
    |x| < a = sqrt(1 - y^2), contributing -P_0 2a - sum_{m != 0} P_m sin(2 pi m a)/(pi m).
    The arc strip is parametrised by y = cos(theta), 0 <= theta <= pi/6.
    The upper limit is doubled until the neglected cusp tail is below tolerance.
    """
    cfg = cfg or DomainConfig()
    bits = mp.prec
    y0 = mpmath.sqrt(3) / 2
    truncs = [s.truncation(y0, cfg.truncation_tol) for s in series]
    Ns = [t[0] for t in truncs]
    freq = sum(Ns)
    with _gmp.context(bits):
        preps = [s.gmp_terms(N, y0, bits) for s, N in zip(series, Ns)]
        pi = gmpy2.const_pi()

        def products(y):
            acc = preps[0].at(y)
            for p in preps[1:]:
                acc = _convolve(acc, p.at(y))
            return acc

        def upper(y):
            v = products(y).get(0, 0)
            return v / (y * y)

        def arc(theta):
            y = gmpy2.cos(theta)
            a = gmpy2.sin(theta)
            P = products(y)
            acc = -P.get(0, 0) * 2 * a
            for m, v in P.items():
                if m > 0:
                    acc -= (v + P.get(-m, 0)) * gmpy2.sin(2 * pi * m * a) / (pi * m)
                elif m < 0 and -m not in P:
                    acc -= v * gmpy2.sin(2 * pi * (-m) * a) / (pi * (-m))
            # full-width strip part plus the removed arc part
            return (P.get(0, 0) + acc) / (y * y) * a

        width = min(0.5, 6.0 / max(freq, 1))
        floor = gmpy2.mpfr(cfg.abs_floor)
        arc_val, arc_err = integrate(arc, 0, pi / 6, cfg.rel_tol, width=width / 2, n=cfg.nodes,
                                     bits=bits, max_panels=cfg.max_panels, abs_floor=floor / 2)
        Y = gmpy2.mpfr(y_top or cfg.y_top)
        up_val, up_err = integrate(upper, 1, Y, cfg.rel_tol, width=0.5, n=cfg.nodes, bits=bits,
                                   max_panels=cfg.max_panels, abs_floor=floor / 4)
        while True:
            total = arc_val + up_val
            probe = max(abs(upper(Y)), abs(upper(Y * 1.05)))
            # integrand decays at least like e^{-2 pi y}
            tail = probe * Y / 2
            if tail <= max(cfg.rel_tol * abs(total), floor / 8) or Y > 200:
                break
            extra, e2 = integrate(upper, Y, 2 * Y, cfg.rel_tol, width=0.5, n=cfg.nodes, bits=bits,
                                  max_panels=cfg.max_panels, abs_floor=floor / 8)
            up_val += extra
            up_err += e2
            Y = 2 * Y
        total = arc_val + up_val
        err = arc_err + up_err + tail
        value = _gmp.from_num(gmpy2.mpc(total))
        err = _gmp.from_real(gmpy2.mpfr(err))
    # truncation: relative size of the first omitted term in each factor
    trunc = sum(t[1] / t[2] for t in truncs if t[2] != 0) * abs(value)
    if with_error:
        return value, err + trunc, float(Y)
    return value


def petersson_norm(form, cfg=None, with_error=False):
    """int_F |form|^2 dmu with rho = 1 (weight 0 for Maass, k = l for holomorphic)."""
    s = maass_series(form) if isinstance(form, MaassFormData) else hol_series(form)
    val, err, Y = fundamental_domain_integral([s, s.conj()], cfg, with_error=True)
    val = mpmath.re(val)
    return (val, err) if with_error else val


def l1ad_from_norm(form, norm):
    """Invert rho^2 = cosh(pi r)/(2 L) (Maass) or pi/(2 Gamma(2l) L) (holomorphic) at rho = 1 norm."""
    if isinstance(form, MaassFormData):
        return mpmath.cosh(mp.pi * form.r) * norm / 2
    return mp.pi * norm / (2 * mpmath.gamma(2 * form.ell))


# ---------------------------------------------------------------------------
# operators and automorphy


def _fd_derivatives(f, z, h):
    h = mpf(h)
    f0 = f(z)
    fxp, fxm = f(z + h), f(z - h)
    fyp, fym = f(z + 1j * h), f(z - 1j * h)
    dx = (fxp - fxm) / (2 * h)
    dy = (fyp - fym) / (2 * h)
    lap = (fxp + fxm + fyp + fym - 4 * f0) / (h * h)
    return f0, dx, dy, lap


def raising(f, k, z, h):
    """R_{2k} f = i y (d/dx - i d/dy) f + k f."""
    f0, dx, dy, _ = _fd_derivatives(f, z, h)
    y = mpmath.im(z)
    return 1j * y * (dx - 1j * dy) + k * f0


def lowering(f, k, z, h):
    """L_{2k} f = -i y (d/dx + i d/dy) f - k f."""
    f0, dx, dy, _ = _fd_derivatives(f, z, h)
    y = mpmath.im(z)
    return -1j * y * (dx + 1j * dy) - k * f0


def raising_lowering_check(form, k, z, h=1e-6, tolerance=1e-8, which="raise"):
    """Finite-difference operator identities for the Fourier evaluators.

    which = 'raise':     R_{2k} phi_{j,k} = (1/2 + k + ir) phi_{j,k+1}
    which = 'laplace':   -y^2 (dxx + dyy) phi_j = (1/4 + r^2) phi_j
    which = 'lower':     L_{2k+2} phi_{j,k+1} = -(1/2 + k - ir) phi_{j,k}
    which = 'hol-bottom': L_{2l} f_l = 0 (holomorphic form; absolute test)
    """
    z = mpmath.mpmathify(z)
    k = int(k)
    cfg = {"k": k, "z": z, "h": h, "which": which}
    if mpf(h) < mpf(2) ** (-mp.prec / 3):
        import warnings
        warnings.warn("finite-difference step is small for the working precision (cancellation)")
    if which == "hol-bottom":
        s = hol_series(form)
        f = s.value
        got = lowering(f, form.ell, z, h)
        return VerificationReport.compare(f"L f_l = 0 at {mpmath.nstr(z, 6)}", got, 0, tolerance * abs(f(z)), cfg)
    if which == "laplace":
        s = maass_series(form, 0)
        f0, _, _, lap = _fd_derivatives(s.value, z, h)
        got = -mpmath.im(z) ** 2 * lap
        return VerificationReport.compare(f"Laplace eigenvalue at {mpmath.nstr(z, 6)}", got, (mpf(1) / 4 + form.r ** 2) * f0,
                                          tolerance, cfg)
    if which == "raise":
        s = maass_series(form, k)
        got = raising(s.value, k, z, h)
        want = (HALF + k + 1j * form.r) * maass_series(form, k + 1).value(z)
        return VerificationReport.compare(f"R phi_k at {mpmath.nstr(z, 6)} (k={k})", got, want, tolerance, cfg)
    if which == "lower":
        s = maass_series(form, k + 1)
        got = lowering(s.value, k + 1, z, h)
        want = -(HALF + k - 1j * form.r) * maass_series(form, k).value(z)
        return VerificationReport.compare(f"L phi_k+1 at {mpmath.nstr(z, 6)} (k={k})", got, want, tolerance, cfg)
    raise DomainError(f"unknown check {which!r}")


def automorphy_defect(series, weight_k, z, gamma=((0, -1), (1, 0))):
    """|F(gamma z) - j_gamma(z)^{2k} F(z)| with j = (cz+d)/|cz+d|."""
    (a, b), (c, d) = gamma
    z = mpmath.mpmathify(z)
    gz = (a * z + b) / (c * z + d)
    j = (c * z + d) / abs(c * z + d)
    lhs = series.value(gz)
    rhs = j ** (2 * weight_k) * series.value(z)
    return abs(lhs - rhs), abs(rhs)


# ---------------------------------------------------------------------------
# Hecke relations


def hecke_validate(form, max_n=30, tolerance=None):
    """lambda(m) lambda(n) = sum_{d | (m,n)} lambda(mn/d^2) for m, n <= max_n.

    Pairs whose right side needs unavailable coefficients are skipped.  The
    report compares the worst defect with zero (absolute mode); offending
    pairs are listed in the config echo.
    """
    tol = tolerance if tolerance is not None else max(10 * float(form.coeff_precision), 1e-25)
    worst = mpf(0)
    bad = []
    checked = 0
    for m in range(1, max_n + 1):
        for n in range(m, max_n + 1):
            g = math.gcd(m, n)
            try:
                lhs = form.lam(m) * form.lam(n)
                rhs = mpmath.fsum(form.lam(m * n // (d * d)) for d in range(1, g + 1) if g % d == 0)
            except DomainError:
                continue
            checked += 1
            err = abs(lhs - rhs)
            if err > tol:
                bad.append((m, n))
            worst = max(worst, err)
    cfg = {"max_n": max_n, "pairs_checked": checked, "offending": bad[:20]}
    return VerificationReport.compare("hecke relations", worst, 0, tol, cfg)


# ---------------------------------------------------------------------------
# ingestion


class FixtureError(ValueError):
    pass


def _parse_records(text):
    records, cur = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "type":
            cur = {"type": rest, "values": {}, "line": lineno}
            records.append(cur)
            continue
        if cur is None:
            raise FixtureError(f"line {lineno}: data before the first 'type' line")
        if key.isdigit():
            if not rest:
                raise FixtureError(f"line {lineno}: missing value for n = {key}")
            cur["values"][int(key)] = rest
        else:
            cur[key] = rest
    return records


def _decimal(text, lineno=None):
    try:
        Fraction(text)  # exact syntax check, locale independent
    except (ValueError, ZeroDivisionError):
        raise FixtureError(f"not a decimal number: {text!r}" + (f" (line {lineno})" if lineno else ""))
    return mpf(text)


def ingest_forms(path, format="text", validate=True):
    """Read form records; Hecke relations are checked for every record."""
    if format != "text":
        raise DomainError(f"unsupported fixture format {format!r}")
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, encoding="utf-8") as fh:
        records = _parse_records(fh.read())
    out = []
    for rec in records:
        kind = rec["type"]
        vals = rec["values"]
        if kind == "maass":
            try:
                r = _decimal(rec["r"])
            except KeyError:
                raise FixtureError(f"maass record at line {rec['line']} has no r")
            parity = rec.get("parity", "even")
            if parity not in ("even", "odd"):
                raise FixtureError(f"bad parity {parity!r}")
            form = MaassFormData(r, 1 if parity == "odd" else 0,
                                 {n: _decimal(v) for n, v in vals.items()},
                                 float(rec.get("coeff_precision", "1e-12")),
                                 _decimal(rec["L1ad"]) if "L1ad" in rec else None,
                                 rec.get("source", ""))
        elif kind == "holomorphic":
            ell = int(rec["ell"])
            norm = rec.get("normalization", "hecke")
            if norm == "integer":
                ints = [0] * (max(vals) + 1)
                for n, v in vals.items():
                    ints[n] = int(v)
                hecke = hol_eigenvalues(ints, ell)
            else:
                hecke = {n: _decimal(v) for n, v in vals.items()}
            form = HolomorphicFormData(ell, hecke, _decimal(rec["L1ad"]) if "L1ad" in rec else None,
                                       rec.get("source", ""), float(rec.get("coeff_precision", "0")))
        else:
            raise FixtureError(f"unknown record type {kind!r} at line {rec['line']}")
        if validate:
            rep = hecke_validate(form, 30)
            if not rep.passed:
                raise FixtureError(f"Hecke relations fail for {kind} record at line {rec['line']}: "
                                   f"offending (m, n) = {rep.config_echo['offending']}")
        out.append(form)
    return out


def first_maass(forms, target=FIRST_MAASS_R, tol=mpf("1e-3")):
    """The ingested Maass form with r closest to the first eigenvalue r ~ 9.534."""
    cands = [f for f in forms if isinstance(f, MaassFormData)]
    if not cands:
        raise FixtureError("no Maass form in the fixture")
    best = min(cands, key=lambda f: abs(f.r - target))
    if abs(best.r - target) > tol:
        raise FixtureError(f"no Maass form with r within {tol} of {target}")
    return best


def write_fixture(path, forms):
    """Write records in the ingestion format (values at full working precision)."""
    lines = []
    for f in forms:
        if isinstance(f, MaassFormData):
            lines += ["type maass", f"r {mpmath.nstr(f.r, 30)}", f"parity {f.parity}",
                      f"coeff_precision {f.coeff_precision:.1e}"]
            if f.source:
                lines.append(f"source {f.source}")
            lines += [f"{n} {mpmath.nstr(mpf(v), 25)}" for n, v in sorted(f.hecke.items())]
        else:
            lines += ["type holomorphic", f"ell {f.ell}", "normalization hecke"]
            if f.source:
                lines.append(f"source {f.source}")
            lines += [f"{n} {mpmath.nstr(v, 40)}" for n, v in sorted(f.hecke.items())]
        lines.append("")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
