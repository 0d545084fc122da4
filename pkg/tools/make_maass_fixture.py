"""Generate Hecke eigenvalues of level-one Maass cusp forms for the bundled fixture.

Two stages:

1. Hejhal's collocation method (high precision, mpmath) pins down the spectral
   parameter r and the first few coefficients.
2. Prime eigenvalues up to ``--pmax`` come from the Hecke operator identity
   lambda(p) phi(z) = p^{-1/2} [phi(pz) + sum_b phi((z+b)/p)], with phi evaluated
   through pullback to the fundamental domain (double precision, Chebyshev-
   interpolated K-Bessel).

The library itself never runs this; it only reads the resulting text file.

    python tools/make_maass_fixture.py --r 9.53369526135 --parity odd >> forms.txt
"""
import argparse
import sys

import numpy as np
from mpmath import mp, mpf, besselk, sqrt, pi, sin, cos, exp, matrix, lu_solve, floor
from numpy.polynomial import chebyshev as C


def pullback(x, y):
    while True:
        x = x - floor(x + mpf(1) / 2)
        d = x * x + y * y
        if d < 1 - mpf(10) ** -25:
            x, y = -x / d, y / d
        else:
            return x, y


def kscaled(r, x):
    return besselk(1j * r, x).real * exp(pi * r / 2)


def collocation(r, M, Q, Y, odd):
    cs = sin if odd else cos
    pts = []
    for m in range(1, Q + 1):
        xm = (m - mpf(1) / 2) / (2 * Q)
        xs, ys = pullback(xm, Y)
        pts.append((xm, xs, ys))
    rows = [[sqrt(ys) * kscaled(r, 2 * pi * l * ys) * cs(2 * pi * l * xs) for l in range(1, M + 1)]
            for (_, xs, ys) in pts]
    V = matrix(M, M)
    for n in range(1, M + 1):
        tw = [cs(2 * pi * n * p[0]) for p in pts]
        for l in range(1, M + 1):
            V[n - 1, l - 1] = 2 * sum(rows[m][l - 1] * tw[m] for m in range(Q)) / Q
        V[n - 1, n - 1] -= sqrt(Y) * kscaled(r, 2 * pi * n * Y)
    A = matrix(M - 1, M - 1)
    b = matrix(M - 1, 1)
    for i in range(1, M):
        b[i - 1] = -V[i, 0]
        for j in range(1, M):
            A[i - 1, j - 1] = V[i, j]
    c = lu_solve(A, b)
    return [mpf(1)] + [c[i] for i in range(M - 1)]


def refine_r(r0, M, Q, Y, odd, log):
    def g(r):
        c = collocation(r, M, Q, Y, odd)
        return c[1] * c[2] - c[5]
    r1 = r0 + mpf("1e-9")
    f0, f1 = g(r0), g(r1)
    for _ in range(12):
        r2 = r1 - f1 * (r1 - r0) / (f1 - f0)
        r0, f0, r1 = r1, f1, r2
        f1 = g(r1)
        log(f"secant r={mp.nstr(r1, 28)} residual={mp.nstr(f1, 3)}")
        if abs(r1 - r0) < mpf(10) ** (-mp.dps + 6):
            break
    return r1


class KTable:
    """Piecewise Chebyshev table of e^{pi r/2} K_{ir}(x) on [x_lo, x_hi]."""

    def __init__(self, r, x_lo=5.0, x_hi=120.0, width=2.0, deg=28):
        self.edges = np.arange(x_lo, x_hi + width, width)
        self.width = width
        self.x_lo = x_lo
        self.x_hi = self.edges[-1]
        nodes = np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1))
        self.coef = []
        for a in self.edges[:-1]:
            xs = a + (nodes + 1) * width / 2
            vals = [float(kscaled(r, mpf(float(x)))) for x in xs]
            self.coef.append(C.chebfit(nodes, vals, deg))
        self.coef = np.array(self.coef)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        ok = x < self.x_hi
        idx = np.floor((x[ok] - self.x_lo) / self.width).astype(int)
        t = 2 * (x[ok] - self.edges[idx]) / self.width - 1
        # Clenshaw per point, vectorised over the coefficient rows
        cf = self.coef[idx]
        b1 = np.zeros_like(t)
        b2 = np.zeros_like(t)
        for j in range(cf.shape[1] - 1, 0, -1):
            b1, b2 = 2 * t * b1 - b2 + cf[:, j], b1
        out[ok] = t * b1 - b2 + cf[:, 0]
        return out


def pullback_np(x, y):
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    for _ in range(10000):
        x = x - np.floor(x + 0.5)
        d = x * x + y * y
        inside = d < 1.0 - 1e-14
        if not inside.any():
            return x, y
        x = np.where(inside, -x / d, x)
        y = np.where(inside, y / d, y)
    raise RuntimeError("pullback did not terminate")


def phi_values(coeffs, ktab, odd, x, y):
    x, y = pullback_np(x, y)
    cs = np.sin if odd else np.cos
    total = np.zeros_like(x)
    for n, c in enumerate(coeffs, start=1):
        total += c * np.sqrt(y) * ktab(2 * np.pi * n * y) * cs(2 * np.pi * n * x)
    return total


def primes_upto(n):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def hecke_primes(coeffs, ktab, odd, pmax):
    bases = [complex(0.137, 0.91), complex(-0.211, 1.07), complex(0.305, 0.97),
             complex(0.043, 1.21), complex(-0.377, 0.94)]
    phi0 = np.array([phi_values(coeffs, ktab, odd, [z.real], [z.imag])[0] for z in bases])
    out = {}
    for p in primes_upto(pmax):
        acc = np.zeros(len(bases))
        for i, z in enumerate(bases):
            b = np.arange(p)
            xs = np.concatenate([[p * z.real], (z.real + b) / p])
            ys = np.concatenate([[p * z.imag], np.full(p, z.imag / p)])
            acc[i] = phi_values(coeffs, ktab, odd, xs, ys).sum() / np.sqrt(p)
        out[p] = float(np.dot(acc, phi0) / np.dot(phi0, phi0))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r", required=True)
    ap.add_argument("--parity", choices=["even", "odd"], required=True)
    ap.add_argument("--pmax", type=int, default=1000)
    ap.add_argument("--direct", type=int, default=12, help="coefficients kept from collocation")
    ap.add_argument("--dps", type=int, default=30)
    a = ap.parse_args()
    mp.dps = a.dps
    log = lambda s: print(s, file=sys.stderr, flush=True)
    odd = a.parity == "odd"
    r = refine_r(mpf(a.r), 22, 34, mpf("0.55"), odd, log)
    ca = collocation(r, 22, 34, mpf("0.55"), odd)
    cb = collocation(r, 26, 40, mpf("0.45"), odd)
    direct_err = max(abs(ca[n] - cb[n]) for n in range(a.direct))
    log(f"collocation agreement n<={a.direct}: {mp.nstr(direct_err, 3)}")

    ktab = KTable(r)
    lam = hecke_primes([float(c) for c in ca[:20]], ktab, odd, a.pmax)
    small = [p for p in lam if p <= a.direct]
    hecke_err = max(abs(lam[p] - float(ca[p - 1])) for p in small)
    log(f"Hecke-point vs collocation on p<={a.direct}: {hecke_err:.2e}")
    prec = max(1e-12, 10 * hecke_err)

    print("type maass")
    print(f"r {mp.nstr(r, 24)}")
    print(f"parity {a.parity}")
    print(f"coeff_precision {prec:.1e}")
    print("source Hejhal collocation (n<=%d) and Hecke-point evaluation (primes<=%d)" % (a.direct, a.pmax))
    for n in range(1, a.direct + 1):
        print(n, mp.nstr(ca[n - 1], 22))
    for p, v in lam.items():
        if p > a.direct:
            print(p, repr(v))
    print()


if __name__ == "__main__":
    main()
