"""Adaptive Gauss-Legendre quadrature in gmpy2 arithmetic.

Integrals over (0, inf) are taken in the variable v = ln y.  The range is
split into panels of bounded phase (frequency times width), each panel is
integrated with an n-point Gauss-Legendre rule, and the panel with the
largest error estimate (rule on the panel against the rule on its two
halves) is bisected until the summed estimate meets the tolerance.

Panel sums are reduced in left-to-right order so results are reproducible
bit for bit at fixed precision.
"""
from __future__ import annotations

import heapq
import math
import threading

import gmpy2
import mpmath
from mpmath import mp

from . import _gmp
from .special_core import AccuracyError

_NODE_CACHE = {}
_NODE_LOCK = threading.Lock()


def gauss_legendre(n, bits):
    """Nodes and weights on [-1, 1] as gmpy2 reals at bits + guard precision."""
    key = (n, bits)
    with _NODE_LOCK:
        hit = _NODE_CACHE.get(key)
    if hit is not None:
        return hit
    work = bits + _gmp.GUARD_BITS + 16
    nodes, weights = [], []
    with mp.workprec(work):
        for i in range(1, n + 1):
            x = mpmath.cos(mp.pi * (i - mpmath.mpf(1) / 4) / (n + mpmath.mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpmath.mpf(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpmath.mpf(2) ** (-work + 4):
                    break
            p0, p1 = mpmath.mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    with _gmp.context(bits):
        out = ([_gmp.to_real(x) for x in nodes], [_gmp.to_real(w) for w in weights])
    with _NODE_LOCK:
        _NODE_CACHE[key] = out
    return out


def _rule(f, a, b, nodes, weights):
    half = (b - a) / 2
    mid = (a + b) / 2
    acc = 0
    for x, w in zip(nodes, weights):
        acc += w * f(mid + half * x)
    return acc * half


def _evaluate_panel(f, a, b, nodes, weights):
    """Rule on the two halves, plus |whole - halves| as the error estimate."""
    m = (a + b) / 2
    whole = _rule(f, a, b, nodes, weights)
    halves = _rule(f, a, m, nodes, weights) + _rule(f, m, b, nodes, weights)
    return halves, abs(whole - halves)


def integrate(f, a, b, rel_tol, *, width=1.0, abs_floor=0, n=24, bits=None, max_panels=20000):
    """Integrate f over [a, b] (gmpy2 reals in, gmpy2 numbers out).

    Returns (value, error_estimate) as gmpy2 numbers.  Must be called inside
    ``_gmp.context(bits)``.  Raises AccuracyError with the best value when
    max_panels is exhausted.
    """
    bits = bits or mp.prec
    nodes, weights = gauss_legendre(n, bits)
    a, b = gmpy2.mpfr(a), gmpy2.mpfr(b)
    count = max(1, int(math.ceil(float(b - a) / width)))
    step = (b - a) / count
    panels = {}
    heap = []
    total, total_err = 0, 0
    for i in range(count):
        lo = a + i * step
        hi = b if i == count - 1 else a + (i + 1) * step
        val, err = _evaluate_panel(f, lo, hi, nodes, weights)
        panels[i] = (lo, hi, val, err)
        heap.append((-float(err), i))
        total += val
        total_err += err
    heapq.heapify(heap)
    next_id = count
    while total_err > max(rel_tol * abs(total), abs_floor):
        if len(panels) >= max_panels:
            raise AccuracyError("quadrature did not converge",
                                best=_gmp.from_num(total), error_estimate=float(total_err))
        _, idx = heapq.heappop(heap)
        lo, hi, val, err = panels.pop(idx)
        total -= val
        total_err -= err
        mid = (lo + hi) / 2
        for sa, sb in ((lo, mid), (mid, hi)):
            v2, e2 = _evaluate_panel(f, sa, sb, nodes, weights)
            panels[next_id] = (sa, sb, v2, e2)
            heapq.heappush(heap, (-float(e2), next_id))
            total += v2
            total_err += e2
            next_id += 1
    # deterministic left-to-right reduction
    acc = 0
    for lo, hi, val, err in sorted(panels.values(), key=lambda p: p[0]):
        acc += val
    return acc, total_err


def integrate_log_scale(g, rel_tol, *, frequency, decay_low, v_low=-6.0, v_high=None,
                        y_high=None, n=24, bits=None, max_panels=20000, abs_floor=0):
    """Integrate h(y) dy/y over (0, inf) given g(v) = h(e^v) in gmpy2.

    ``frequency`` bounds the oscillation rate of g in v, ``decay_low`` is the
    exponent c with |g(v)| = O(e^{c v}) as v -> -inf.  The lower cutoff is
    pushed down until the neglected tail, bounded by max|g| on the first
    panel over c, is below the tolerance.  Returns (value, error) as mpmath
    numbers.
    """
    bits = bits or mp.prec
    if y_high is None:
        y_high = 2 * (bits + 24) * math.log(2) + 40
    v_high = math.log(y_high) if v_high is None else v_high
    width = min(1.0, 12.0 / max(frequency, 1e-9))
    with _gmp.context(bits):
        v_lo = min(v_low, v_high - 2)
        value, err = integrate(g, v_lo, v_high, rel_tol / 4, width=width, n=n, bits=bits,
                               max_panels=max_panels, abs_floor=abs_floor)
        while True:
            probe = max(abs(g(gmpy2.mpfr(v_lo) + j * gmpy2.mpfr(width) / 4)) for j in range(5))
            tail = probe / decay_low * 2
            target = max(rel_tol * abs(value) / 4, abs_floor)
            if tail <= target:
                break
            new_lo = v_lo - max(4.0, 2.0 / decay_low * math.log(max(float(tail / max(target, 1e-300)), 2.0)))
            extra, e2 = integrate(g, new_lo, v_lo, rel_tol / 4, width=width, n=n, bits=bits,
                                  max_panels=max_panels,
                                  abs_floor=max(rel_tol * abs(value) / 8, abs_floor))
            value += extra
            err += e2
            v_lo = new_lo
        err += tail
        return _gmp.from_num(value), _gmp.from_real(gmpy2.mpfr(err))
