"""Reference implementations used only by the tests.

They share no code with the package: Jack polynomials come from the
branching rule over horizontal strips, Jacobi polynomials from the exact
terminating hypergeometric sum in rational arithmetic, and Bessel
functions from scipy's ``jv``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gamma, jv


def _conj(lam):
    return [sum(1 for p in lam if p > j) for j in range(lam[0])] if lam else []


def _h_star_upper(lam, conj, i, j, alpha):
    # h^*_lam(i, j) = lam'_j - i + alpha (lam_i - j + 1), 1-based cell (i, j)
    return conj[j - 1] - i + alpha * (lam[i - 1] - j + 1)


def _h_lower_star(lam, conj, i, j, alpha):
    # h_*^lam(i, j) = lam'_j - i + 1 + alpha (lam_i - j), 1-based cell (i, j)
    return conj[j - 1] - i + 1 + alpha * (lam[i - 1] - j)


def _strip_predecessors(lam):
    """All ``mu`` with ``lam / mu`` a horizontal strip."""
    lam = list(lam)
    ranges = [range(lam[i + 1] if i + 1 < len(lam) else 0, lam[i] + 1) for i in range(len(lam))]

    def rec(i, acc):
        if i == len(lam):
            yield tuple(p for p in acc if p > 0)
            return
        for v in ranges[i]:
            yield from rec(i + 1, acc + [v])

    yield from rec(0, [])


def _beta(lam, mu, alpha):
    lc, mc = _conj(lam), _conj(mu)
    num = den = 1.0
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            same = (mc[j - 1] if j - 1 < len(mc) else 0) == lc[j - 1]
            num *= _h_star_upper(lam, lc, i, j, alpha) if same else _h_lower_star(lam, lc, i, j, alpha)
    for i, row in enumerate(mu, start=1):
        for j in range(1, row + 1):
            same = mc[j - 1] == lc[j - 1]
            den *= _h_star_upper(mu, mc, i, j, alpha) if same else _h_lower_star(mu, mc, i, j, alpha)
    return num / den


def jack_J(lam, alpha, x):
    """Integral-form Jack polynomial ``J_lam`` by the branching rule."""
    lam = tuple(p for p in lam if p > 0)
    x = list(x)
    if not lam:
        return 1.0
    if len(lam) > len(x):
        return 0.0
    if len(x) == 1:
        # J_(m)(x) = prod_{j<m} (1 + alpha j) x^m
        return math.prod(1 + alpha * j for j in range(lam[0])) * x[0] ** lam[0]
    total = 0.0
    for mu in _strip_predecessors(lam):
        if len(mu) > len(x) - 1:
            continue
        total += jack_J(mu, alpha, x[:-1]) * x[-1] ** (sum(lam) - sum(mu)) * _beta(lam, mu, alpha)
    return total


def j_constant(lam, alpha):
    lc = _conj(lam)
    out = 1.0
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            out *= _h_star_upper(lam, lc, i, j, alpha) * _h_lower_star(lam, lc, i, j, alpha)
    return out


def jack_C_oracle(lam, alpha, x):
    lam = tuple(p for p in lam if p > 0)
    m = sum(lam)
    return alpha**m * math.factorial(m) / j_constant(lam, alpha) * jack_J(lam, alpha, x)


def jack_C_at_one_oracle(lam, alpha, n):
    lam = tuple(p for p in lam if p > 0)
    m = sum(lam)
    prod = 1.0
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            prod *= n - (i - 1) + alpha * (j - 1)
    return alpha**m * math.factorial(m) / j_constant(lam, alpha) * prod


def jacobi_R_exact(n: int, a: Fraction, b: Fraction, x: Fraction) -> Fraction:
    """``2F1(-n, n+a+b+1; a+1; (1-x)/2)`` summed exactly."""
    y = (1 - x) / 2
    term = Fraction(1)
    total = Fraction(1)
    for j in range(n):
        term *= Fraction(-n + j) * (n + a + b + 1 + j) / ((a + 1 + j) * (j + 1)) * y
        total += term
    return total


def bessel_j_normalized(a, z):
    """``j_a(z) = Gamma(a+1) (z/2)^{-a} J_a(z)``, with the removable point at 0."""
    z = np.asarray(z, dtype=float)
    # below 1e-6 the two-term series is exact in double precision and avoids 0 * inf
    out = 1 - z**2 / (4 * (a + 1))
    big = np.abs(z) >= 1e-6
    out[big] = gamma(a + 1) * (z[big] / 2) ** (-a) * jv(a, z[big])
    return out


@lru_cache(maxsize=None)
def rising(x: float, m: int) -> float:
    return math.prod(x + i for i in range(m))
