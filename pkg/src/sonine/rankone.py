"""Rank-one closed forms: Xu's intertwiner, the classical Sonine formula and
connection coefficients between Jacobi polynomial families."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import IllConditioned, ParameterDomain
from .hypergeom import bessel_1d
from .integrate import IntegrationSpec, Method, gauss_jacobi_01
from .reports import Identity, VerificationReport

DEFAULT_RANK1_SPEC = IntegrationSpec(Method.GAUSS_JACOBI, nodes=64)


@dataclass(frozen=True)
class JacobiParams:
    a: float
    b: float
    degree: int

    def __post_init__(self):
        if not (self.a > -1 and self.b > -1):
            raise ParameterDomain(f"Jacobi parameters must exceed -1, got ({self.a}, {self.b})")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")


def xu_constant(k: float, kp: float) -> float:
    return math.exp(gammaln(kp + 0.5) - gammaln(kp - k) - gammaln(k + 0.5))


def xu_intertwine(f, k: float, kp: float, x, spec: IntegrationSpec | None = None):
    """Apply ``V_{k',k}`` to ``f`` at ``x`` via Xu's integral over ``[-1, 1]``.

    The interval is folded onto ``[0, 1]``; Gauss-Jacobi absorbs
    ``t^{2k} (1-t)^{k'-k-1}`` and the factor ``(1+t)^{k'-k-1}`` stays in the
    integrand.  ``f`` must accept numpy arrays.
    """
    if not (kp > k >= 0):
        raise ParameterDomain(f"need k' > k >= 0, got k={k}, k'={kp}")
    spec = spec or DEFAULT_RANK1_SPEC
    c = kp - k - 1
    t, w = gauss_jacobi_01(spec.nodes, 2 * k, c)
    xs = np.asarray(x, dtype=float)
    xt = np.multiply.outer(xs, t)
    fp, fm = np.asarray(f(xt)), np.asarray(f(-xt))
    vals = ((fp + fm) + t * (fp - fm)) * (1 + t) ** c
    return xu_constant(k, kp) * (vals @ w)


def sonine_1d(a: float, b: float, z, spec: IntegrationSpec | None = None,
              tolerance: float = 1e-8) -> VerificationReport:
    """Check ``j_{a+b}(z) = c * int_0^1 j_a(zx) x^{2a+1} (1-x^2)^{b-1} dx``."""
    if not (a > -1 and b > 0):
        raise ParameterDomain(f"need a > -1 and b > 0, got a={a}, b={b}")
    spec = spec or DEFAULT_RANK1_SPEC
    start = time.perf_counter()
    lhs = bessel_1d(a + b, z)
    x, w = gauss_jacobi_01(spec.nodes, 2 * a + 1, b - 1)
    const = 2 * math.exp(gammaln(a + b + 1) - gammaln(a + 1) - gammaln(b))
    rhs = const * np.sum(bessel_1d(a, z * x) * (1 + x) ** (b - 1) * w)
    used = spec.with_(method=Method.GAUSS_JACOBI, jacobi_exponents=(2 * a + 1, b - 1))
    return VerificationReport.build(
        Identity.SONINE_0F1,
        {"n": 1, "a": a, "b": b, "z": complex(z)},
        lhs, rhs, tolerance, used,
        runtime_ms=(time.perf_counter() - start) * 1000,
    )


def jacobi_P_at_one(a: float, n: int) -> float:
    return math.exp(gammaln(n + a + 1) - gammaln(a + 1) - gammaln(n + 1))


def jacobi_table(a: float, b: float, max_degree: int, x) -> np.ndarray:
    """``R_j^{(a,b)}(x)`` for ``j = 0..max_degree``, stacked along the last axis.

    Uses the three-term recurrence for ``P_n^{(a,b)}`` and divides by ``P_n(1)``.
    """
    if not (a > -1 and b > -1):
        raise ParameterDomain(f"Jacobi parameters must exceed -1, got ({a}, {b})")
    x = np.asarray(x, dtype=float)
    P = np.empty(x.shape + (max_degree + 1,))
    P[..., 0] = 1.0
    if max_degree >= 1:
        P[..., 1] = (a + 1) + (a + b + 2) * (x - 1) / 2
    for n in range(2, max_degree + 1):
        s = 2 * n + a + b
        c1 = 2 * n * (n + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (n + a - 1) * (n + b - 1) * s
        P[..., n] = (c2 * P[..., n - 1] - c3 * P[..., n - 2]) / c1
    norms = np.array([jacobi_P_at_one(a, n) for n in range(max_degree + 1)])
    return P / norms


def jacobi_R(p: JacobiParams, x):
    """Jacobi polynomial normalized by ``R_n(1) = 1``."""
    out = jacobi_table(p.a, p.b, p.degree, x)[..., p.degree]
    return out[()] if np.ndim(out) == 0 else out


def jacobi_connection(a_src: float, b: float, a_dst: float, max_degree: int,
                      return_residuals: bool = False):
    """Lower-triangular ``c`` with ``R_n^{(a_dst,b)} = sum_j c[n, j] R_j^{(a_src,b)}``.

    Coefficients come from least squares on a Chebyshev grid; each row's
    max residual (relative to the row's target) must stay below 1e-8.
    """
    if max_degree > 30:
        raise ValueError("max_degree is limited to 30")
    M = 2 * (max_degree + 1) + 8
    x = np.cos(np.pi * (np.arange(M) + 0.5) / M)
    A = jacobi_table(a_src, b, max_degree, x)
    B = jacobi_table(a_dst, b, max_degree, x)
    C = np.zeros((max_degree + 1, max_degree + 1))
    res = np.zeros(max_degree + 1)
    for n in range(max_degree + 1):
        sub = A[:, : n + 1]
        coef, *_ = np.linalg.lstsq(sub, B[:, n], rcond=None)
        C[n, : n + 1] = coef
        res[n] = np.max(np.abs(sub @ coef - B[:, n])) / max(np.max(np.abs(B[:, n])), 1e-300)
        if res[n] > 1e-8:
            raise IllConditioned(f"connection row {n} has residual {res[n]:.2e}")
    return (C, res) if return_residuals else C
