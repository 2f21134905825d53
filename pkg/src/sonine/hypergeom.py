"""The 0F1^alpha series of two matrix arguments and Bessel functions of type B."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceWarning, PochhammerZero, PoleParameter
from .jackcore import gen_pochhammer, jack_C_at_one, jack_C_table, rising

DEFAULT_MAX_WEIGHT = 16


@dataclass(frozen=True)
class MultiplicityB:
    """Multiplicity ``(k1, k2)`` on B_n: ``k1`` on ``+-e_i``, ``k2`` on ``+-e_i +- e_j``."""

    k1: complex
    k2: float

    def __post_init__(self):
        if np.real(self.k1) < 0:
            raise ValueError(f"Re k1 must be >= 0, got {self.k1}")
        if not self.k2 > 0:
            raise ValueError(f"k2 must be positive, got {self.k2}")

    @property
    def alpha(self) -> float:
        return 1.0 / self.k2

    def mu(self, n: int):
        return self.k1 + self.k2 * (n - 1) + 0.5

    def shifted(self, h) -> "MultiplicityB":
        """The multiplicity ``(k1 + h, k2)``."""
        return MultiplicityB(self.k1 + h, self.k2)


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series value with its truncation diagnostics.

    ``value`` is a scalar for a single evaluation point and an array for a
    batch; ``last_shell`` is the largest absolute contribution of the final
    shell ``|lam| = max_weight`` across the batch.
    """

    value: complex | np.ndarray
    max_weight: int
    last_shell: float
    terms: int
    diverging: bool = False


def _points(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=complex)
    return np.atleast_2d(arr), arr.ndim == 1


def _check_pochhammer(mu, lam, alpha: float) -> None:
    scale = max(1.0, abs(mu))
    for j, part in enumerate(lam):
        base = mu - j / alpha
        for i in range(part):
            if abs(base + i) < 1e-12 * scale:
                raise PochhammerZero(
                    f"(mu)_lambda^alpha vanishes: mu={mu}, lambda={tuple(lam)}, "
                    f"factor mu - {j}/alpha + {i} = 0"
                )


def hyp0f1(alpha: float, mu, z, w, max_weight: int = DEFAULT_MAX_WEIGHT) -> SeriesValue:
    """Partial sum over ``|lam| <= max_weight`` of ``0F1^alpha(mu; z, w)``.

    ``z`` and ``w`` are points of C^n, or stacks of points with shape
    ``(N, n)``; they broadcast against each other.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    Z, single_z = _points(z)
    W, single_w = _points(w)
    n = Z.shape[1]
    if W.shape[1] != n:
        raise ValueError(f"z has {n} coordinates but w has {W.shape[1]}")
    N = max(Z.shape[0], W.shape[0])
    total = np.zeros(N, dtype=complex)
    shells = []
    terms = 0
    for m in range(max_weight + 1):
        parts, cz = jack_C_table(m, alpha, Z)
        _, cw = jack_C_table(m, alpha, W)
        denom = np.empty(len(parts), dtype=complex)
        for i, lam in enumerate(parts):
            _check_pochhammer(mu, lam, alpha)
            denom[i] = gen_pochhammer(mu, lam, alpha) * jack_C_at_one(lam, alpha, n)
        shell = (cz * cw) @ (1.0 / denom) / math.factorial(m)
        total = total + shell
        shells.append(float(np.max(np.abs(shell))))
        terms += len(parts)
    tail = shells[-4:]
    diverging = len(tail) == 4 and all(a < b for a, b in zip(tail, tail[1:]))
    if diverging:
        warnings.warn(
            f"0F1 shells grew over the last three weights up to {max_weight}",
            DivergenceWarning,
            stacklevel=2,
        )
    value = total[0] if (single_z and single_w) else total
    return SeriesValue(value, max_weight, shells[-1], terms, diverging)


def bessel_B(k: MultiplicityB, z, w, max_weight: int = DEFAULT_MAX_WEIGHT) -> SeriesValue:
    """Bessel function ``J_k^B(z, w) = 0F1^alpha(mu(k); z^2/4, w^2)`` with ``alpha = 1/k2``."""
    Z = np.asarray(z, dtype=complex)
    W = np.asarray(w, dtype=complex)
    n = Z.shape[-1]
    return hyp0f1(k.alpha, k.mu(n), Z**2 / 4.0, W**2, max_weight)


def bessel_1d(a, z, tol: float = 1e-17, max_terms: int = 2000):
    """Normalized Bessel function ``j_a(z) = 0F1(a+1; -z^2/4)``.

    Accepts scalar or array ``z``; the power series is summed until every
    term drops below ``tol`` times the partial sum.
    """
    if np.isreal(a) and float(np.real(a)) <= -1 and float(np.real(a)).is_integer():
        raise PoleParameter(f"j_a undefined for a = {a} in {{-1, -2, ...}}")
    zz = np.asarray(z)
    arg = -(zz.astype(complex) ** 2) / 4.0
    term = np.ones_like(arg)
    total = np.ones_like(arg)
    for m in range(1, max_terms):
        term = term * arg / ((a + m) * m)
        total = total + term
        if np.all(np.abs(term) <= tol * np.maximum(np.abs(total), 1e-300)) and m > 2:
            break
    if np.isrealobj(zz) and np.isreal(a):
        total = total.real
    return total[()] if total.ndim == 0 else total


def dunkl_kernel_1d(k: float, x, z):
    """Rank-one Dunkl kernel ``E_k(x, z)`` for the root system ``{+-1}``.

    Even part ``j_{k-1/2}(ixz)``, odd part ``xz/(2k+1) j_{k+1/2}(ixz)``.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    xz = np.asarray(x) * np.asarray(z)
    iy = 1j * xz
    out = bessel_1d(k - 0.5, iy) + xz / (2 * k + 1) * bessel_1d(k + 0.5, iy)
    if np.isrealobj(xz):
        out = np.real(out)
    return out[()] if np.ndim(out) == 0 else out


def dunkl_kernel_1d_coeffs(k: float, z, degree: int) -> np.ndarray:
    """Taylor coefficients in ``x`` of ``E_k(x, z)`` up to ``x**degree``."""
    c = np.zeros(degree + 1, dtype=complex)
    q = z * z / 4.0
    for m in range(degree // 2 + 1):
        if 2 * m <= degree:
            c[2 * m] = q**m / (rising(k + 0.5, m) * math.factorial(m))
        if 2 * m + 1 <= degree:
            c[2 * m + 1] = z / (2 * k + 1) * q**m / (rising(k + 1.5, m) * math.factorial(m))
    return c


def dunkl_operator_1d(coeffs: np.ndarray, k: float) -> np.ndarray:
    """Apply ``T f = f' + k (f(x) - f(-x)) / x`` to a polynomial given by coefficients."""
    coeffs = np.asarray(coeffs)
    out = np.zeros(max(len(coeffs) - 1, 1), dtype=coeffs.dtype)
    for m in range(1, len(coeffs)):
        out[m - 1] = coeffs[m] * (m + (2 * k if m % 2 else 0.0))
    return out

