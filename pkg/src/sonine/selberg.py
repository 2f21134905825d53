"""Selberg integral closed form, the Sonine density f_{k,h} and the set Sigma(k2)."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .errors import ConditioningWarning, DomainError, PoleParameter
from .hypergeom import MultiplicityB

POLE_TOL = 1e-9
NEAR_POLE_TOL = 1e-6
LATTICE_TOL = 1e-12


@dataclass(frozen=True)
class SelbergParams:
    n: int
    kappa: float
    mu: complex
    nu: complex

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")

    @property
    def integrable(self) -> bool:
        """Whether the defining integral converges (not just the closed form)."""
        bound = self.kappa * (self.n - 1)
        return np.real(self.mu) > bound and np.real(self.nu) > bound

    def beta_exponents(self) -> tuple[complex, complex]:
        """Per-axis exponents ``(a, b)`` of ``x^a (1-x)^b`` in the Selberg weight."""
        shift = self.kappa * (self.n - 1) + 1
        return self.mu - shift, self.nu - shift


@dataclass(frozen=True)
class Pole:
    """Marker returned by :func:`selberg_In` on a pole of the gamma product.

    The offending argument ``param - kappa*j`` equals ``-m``.
    """

    param: str
    j: int
    m: int
    location: complex


def _nearest_nonpositive_integer(x: complex) -> tuple[int, float] | None:
    re = float(np.real(x))
    if re > 0.5:
        return None
    m = -round(re)
    return m, abs(x + m)


def selberg_In(p: SelbergParams) -> complex | float | Pole:
    """Gamma-product closed form of the Selberg integral ``I_n(kappa, mu, nu)``.

    Returns a :class:`Pole` when ``mu`` or ``nu`` lies on ``{kappa*j - m}``.
    The product is accumulated in log space.
    """
    n, kappa, mu, nu = p.n, p.kappa, p.mu, p.nu
    for name, val in (("mu", mu), ("nu", nu)):
        for j in range(n):
            arg = val - kappa * j
            hit = _nearest_nonpositive_integer(arg)
            if hit is None:
                continue
            m, dist = hit
            if dist < POLE_TOL:
                return Pole(name, j, m, complex(kappa * j - m))
            if dist < NEAR_POLE_TOL:
                warnings.warn(
                    f"{name}={val} is within {dist:.1e} of a pole of I_n",
                    ConditioningWarning,
                    stacklevel=2,
                )
    logval = 0j
    for j in range(1, n + 1):
        logval += loggamma(1 + kappa * j) - loggamma(1 + kappa)
    for j in range(n):
        denom = mu + nu - kappa * j
        hit = _nearest_nonpositive_integer(denom)
        if hit is not None and hit[1] < POLE_TOL:
            return 0.0
        logval += loggamma(complex(mu - kappa * j)) + loggamma(complex(nu - kappa * j))
        logval -= loggamma(complex(denom))
    value = complex(np.exp(logval))
    if np.isreal(mu) and np.isreal(nu):
        return value.real
    return value


def selberg_weight(p: SelbergParams, x) -> np.ndarray:
    """Unnormalized Selberg weight at rows of ``x`` in ``(0,1)^n``."""
    X = np.atleast_2d(np.asarray(x, dtype=float))
    a, b = p.beta_exponents()
    out = np.prod(X**a * (1 - X) ** b, axis=1)
    return out * vandermonde_power(X, 2 * p.kappa)


def selberg_density(p: SelbergParams, x) -> np.ndarray:
    """Normalized Selberg density ``s^kappa_{mu,nu}``."""
    norm = selberg_In(p)
    if isinstance(norm, Pole):
        raise PoleParameter(f"I_n has a pole at {norm}")
    return selberg_weight(p, x) / norm


def vandermonde_power(X: np.ndarray, power) -> np.ndarray:
    """``prod_{i<j} |x_i - x_j|^power`` over the rows of ``X``."""
    out = np.ones(X.shape[0], dtype=complex if np.iscomplexobj(power) else float)
    n = X.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            out = out * np.abs(X[:, i] - X[:, j]) ** power
    return out


@dataclass(frozen=True)
class SonineDensityParams:
    k: MultiplicityB
    h: complex
    n: int

    def __post_init__(self):
        if not np.real(self.h) > -np.real(self.k.k1):
            raise ValueError(f"need Re h > -Re k1, got h={self.h}, k1={self.k.k1}")

    @property
    def kprime(self) -> MultiplicityB:
        return self.k.shifted(self.h)

    @property
    def boundary_exponent(self):
        """Exponent of ``(1 - x_j^2)`` in the density."""
        return self.h - self.k.k2 * (self.n - 1) - 1

    def normalization(self):
        return selberg_In(SelbergParams(self.n, self.k.k2, self.k.mu(self.n), self.h))


def _density_norm(p: SonineDensityParams):
    norm = p.normalization()
    if isinstance(norm, Pole):
        raise PoleParameter(
            f"h={p.h} is a pole of I_n(k2, mu(k), .); the density vanishes identically there"
        )
    return norm


def sonine_density(p: SonineDensityParams, x):
    """Sonine density ``f_{k,h}`` at a point (or rows) of the open cube ``(0,1)^n``."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != p.n:
        raise ValueError(f"expected points with {p.n} coordinates")
    if np.any(X <= 0) or np.any(X >= 1):
        raise DomainError("sonine_density is defined on the open cube (0,1)^n only")
    norm = _density_norm(p)
    sq = X**2
    k1 = p.k.k1
    val = np.prod(np.exp(k1 * np.log(sq)) * (1 - sq) ** complex(p.boundary_exponent), axis=1)
    val = val * vandermonde_power(sq, 2 * p.k.k2) * (2.0**p.n / norm)
    if np.isreal(k1) and np.isreal(p.h):
        val = val.real
    return val[0] if single else val


def sonine_density_factors(p: SonineDensityParams):
    """Split ``f_{k,h}(x) = prod_j x_j^a (1-x_j)^b * smooth(x)``.

    Returns ``(a, b, smooth)``, suitable for Gauss-Jacobi absorption of the
    endpoint singularities.
    """
    norm = _density_norm(p)
    a = 2 * p.k.k1
    b = p.boundary_exponent
    real = np.isreal(p.k.k1) and np.isreal(p.h)

    def smooth(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        val = np.prod((1 + X) ** complex(b), axis=1)
        val = val * vandermonde_power(X**2, 2 * p.k.k2) * (2.0**p.n / norm)
        return val.real if real else val

    return (a.real if np.isreal(a) else a), (b.real if np.isreal(b) else b), smooth


class Membership(str, enum.Enum):
    CONTINUOUS = "ContinuousPart"
    DISCRETE = "DiscretePart"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class SigmaVerdict:
    membership: Membership
    detail: tuple[int, int] | None = None


def sigma_classify(h, k2: float, n: int) -> SigmaVerdict:
    """Locate ``h`` relative to ``Sigma(k2) = ]k2(n-1), inf[ u ({0, k2, ..., k2(n-1)} - Z_+)``.

    For the discrete part the smallest ``j`` with ``h = j*k2 - m`` is reported.
    """
    if abs(np.imag(h)) > LATTICE_TOL:
        return SigmaVerdict(Membership.OUTSIDE)
    h = float(np.real(h))
    if h > k2 * (n - 1):
        return SigmaVerdict(Membership.CONTINUOUS)
    for j in range(n):
        m = j * k2 - h
        mi = round(m)
        if mi >= 0 and abs(m - mi) < LATTICE_TOL:
            return SigmaVerdict(Membership.DISCRETE, (j, int(mi)))
    return SigmaVerdict(Membership.OUTSIDE)


def pole_set(k2: float, n: int, window: tuple[float, float]) -> list[float]:
    """Poles of ``h -> I_n(k2, mu(k), h)`` inside the closed ``window``, sorted."""
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    found: list[float] = []
    for j in range(n):
        top = j * k2
        m_min = max(0, math.ceil(top - hi - LATTICE_TOL))
        m = m_min
        while top - m >= lo - LATTICE_TOL:
            val = top - m
            if val <= hi + LATTICE_TOL and not any(abs(val - f) < LATTICE_TOL for f in found):
                found.append(val)
            m += 1
    return sorted(found)
