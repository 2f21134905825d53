"""Partitions, generalized Pochhammer symbols and Jack polynomials C_lambda^alpha.

Jack polynomials are held in the monomial symmetric basis.  The monic
P-normalized coefficients come from the eigen-recursion of the
Sekiguchi-Stanley operator; the C-normalization is then fixed degree by
degree by requiring ``sum_{|lam|=m} C_lam(x) = (x_1 + ... + x_n)^m``.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

#: Monomial coefficient tables are memoized for partitions up to this weight.
CACHE_MAX_WEIGHT = 20


class Partition(tuple):
    """Weakly decreasing tuple of nonnegative integers.

    Trailing zeros are dropped on construction, so ``Partition((2, 0))``
    equals both ``(2,)`` and ``(2, 0)``.
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts):
            raise ValueError(f"partition parts must be nonnegative: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts.pop()
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self) > n:
            raise ValueError(f"partition {tuple(self)} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def __eq__(self, other):
        if isinstance(other, tuple):
            return tuple(self) == _strip(other)
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(tuple(self))

    def __repr__(self):
        return f"Partition({tuple(self)})"


def _strip(t: tuple) -> tuple:
    t = tuple(t)
    while t and t[-1] == 0:
        t = t[:-1]
    return t


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


def _partitions(m: int, n: int, maxpart: int) -> Iterable[tuple[int, ...]]:
    if m == 0:
        yield ()
        return
    if n == 0:
        return
    for p in range(min(m, maxpart), 0, -1):
        for rest in _partitions(m - p, n - 1, p):
            yield (p,) + rest


def enumerate_partitions(m: int, n: int) -> list[Partition]:
    """All partitions of ``m`` with at most ``n`` parts, in reverse-lexicographic order.

    >>> enumerate_partitions(3, 2)
    [Partition((3,)), Partition((2, 1))]
    """
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    return [Partition(p) for p in _partitions(m, n, m)]


def dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True when ``lam >= mu`` in dominance order (equal weights assumed)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def rising(x, m: int):
    """Rising factorial ``x (x+1) ... (x+m-1)``."""
    out = 1.0
    for i in range(m):
        out *= x + i
    return out


def gen_pochhammer(mu, lam, alpha: float):
    """Generalized Pochhammer symbol ``prod_j (mu - (j-1)/alpha)_{lam_j}``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    out = 1.0
    for j, part in enumerate(_as_partition(lam)):
        out *= rising(mu - j / alpha, part)
    return out


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"Jack parameter alpha must be positive, got {alpha}")
    return alpha


def _monic_coeffs_uncached(lam: tuple[int, ...], alpha: float, maxlen: int) -> dict:
    m = sum(lam)
    mus = [mu for mu in _partitions(m, maxlen, m) if dominates(lam, mu)]
    half = alpha / 2.0

    def rho(p):
        return half * sum(x * x for x in p) - sum((i + 1) * x for i, x in enumerate(p))

    rho_lam = rho(lam)
    coeffs = {lam: 1.0}
    # mus is reverse-lex, hence every nu raising mu is already in coeffs
    for mu in mus:
        if mu == lam:
            continue
        acc = 0.0
        for i in range(len(mu)):
            for j in range(i + 1, len(mu)):
                for t in range(1, mu[j] + 1):
                    nu = list(mu)
                    nu[i] += t
                    nu[j] -= t
                    nu = tuple(sorted((x for x in nu if x), reverse=True))
                    c = coeffs.get(nu)
                    if c is not None:
                        acc += (mu[i] - mu[j] + 2 * t) * c
        coeffs[mu] = acc / (rho_lam - rho(mu))
    return coeffs


_monic_coeffs_cached = lru_cache(maxsize=None)(_monic_coeffs_uncached)


def monic_coeffs(lam, alpha: float, maxlen: int | None = None) -> dict:
    """Coefficients of the monic Jack polynomial P_lam in the monomial basis.

    Only monomials with at most ``maxlen`` parts are produced (default: all).
    """
    lam = tuple(_as_partition(lam))
    alpha = _check_alpha(alpha)
    maxlen = sum(lam) if maxlen is None else min(maxlen, max(sum(lam), 1))
    if sum(lam) <= CACHE_MAX_WEIGHT:
        return _monic_coeffs_cached(lam, alpha, maxlen)
    return _monic_coeffs_uncached(lam, alpha, maxlen)


def _multinomial(mu: tuple[int, ...]) -> float:
    out = math.factorial(sum(mu))
    for p in mu:
        out //= math.factorial(p)
    return float(out)


def _degree_table_uncached(m: int, alpha: float, n: int):
    parts = [tuple(p) for p in enumerate_partitions(m, n)]
    index = {p: i for i, p in enumerate(parts)}
    P = np.zeros((len(parts), len(parts)))
    for r, lam in enumerate(parts):
        for mu, c in monic_coeffs(lam, alpha, n).items():
            P[r, index[mu]] = c
    # sum_lam c_lam P_lam = p_1^m; P is unit lower triangular in revlex order
    target = np.array([_multinomial(mu) for mu in parts])
    norm = np.zeros(len(parts))
    for col in range(len(parts)):
        norm[col] = target[col] - norm[:col] @ P[:col, col]
    return parts, norm[:, None] * P


_degree_table_cached = lru_cache(maxsize=None)(_degree_table_uncached)


def degree_table(m: int, alpha: float, n: int):
    """Return ``(partitions, K)`` with ``C_lam = sum_mu K[lam, mu] m_mu``.

    Rows and columns follow ``enumerate_partitions(m, n)``.
    """
    alpha = _check_alpha(alpha)
    if m <= CACHE_MAX_WEIGHT:
        return _degree_table_cached(m, alpha, n)
    return _degree_table_uncached(m, alpha, n)


def _as_points(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x)
    if arr.dtype.kind not in "fc":
        arr = arr.astype(float)
    single = arr.ndim == 1
    return np.atleast_2d(arr), single


def monomial_values(mus: Sequence[tuple[int, ...]], X: np.ndarray) -> np.ndarray:
    """Evaluate monomial symmetric polynomials ``m_mu`` at the rows of ``X``.

    Returns an array of shape ``(len(X), len(mus))``.
    """
    N, n = X.shape
    top = max((max(mu) for mu in mus if mu), default=0)
    powers = np.ones((top + 1, N, n), dtype=X.dtype)
    for p in range(1, top + 1):
        powers[p] = powers[p - 1] * X
    out = np.zeros((N, len(mus)), dtype=X.dtype)
    cols = np.arange(n)
    for k, mu in enumerate(mus):
        if len(mu) > n:
            continue
        padded = tuple(mu) + (0,) * (n - len(mu))
        acc = np.zeros(N, dtype=X.dtype)
        for perm in set(itertools.permutations(padded)):
            acc += np.prod(powers[list(perm), :, cols], axis=0)
        out[:, k] = acc
    return out


def jack_C_table(m: int, alpha: float, x) -> tuple[list[Partition], np.ndarray]:
    """All ``C_lam(x)`` with ``|lam| = m``; values have shape ``(N, #partitions)``."""
    X, _ = _as_points(x)
    parts, K = degree_table(m, alpha, X.shape[1])
    return [Partition(p) for p in parts], monomial_values(parts, X) @ K.T


def jack_C(lam, alpha: float, x):
    """Jack polynomial ``C_lam^alpha`` evaluated at a point or at rows of ``x``."""
    lam = _as_partition(lam)
    alpha = _check_alpha(alpha)
    X, single = _as_points(x)
    n = X.shape[1]
    if len(lam) > n:
        out = np.zeros(X.shape[0], dtype=X.dtype)
    else:
        parts, K = degree_table(lam.weight, alpha, n)
        row = K[parts.index(tuple(lam))]
        keep = np.nonzero(row)[0]
        out = monomial_values([parts[i] for i in keep], X) @ row[keep]
    return out[0] if single else out


@lru_cache(maxsize=None)
def _at_one(lam: tuple[int, ...], alpha: float, n: int) -> float:
    return float(np.real(jack_C(lam, alpha, np.ones(n))))


def jack_C_at_one(lam, alpha: float, n: int) -> float:
    """``C_lam^alpha(1, ..., 1)`` in ``n`` variables (cached)."""
    return _at_one(tuple(_as_partition(lam)), _check_alpha(alpha), int(n))
