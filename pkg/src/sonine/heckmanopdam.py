"""Heckman-Opdam polynomials of type BC in rank 1 and 2.

Polynomials are built by Gram-Schmidt of the orbit sums ``M_lam`` against
the weight ``delta_k`` on the torus.  Inner products use the periodic
trapezoid rule with Richardson extrapolation over nested subgrids.  The
weight has algebraic singularities on the root hyperplanes, so the error
expansion contains the powers ``h^(s+1+2j)`` (one family per singular
exponent ``s``) in addition to the even powers; the extrapolation
eliminates the leading terms of that expansion.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditioned, ParameterDomain
from .hypergeom import MultiplicityB, bessel_1d, bessel_B
from .integrate import IntegrationSpec, Method
from .selberg import SigmaVerdict, sigma_classify

COND_LIMIT = 1e12
DEFAULT_NODES = {1: 4096, 2: 1024}
DEFAULT_LEVELS = {1: 6, 2: 5}

Weight = tuple[int, ...]


@dataclass(frozen=True)
class MultiplicityBC:
    """Multiplicity on BC_n: ``k1`` on ``e_i``, ``k2`` on ``2e_i``, ``k3`` on ``e_i +- e_j``."""

    k1: float
    k2: float
    k3: float = 0.0

    def __post_init__(self):
        if min(self.k1, self.k2, self.k3) < 0:
            raise ParameterDomain(f"multiplicities must be >= 0, got {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (float(self.k1), float(self.k2), float(self.k3))

    def jacobi_parameters(self) -> tuple[float, float]:
        """Rank-one Jacobi parameters ``(k1 + k2 - 1/2, k2 - 1/2)``."""
        return self.k1 + self.k2 - 0.5, self.k2 - 0.5

    def contracted(self) -> MultiplicityB:
        """Rational limit multiplicity ``(k1 + k2, k3)`` on B_n."""
        return MultiplicityB(self.k1 + self.k2, self.k3)

    def weight(self, t: np.ndarray) -> np.ndarray:
        """``delta_k`` at the rows of ``t`` (shape ``(N, n)``)."""
        t = np.atleast_2d(t)
        out = np.ones(t.shape[0])
        for i in range(t.shape[1]):
            out *= np.abs(np.sin(t[:, i] / 2)) ** (2 * self.k1)
            out *= np.abs(np.sin(t[:, i])) ** (2 * self.k2)
        for i, j in itertools.combinations(range(t.shape[1]), 2):
            d = np.sin((t[:, i] - t[:, j]) / 2) * np.sin((t[:, i] + t[:, j]) / 2)
            out *= np.abs(d) ** (2 * self.k3)
        return out


@dataclass(frozen=True)
class GeometricMultiplicity:
    """Multiplicity of the compact Grassmannian over a field of real dimension ``d``."""

    d: int
    m: int
    n: int

    def __post_init__(self):
        if self.d not in (1, 2, 4):
            raise ParameterDomain(f"d must be 1, 2 or 4, got {self.d}")
        if not self.m > self.n >= 1:
            raise ParameterDomain(f"need m > n >= 1, got m={self.m}, n={self.n}")

    @property
    def multiplicity(self) -> MultiplicityBC:
        d = self.d
        return MultiplicityBC(d * (self.m - self.n) / 2, (d - 1) / 2, d / 2)


# ---------------------------------------------------------------------------
# weights and orbit sums


def dominates(lam: Weight, mu: Weight) -> bool:
    """``mu <= lam`` in the dominance order on dominant BC weights."""
    a = np.cumsum(lam)
    b = np.cumsum(mu)
    return bool(np.all(a >= b))


def dominant_weights(n: int, cutoff: int | None = None, box: int | None = None) -> list[Weight]:
    """Dominant weights ``lam_1 >= ... >= lam_n >= 0`` in graded, then lexicographic order.

    Select by ``|lam|_1 <= cutoff`` or by ``lam_1 <= box``; both sets are
    closed under going down in dominance and the order extends dominance.
    """
    if n not in (1, 2):
        raise ValueError("rank must be 1 or 2")
    if (cutoff is None) == (box is None):
        raise ValueError("give exactly one of cutoff and box")
    top = cutoff if cutoff is not None else box
    out = []
    for lam in itertools.product(range(top + 1), repeat=n):
        if list(lam) != sorted(lam, reverse=True):
            continue
        if cutoff is not None and sum(lam) > cutoff:
            continue
        out.append(tuple(lam))
    out.sort(key=lambda lam: (sum(lam), lam))
    return out


def orbit(lam: Weight) -> list[Weight]:
    """Distinct images of ``lam`` under signed permutations."""
    pts = set()
    for perm in itertools.permutations(lam):
        for signs in itertools.product((1, -1), repeat=len(lam)):
            pts.add(tuple(s * p for s, p in zip(signs, perm)))
    return sorted(pts)


def orbit_sum(lam: Weight, n: int, t) -> float | np.ndarray:
    """``M_lam(t) = sum_{mu in W lam} cos(mu . t)``."""
    lam = tuple(int(v) for v in lam) + (0,) * (n - len(lam))
    T = np.asarray(t, dtype=float)
    single = T.ndim <= 1
    T = T.reshape(-1, n)
    out = np.zeros(T.shape[0])
    for mu in orbit(lam):
        out += np.cos(T @ np.asarray(mu, dtype=float))
    return out[0] if single else out


def orbit_sum_table(weights: list[Weight], n: int, t: np.ndarray) -> np.ndarray:
    T = np.asarray(t, dtype=float).reshape(-1, n)
    return np.stack([orbit_sum(lam, n, T) for lam in weights], axis=1)


# ---------------------------------------------------------------------------
# torus quadrature


def error_exponents(k: MultiplicityBC, n: int, count: int) -> list[float]:
    """Smallest ``count`` powers of the grid spacing in the trapezoid error for ``delta_k``."""
    def smooth(s):
        return abs(s / 2 - round(s / 2)) < 1e-12

    lines = [2 * k.k1 + 2 * k.k2, 2 * k.k2]
    points = []
    if n == 2:
        lines.append(2 * k.k3)
        sa, sb, sc = lines
        # corners where singular lines cross: (0,0), (pi,pi) and (0,pi)
        points = [2 * sa + 2 * sc, 2 * sb + 2 * sc]
        if not smooth(sa) and not smooth(sb):
            points.append(sa + sb)
    cand = {2.0 * j for j in range(1, count + 1)}
    for s in lines:
        if not smooth(s):
            cand.update(round(s + 1 + 2 * j, 12) for j in range(count))
    for s in points:
        if not smooth(s):
            cand.update(round(s + 2 + 2 * j, 12) for j in range(count))
    return sorted(cand)[:count]


def richardson_coefficients(exponents: list[float]) -> np.ndarray:
    """Weights ``c_l`` of the grids ``h * 2^l`` cancelling ``h^e`` for each listed ``e``."""
    L = len(exponents) + 1
    A = np.ones((L, L))
    for row, e in enumerate(exponents, start=1):
        A[row] = [2.0 ** (l * e) for l in range(L)]
    rhs = np.zeros(L)
    rhs[0] = 1.0
    return np.linalg.solve(A, rhs)


@dataclass(frozen=True)
class TorusRule:
    """Folded quadrature for W-invariant functions on the torus.

    ``points`` are orbit representatives, ``weights`` the summed
    (normalized) trapezoid/Richardson weights of their orbits.
    """

    points: np.ndarray
    weights: np.ndarray
    nodes: int
    levels: int
    exponents: tuple[float, ...]


def torus_rule(k: MultiplicityBC, n: int, nodes: int, levels: int) -> TorusRule:
    if nodes % (2 ** (levels - 1)):
        raise ValueError(f"{nodes} nodes cannot hold {levels} nested levels")
    exps = error_exponents(k, n, levels - 1)
    coef = richardson_coefficients(exps)
    idx = np.arange(nodes)
    if n == 1:
        grid = idx[:, None]
    else:
        grid = np.stack([g.ravel() for g in np.meshgrid(idx, idx, indexing="ij")], axis=1)
    w = np.zeros(grid.shape[0])
    for l, c in enumerate(coef):
        step = 2**l
        on = np.all(grid % step == 0, axis=1)
        w[on] += c / (nodes // step) ** n
    folded = np.minimum(grid, nodes - grid)
    folded = -np.sort(-folded, axis=1)
    base = nodes // 2 + 1
    key = folded[:, 0] * base + (folded[:, 1] if n == 2 else 0)
    uniq, inv = np.unique(key, return_inverse=True)
    wf = np.bincount(inv, weights=w)
    reps = np.stack([uniq // base, uniq % base], axis=1)[:, :n] if n == 2 else (uniq // base)[:, None]
    pts = 2 * np.pi * reps / nodes
    return TorusRule(pts, wf, nodes, levels, tuple(exps))


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class TrigPolynomial:
    """``sum_nu coeffs[nu] M_nu`` over a dominance-ordered ``support``."""

    lam: Weight
    support: tuple[Weight, ...]
    coeffs: np.ndarray

    def __call__(self, t) -> np.ndarray:
        n = len(self.lam)
        return orbit_sum_table(list(self.support), n, t) @ self.coeffs

    @property
    def leading(self) -> float:
        return float(self.coeffs[self.support.index(self.lam)])

    def coefficient(self, nu: Weight) -> float:
        return float(self.coeffs[self.support.index(tuple(nu))])

    def to_dict(self) -> dict:
        return {
            "lam": list(self.lam),
            "terms": [{"nu": list(nu), "coefficient": float(c)}
                      for nu, c in zip(self.support, self.coeffs) if c != 0],
        }


@dataclass
class HOFamily:
    """Monic ``P_lam`` and normalized ``R_lam = P_lam / P_lam(0)`` on a weight set.

    Row ``i`` of ``monic`` / ``normalized`` holds coefficients in the
    orbit-sum basis ordered as ``weights``.
    """

    k: MultiplicityBC
    n: int
    weights: list[Weight]
    monic: np.ndarray
    normalized: np.ndarray
    gram_condition: float
    orthogonality_residual: float
    quadrature_delta: float
    rule: dict = field(default_factory=dict)

    def index(self, lam: Weight) -> int:
        lam = tuple(int(v) for v in lam) + (0,) * (self.n - len(lam))
        return self.weights.index(lam)

    def polynomial(self, lam: Weight, normalized: bool = True) -> TrigPolynomial:
        i = self.index(lam)
        row = (self.normalized if normalized else self.monic)[i, : i + 1]
        return TrigPolynomial(self.weights[i], tuple(self.weights[: i + 1]), row.copy())

    def polynomials(self, normalized: bool = True) -> list[TrigPolynomial]:
        return [self.polynomial(lam, normalized) for lam in self.weights]

    def evaluate(self, t, normalized: bool = True) -> np.ndarray:
        """Values of every family member at the rows of ``t``; shape ``(N, len(weights))``."""
        A = self.normalized if normalized else self.monic
        return orbit_sum_table(self.weights, self.n, t) @ A.T

    def to_rows(self) -> list[dict]:
        rows = []
        for i, lam in enumerate(self.weights):
            for j in range(i + 1):
                rows.append({
                    "lam": list(lam), "nu": list(self.weights[j]),
                    "monic": float(self.monic[i, j]), "normalized": float(self.normalized[i, j]),
                    "comparable": dominates(lam, self.weights[j]),
                })
        return rows

    def to_dict(self) -> dict:
        return {
            "k": list(self.k.as_tuple()),
            "n": self.n,
            "rule": self.rule,
            "gram_condition": self.gram_condition,
            "orthogonality_residual": self.orthogonality_residual,
            "quadrature_delta": self.quadrature_delta,
            "polynomials": [p.to_dict() for p in self.polynomials()],
        }


def _rule_params(n: int, spec: IntegrationSpec | None, levels: int | None) -> tuple[int, int]:
    if spec is not None and spec.method is not Method.TRAPEZOID:
        raise ValueError("torus inner products need a TrapezoidPeriodic spec")
    nodes = spec.nodes if spec is not None else DEFAULT_NODES[n]
    return nodes, levels if levels is not None else DEFAULT_LEVELS[n]


def _gram_schmidt(k: MultiplicityBC, n: int, weights: list[Weight], rule: TorusRule):
    M = orbit_sum_table(weights, n, rule.points)
    G = M.T @ (M * (rule.weights * k.weight(rule.points))[:, None])
    G = (G + G.T) / 2
    scale = 1 / np.sqrt(np.abs(np.diag(G)))
    cond = float(np.linalg.cond(G * np.outer(scale, scale)))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditioned(f"Gram matrix condition {cond:.2e} exceeds {COND_LIMIT:.0e}")
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned("Gram matrix is not positive definite") from exc
    U = np.diag(np.diag(L)) @ np.linalg.inv(L)
    U = np.tril(U)
    H = U @ G @ U.T
    d = np.sqrt(np.abs(np.diag(H)))
    off = np.abs(H) / np.outer(d, d) - np.eye(len(weights))
    return U, cond, float(np.max(np.abs(off)))


def ho_family(k: MultiplicityBC, n: int, degree_cutoff: int | None = None,
              spec: IntegrationSpec | None = None, weights: list[Weight] | None = None,
              levels: int | None = None, estimate_error: bool = True) -> HOFamily:
    """Heckman-Opdam polynomials ``P_lam`` and ``R_lam`` for all weights up to the cutoff.

    ``weights`` overrides the weight set; it must be listed in an order
    extending dominance and be closed under going down.
    """
    if n == 1 and k.k3:
        raise ParameterDomain("rank one carries no k3")
    if weights is None:
        if degree_cutoff is None:
            raise ValueError("give degree_cutoff or weights")
        limit = 40 if n == 1 else 12
        if degree_cutoff > limit:
            raise ValueError(f"degree cutoff {degree_cutoff} exceeds {limit} at rank {n}")
        weights = dominant_weights(n, cutoff=degree_cutoff)
    weights = [tuple(int(v) for v in lam) for lam in weights]
    nodes, lv = _rule_params(n, spec, levels)
    rule = torus_rule(k, n, nodes, lv)
    U, cond, orth = _gram_schmidt(k, n, weights, rule)
    at_zero = U @ orbit_sum_table(weights, n, np.zeros((1, n)))[0]
    R = U / at_zero[:, None]
    delta = float("nan")
    if estimate_error and nodes // 2 >= 2 ** (lv - 1) * 2:
        coarse, *_ = _gram_schmidt(k, n, weights, torus_rule(k, n, nodes // 2, lv))
        delta = float(np.max(np.abs(coarse - U)))
    info = {"method": Method.TRAPEZOID.value, "nodes": nodes, "levels": lv,
            "exponents": list(rule.exponents)}
    return HOFamily(k, n, weights, U, R, cond, orth, delta, info)


def ho_polynomials(k: MultiplicityBC, n: int, degree_cutoff: int,
                   spec: IntegrationSpec | None = None, **kw) -> list[TrigPolynomial]:
    """Normalized polynomials ``R_lam`` for ``|lam|_1 <= degree_cutoff``."""
    return ho_family(k, n, degree_cutoff, spec, **kw).polynomials()


# ---------------------------------------------------------------------------
# connection coefficients


@dataclass
class ConnectionMatrix:
    """``R_lam(k'; .) = sum_nu c[lam, nu] R_nu(k; .)`` on a common weight set."""

    source: MultiplicityBC
    target: MultiplicityBC
    n: int
    weights: list[Weight]
    coeffs: np.ndarray
    residuals: np.ndarray

    def row(self, lam: Weight) -> np.ndarray:
        i = self.weights.index(tuple(lam))
        return self.coeffs[i, : i + 1]

    def comparable_mask(self) -> np.ndarray:
        P = len(self.weights)
        return np.array([[dominates(self.weights[i], self.weights[j]) for j in range(P)]
                         for i in range(P)])

    def min_coefficient(self) -> float:
        return float(np.min(self.coeffs[self.comparable_mask()]))

    def incomparable_max(self) -> float:
        """Largest coefficient on a dominance-incomparable pair (zero in exact arithmetic)."""
        mask = ~self.comparable_mask() & np.tri(len(self.weights), dtype=bool)
        return float(np.max(np.abs(self.coeffs[mask]))) if mask.any() else 0.0

    def row_sums(self) -> np.ndarray:
        return self.coeffs.sum(axis=1)

    def to_rows(self) -> list[dict]:
        mask = self.comparable_mask()
        return [
            {"lam": list(lam), "nu": list(self.weights[j]), "coefficient": float(self.coeffs[i, j]),
             "comparable": bool(mask[i, j])}
            for i, lam in enumerate(self.weights) for j in range(i + 1)
        ]

    def to_dict(self) -> dict:
        return {
            "source": list(self.source.as_tuple()),
            "target": list(self.target.as_tuple()),
            "n": self.n,
            "weights": [list(w) for w in self.weights],
            "coefficients": self.coeffs,
            "residuals": self.residuals,
            "min_coefficient": self.min_coefficient(),
            "incomparable_max": self.incomparable_max(),
        }


def ho_connection(k: MultiplicityBC, kp: MultiplicityBC, n: int, degree_cutoff: int | None = None,
                  spec: IntegrationSpec | None = None, weights: list[Weight] | None = None,
                  levels: int | None = None) -> ConnectionMatrix:
    """Connection coefficients from the ``k`` family to the ``k'`` family."""
    src = ho_family(k, n, degree_cutoff, spec, weights, levels, estimate_error=False)
    dst = src if kp == k else ho_family(kp, n, None, spec, src.weights, levels, estimate_error=False)
    A, B = src.normalized, dst.normalized
    C = np.tril(np.linalg.solve(A.T, B.T).T)
    # pointwise residual of the reconstruction on an off-grid test set
    rng = np.random.Generator(np.random.Philox(12345))
    T = rng.uniform(0, np.pi, size=(64, n))
    Msamp = orbit_sum_table(src.weights, n, T)
    direct = Msamp @ B.T
    rebuilt = (Msamp @ A.T) @ C.T
    res = np.max(np.abs(direct - rebuilt), axis=0)
    return ConnectionMatrix(k, kp, n, src.weights, C, res)


# ---------------------------------------------------------------------------
# sign scan and contraction


@dataclass
class SignScan:
    source: MultiplicityBC
    target: MultiplicityBC
    shift: float
    sigma: SigmaVerdict | None
    rows: list[dict]
    runtime_ms: int = 0

    @property
    def negative_rows(self) -> list[dict]:
        return [r for r in self.rows if r["negative"]]

    def to_dict(self) -> dict:
        return {
            "source": list(self.source.as_tuple()),
            "target": list(self.target.as_tuple()),
            "shift": self.shift,
            "sigma": None if self.sigma is None else {
                "membership": self.sigma.membership.value,
                "detail": list(self.sigma.detail) if self.sigma.detail else None,
            },
            "rows": self.rows,
            "negative_found": bool(self.negative_rows),
        }


def sign_scan(k: MultiplicityBC, kp: MultiplicityBC, n: int = 2, max_m: int = 6,
              spec: IntegrationSpec | None = None, levels: int | None = None,
              negative_threshold: float = -1e-8) -> SignScan:
    """Minimum coefficient and absolute row sum of the rows ``lam = (m, ..., m)``.

    Exploratory: a negative entry below ``negative_threshold`` is flagged,
    but nothing is asserted about its presence.
    """
    if n != 2:
        raise ValueError("sign_scan runs at rank 2")
    shift = (kp.k1 + kp.k2) - (k.k1 + k.k2)
    verdict = sigma_classify(shift, k.k3, n) if k.k3 > 0 else None
    weights = dominant_weights(n, box=max_m)
    start = time.perf_counter()
    conn = ho_connection(k, kp, n, spec=spec, weights=weights, levels=levels)
    mask = conn.comparable_mask()
    rows = []
    for m in range(1, max_m + 1):
        i = weights.index((m, m))
        c = conn.coeffs[i, : i + 1][mask[i, : i + 1]]
        nus = [w for j, w in enumerate(weights[: i + 1]) if mask[i, j]]
        j = int(np.argmin(c))
        rows.append({
            "m": m, "min_coefficient": float(c[j]), "argmin": list(nus[j]),
            "abs_sum": float(np.sum(np.abs(c))), "row_sum": float(np.sum(c)),
            "negative": bool(c[j] < negative_threshold),
        })
    return SignScan(k, kp, float(shift), verdict, rows, int((time.perf_counter() - start) * 1000))


@dataclass
class ContractionTable:
    k: MultiplicityBC
    lam: Weight
    t: tuple[float, ...]
    rows: list[dict]

    @property
    def errors(self) -> list[float]:
        return [r["error"] for r in self.rows]

    def to_dict(self) -> dict:
        return {"k": list(self.k.as_tuple()), "lam": list(self.lam), "t": list(self.t), "rows": self.rows}


def contraction_reference(k: MultiplicityBC, lam: Weight, t) -> float:
    """Rational limit ``J^B_{k0}(lam, i t)`` with ``k0 = (k1 + k2, k3)``."""
    lam = np.asarray(lam, dtype=float)
    t = np.asarray(t, dtype=float)
    if lam.size == 1:
        return float(bessel_1d(k.k1 + k.k2 - 0.5, float(lam[0] * t[0])))
    if k.k3 <= 0:
        raise ParameterDomain("the rank-two limit needs k3 > 0")
    val = bessel_B(k.contracted(), lam, 1j * t, max_weight=24).value
    return float(np.real(val))


def contraction_check(k: MultiplicityBC, lam: Weight, t, m_list, spec: IntegrationSpec | None = None,
                      levels: int | None = None) -> ContractionTable:
    """Errors ``|R_{m lam}(k; t/m) - J^B_{k0}(lam, i t)|`` for each ``m`` in ``m_list``."""
    lam = tuple(int(v) for v in lam)
    n = len(lam)
    t = np.asarray(t, dtype=float).reshape(n)
    m_list = [int(m) for m in m_list]
    if min(m_list) < 1:
        raise ValueError("scales m must be positive")
    ref = contraction_reference(k, lam, t)
    cutoff = max(m_list) * sum(lam)
    fam = ho_family(k, n, cutoff, spec, levels=levels, estimate_error=False)
    rows = []
    for m in m_list:
        i = fam.index(tuple(m * v for v in lam))
        val = float((orbit_sum_table(fam.weights, n, t / m) @ fam.normalized[i])[0])
        rows.append({"m": m, "value": val, "reference": ref, "error": abs(val - ref)})
    return ContractionTable(k, lam, tuple(float(v) for v in t), rows)


def family_rank1_check(k: MultiplicityBC, degree: int, points: int = 50) -> float:
    """Max deviation of the rank-one family from the Jacobi ``R_n^{(a, b)}(cos t)``."""
    from .rankone import jacobi_table

    a, b = k.jacobi_parameters()
    fam = ho_family(k, 1, degree, estimate_error=False)
    t = np.linspace(0, math.pi, points)
    return float(np.max(np.abs(fam.evaluate(t[:, None]) - jacobi_table(a, b, degree, np.cos(t)))))
