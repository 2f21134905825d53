"""Tensor quadrature and Monte Carlo on the unit cube and the torus.

Random numbers come from numpy's Philox4x64 counter-based bit generator
(``numpy.random.Generator(numpy.random.Philox(seed))``), one stream per
call, drawn in C order.  A fixed seed reproduces results bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.special import betaln, roots_jacobi

from .errors import NonFiniteIntegrand, ParameterDomain
from .selberg import SelbergParams, vandermonde_power

Integrand = Callable[[np.ndarray], np.ndarray]

RNG_NAME = "Philox4x64-10"


class Method(str, enum.Enum):
    GAUSS_JACOBI = "GaussJacobiTensor"
    GAUSS_LEGENDRE = "GaussLegendreTensor"
    TRAPEZOID = "TrapezoidPeriodic"
    MONTE_CARLO = "MonteCarloBeta"


@dataclass(frozen=True)
class IntegrationSpec:
    """How to integrate: method, resolution and (for Monte Carlo) the seed.

    ``jacobi_exponents`` is a single pair ``(a, b)`` used on every axis or a
    tuple of per-axis pairs; the weight ``x^a (1-x)^b`` is absorbed into the
    rule and must not be included in the integrand.
    """

    method: Method = Method.GAUSS_LEGENDRE
    nodes: int = 96
    samples: int = 2**16
    seed: int = 0
    jacobi_exponents: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.method is Method.MONTE_CARLO:
            if self.samples < 1000:
                raise ValueError("Monte Carlo needs at least 1000 samples")
        elif self.nodes < 2:
            raise ValueError("need at least 2 nodes per axis")
        if self.jacobi_exponents is not None:
            object.__setattr__(self, "jacobi_exponents", _freeze(self.jacobi_exponents))

    def axis_exponents(self, n: int) -> list[tuple[float, float]]:
        ex = self.jacobi_exponents
        if ex is None:
            return [(0.0, 0.0)] * n
        if len(ex) == 2 and not isinstance(ex[0], tuple):
            return [(float(ex[0]), float(ex[1]))] * n
        if len(ex) != n:
            raise ValueError(f"need {n} exponent pairs, got {len(ex)}")
        return [(float(a), float(b)) for a, b in ex]

    def with_(self, **changes) -> "IntegrationSpec":
        data = asdict(self)
        data.update(changes)
        return IntegrationSpec(**data)

    def to_dict(self) -> dict:
        ex = self.jacobi_exponents
        if ex is not None:
            ex = [list(e) if isinstance(e, tuple) else e for e in ex]
        return {
            "method": self.method.value,
            "nodes": self.nodes,
            "samples": self.samples,
            "seed": self.seed,
            "jacobi_exponents": ex,
            "rng": RNG_NAME,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IntegrationSpec":
        return cls(
            method=Method(d["method"]),
            nodes=int(d["nodes"]),
            samples=int(d["samples"]),
            seed=int(d["seed"]),
            jacobi_exponents=d.get("jacobi_exponents"),
        )


def _freeze(ex):
    if isinstance(ex, (list, tuple)):
        return tuple(_freeze(e) for e in ex)
    return float(ex)


def gauss_jacobi_01(N: int, a: float = 0.0, b: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^1 x^a (1-x)^b g(x) dx``."""
    if a <= -1 or b <= -1:
        raise ParameterDomain(f"Jacobi exponents must exceed -1, got ({a}, {b})")
    t, w = roots_jacobi(N, b, a)
    return (1 + t) / 2, w / 2.0 ** (a + b + 1)


def tensor_rule(N: int, exponents: list[tuple[float, float]]):
    """Tensor-product Gauss-Jacobi rule on ``(0,1)^n``; returns ``(points, weights)``."""
    rules = [gauss_jacobi_01(N, a, b) for a, b in exponents]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wts = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return pts, wts


def _evaluate(f: Integrand, pts: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(pts))
    if vals.shape != (pts.shape[0],):
        vals = np.broadcast_to(vals, (pts.shape[0],))
    if not np.all(np.isfinite(vals)):
        bad = pts[~np.isfinite(vals)][0]
        raise NonFiniteIntegrand(f"integrand not finite at node {bad}")
    return vals


def _tensor(f: Integrand, N: int, exponents) -> complex:
    pts, wts = tensor_rule(N, exponents)
    return np.sum(_evaluate(f, pts) * wts)


def integrate_cube(f: Integrand, n: int, spec: IntegrationSpec) -> tuple[complex, float]:
    """Integrate ``f`` over ``(0,1)^n``; returns ``(value, error_estimate)``.

    ``f`` maps an ``(N, n)`` array of points to ``N`` values.  For tensor
    rules the error estimate is the difference to the rule with half the
    nodes; for Monte Carlo it is the standard error.
    """
    if spec.method is Method.TRAPEZOID:
        raise ValueError("TrapezoidPeriodic is a torus rule; use integrate_torus")
    if spec.method is Method.MONTE_CARLO:
        return _monte_carlo_cube(f, n, spec)
    if n > 3:
        raise ValueError("tensor rules are limited to n <= 3")
    exponents = spec.axis_exponents(n)
    if spec.method is Method.GAUSS_LEGENDRE and any(e != (0.0, 0.0) for e in exponents):
        raise ValueError("GaussLegendreTensor takes no Jacobi exponents")
    fine = _tensor(f, spec.nodes, exponents)
    coarse = _tensor(f, max(spec.nodes // 2, 1), exponents)
    return _scalar(fine), float(abs(fine - coarse))


def symmetric_pair_rule(N: int, a: float, b: float, gap: float):
    """Rule on ``(0,1)^2`` for symmetric integrands against
    ``(xy)^a ((1-x)(1-y))^b |x-y|^gap``.

    The square is folded onto one triangle and blown up at the corner with
    the more singular endpoint exponent, which turns the diagonal factor
    and that corner into one-dimensional Jacobi weights.  A bounded factor
    ``(1 - s v)^c`` with the other exponent ``c`` stays in the weights.
    """
    lo, hi = (b, a) if b <= a else (a, b)
    s, ws = gauss_jacobi_01(N, 2 * lo + gap + 1, hi)
    v, wv = gauss_jacobi_01(N, lo, gap)
    S, V = (g.ravel() for g in np.meshgrid(s, v, indexing="ij"))
    W = 2 * np.outer(ws, wv).ravel() * (1 - S * V) ** hi
    if b <= a:
        pts = np.stack([1 - S, 1 - S * V], axis=1)
    else:
        pts = np.stack([S, S * V], axis=1)
    return pts, W


def integrate_symmetric_pair(f: Integrand, spec: IntegrationSpec, gap: float) -> tuple[complex, float]:
    """Two-dimensional analogue of :func:`integrate_cube` for symmetric ``f``.

    ``spec.jacobi_exponents`` gives ``(a, b)``; ``|x - y|^gap`` is absorbed
    as well and must not appear in ``f``.
    """
    if spec.method is not Method.GAUSS_JACOBI:
        raise ValueError("the pair rule is a Gauss-Jacobi construction")
    (a, b), (a2, b2) = spec.axis_exponents(2)
    if (a, b) != (a2, b2):
        raise ValueError("the pair rule needs equal exponents on both axes")

    def run(N):
        pts, wts = symmetric_pair_rule(N, a, b, gap)
        return np.sum(_evaluate(f, pts) * wts)

    fine = run(spec.nodes)
    coarse = run(max(spec.nodes // 2, 1))
    return _scalar(fine), float(abs(fine - coarse))


def _monte_carlo_cube(f: Integrand, n: int, spec: IntegrationSpec) -> tuple[complex, float]:
    rng = np.random.Generator(np.random.Philox(spec.seed))
    exponents = spec.axis_exponents(n)
    cols = []
    log_norm = 0.0
    for a, b in exponents:
        cols.append(rng.beta(a + 1, b + 1, size=spec.samples))
        log_norm += betaln(a + 1, b + 1)
    X = np.stack(cols, axis=1)
    vals = _evaluate(f, X) * math.exp(log_norm)
    mean = np.mean(vals)
    se = float(np.std(vals, ddof=1) / math.sqrt(spec.samples))
    return _scalar(mean), se


def _scalar(x):
    x = complex(x)
    return x.real if x.imag == 0 else x


def torus_grid(N: int, n: int) -> np.ndarray:
    """Uniform ``N^n`` grid on ``[0, 2pi)^n`` as an ``(N^n, n)`` array."""
    t = 2 * np.pi * np.arange(N) / N
    grids = np.meshgrid(*([t] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def integrate_torus(f: Integrand, n: int, spec: IntegrationSpec) -> tuple[complex, float]:
    """Normalized trapezoid integral ``(2pi)^-n int_{T^n} f``; returns ``(value, error_estimate)``."""
    if spec.method is not Method.TRAPEZOID:
        raise ValueError("integrate_torus needs a TrapezoidPeriodic spec")
    if n > 2:
        raise ValueError("torus rules are limited to n <= 2")
    N = spec.nodes
    vals = _evaluate(f, torus_grid(N, n))
    fine = np.mean(vals)
    if N % 2 == 0:
        sub = vals.reshape((N,) * n)[(slice(None, None, 2),) * n]
        err = float(abs(fine - np.mean(sub)))
    else:
        err = float("nan")
    return _scalar(fine), err


@dataclass(frozen=True)
class WeightedSample:
    """Importance sample for the normalized Selberg density.

    ``points`` are drawn from the product Beta proposal; ``weights`` carry
    the cross term ``prod_{i<j} |x_i - x_j|^{2 kappa}``.
    """

    points: np.ndarray
    weights: np.ndarray
    log_proposal_norm: float

    def expectation(self, g: Integrand) -> tuple[complex, float]:
        """Self-normalized estimate of ``E[g]`` with a delta-method standard error."""
        vals = np.asarray(g(self.points))
        w = self.weights
        est = np.sum(w * vals) / np.sum(w)
        resid = w * (vals - est)
        se = math.sqrt(float(np.sum(np.abs(resid) ** 2))) / float(np.sum(w))
        return _scalar(est), se

    def normalizer(self) -> tuple[float, float]:
        """Estimate of ``I_n`` (the unnormalized total mass) with its standard error."""
        scale = math.exp(self.log_proposal_norm)
        w = self.weights
        return float(np.mean(w) * scale), float(np.std(w, ddof=1) / math.sqrt(len(w)) * scale)


def sample_selberg(p: SelbergParams, samples: int, seed: int) -> WeightedSample:
    """Draw ``samples`` points from independent Beta proposals, weighted toward ``s^kappa_{mu,nu}``."""
    if np.iscomplexobj(p.mu) or np.iscomplexobj(p.nu):
        raise ParameterDomain("sampling needs real mu and nu")
    a = float(p.mu) - p.kappa * (p.n - 1)
    b = float(p.nu) - p.kappa * (p.n - 1)
    if a <= 0 or b <= 0:
        raise ParameterDomain(f"Beta proposal parameters must be positive, got ({a}, {b})")
    rng = np.random.Generator(np.random.Philox(seed))
    X = rng.beta(a, b, size=(samples, p.n))
    w = vandermonde_power(X, 2 * p.kappa)
    return WeightedSample(X, w, p.n * float(betaln(a, b)))
