"""Numerical checks of the Selberg, Kadell and Sonine integral identities,
and an integrability probe for the Sonine density near the cube boundary."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from .errors import ParameterDomain
from .hypergeom import DEFAULT_MAX_WEIGHT, MultiplicityB, bessel_B, hyp0f1
from .integrate import IntegrationSpec, Method, integrate_cube, integrate_symmetric_pair, sample_selberg
from .jackcore import Partition, gen_pochhammer, jack_C, jack_C_at_one
from .reports import Identity, VerificationReport
from .selberg import (
    Membership,
    Pole,
    SelbergParams,
    SonineDensityParams,
    pole_set,
    selberg_In,
    selberg_weight,
    sigma_classify,
    sonine_density_factors,
    vandermonde_power,
)

DEFAULT_SPEC = IntegrationSpec(Method.GAUSS_JACOBI, nodes=96)
MC_SAMPLES = 2**16


def default_tolerance(n: int) -> float:
    """Smooth one-dimensional weights reach 1e-8; the 2-D cross term caps accuracy near 1e-3."""
    return 1e-8 if n == 1 else 1e-3


def _elapsed(start: float) -> int:
    return int((time.perf_counter() - start) * 1000)


def _selberg_rule(p: SelbergParams, spec: IntegrationSpec | None) -> IntegrationSpec:
    spec = spec or DEFAULT_SPEC
    if spec.method is Method.GAUSS_JACOBI:
        a, b = p.beta_exponents()
        spec = spec.with_(jacobi_exponents=(float(np.real(a)), float(np.real(b))))
    return spec


def _selberg_expectation(p: SelbergParams, g, spec: IntegrationSpec):
    """``E[g]`` under the normalized Selberg density, by tensor quadrature or Monte Carlo."""
    if spec.method is Method.MONTE_CARLO:
        return sample_selberg(p, spec.samples, spec.seed).expectation(g)
    norm = selberg_In(p)
    if spec.method is Method.GAUSS_JACOBI:
        def integrand(X):
            return g(X) * vandermonde_power(X, 2 * p.kappa)
    else:
        def integrand(X):
            return g(X) * selberg_weight(p, X)
    value, err = integrate_cube(integrand, p.n, spec)
    return value / norm, err / abs(norm)


def _check_real_selberg(alpha: float, mu, nu, n: int) -> SelbergParams:
    if not alpha > 0:
        raise ParameterDomain("alpha must be positive")
    if np.iscomplexobj(mu) or np.iscomplexobj(nu):
        raise ParameterDomain("mu and nu must be real")
    bound = (n - 1) / alpha
    if not (mu > bound and nu > bound):
        raise ParameterDomain(f"need mu, nu > (n-1)/alpha = {bound}, got mu={mu}, nu={nu}")
    return SelbergParams(n, 1.0 / alpha, float(mu), float(nu))


def verify_selberg(p: SelbergParams, spec: IntegrationSpec | None = None,
                   tolerance: float | None = None) -> VerificationReport:
    """Closed form of ``I_n`` against direct integration of the Selberg weight."""
    start = time.perf_counter()
    if not p.integrable:
        raise ParameterDomain(f"Selberg integral diverges for {p}")
    lhs = selberg_In(p)
    if isinstance(lhs, Pole):
        raise ParameterDomain(f"closed form has a pole: {lhs}")
    spec = _selberg_rule(p, spec)
    if spec.method is Method.MONTE_CARLO:
        rhs, err = sample_selberg(p, spec.samples, spec.seed).normalizer()
    elif spec.method is Method.GAUSS_JACOBI:
        rhs, err = integrate_cube(lambda X: vandermonde_power(X, 2 * p.kappa), p.n, spec)
    else:
        rhs, err = integrate_cube(lambda X: selberg_weight(p, X), p.n, spec)
    tol = tolerance if tolerance is not None else default_tolerance(p.n)
    params = {"n": p.n, "kappa": p.kappa, "mu": p.mu, "nu": p.nu}
    return VerificationReport.build(Identity.SELBERG_CLOSED_FORM, params, lhs, rhs, tol, spec,
                                    _elapsed(start), {"error_estimate": err})


def verify_kadell(alpha: float, mu: float, nu: float, lam, n: int,
                  spec: IntegrationSpec | None = None, tolerance: float | None = None,
                  mc_samples: int | None = None) -> VerificationReport:
    """Jack moment of the Selberg density against the Pochhammer ratio.

    With ``mc_samples`` set, an independent Monte Carlo estimate and its
    standard error are attached under ``extra``.
    """
    start = time.perf_counter()
    lam = Partition(lam)
    if lam.weight > 6:
        raise ParameterDomain("|lam| is limited to 6")
    if len(lam) > n:
        raise ParameterDomain(f"partition {tuple(lam)} has more than {n} parts")
    p = _check_real_selberg(alpha, mu, nu, n)
    spec = _selberg_rule(p, spec)
    if spec.method is not Method.MONTE_CARLO and n > 2:
        raise ParameterDomain("tensor quadrature is limited to n <= 2 here")
    at_one = jack_C_at_one(lam, alpha, n)

    def moment(X):
        return np.real(jack_C(lam, alpha, X)) / at_one

    lhs, err = _selberg_expectation(p, moment, spec)
    rhs = gen_pochhammer(mu, lam, alpha) / gen_pochhammer(mu + nu, lam, alpha)
    extra = {"error_estimate": err}
    if mc_samples:
        mc_spec = IntegrationSpec(Method.MONTE_CARLO, samples=mc_samples, seed=spec.seed)
        est, se = _selberg_expectation(p, moment, mc_spec)
        extra.update(mc_value=est, mc_stderr=se,
                     # rounding floor: the self-normalized estimate of a constant has se = 0
                     mc_agrees=bool(abs(est - lhs) <= 3 * se + max(err, 0.0) + 1e-12 * abs(lhs)))
    tol = tolerance if tolerance is not None else default_tolerance(n)
    params = {"n": n, "alpha": alpha, "mu": mu, "nu": nu, "lam": list(lam)}
    return VerificationReport.build(Identity.KADELL, params, lhs, rhs, tol, spec, _elapsed(start), extra)


def verify_sonine_0f1(alpha: float, mu: float, nu: float, z, spec: IntegrationSpec | None = None,
                      tolerance: float | None = None,
                      max_weight: int = DEFAULT_MAX_WEIGHT) -> VerificationReport:
    """``0F1(mu+nu; z, 1)`` against the Selberg average of ``0F1(mu; z, x)``."""
    start = time.perf_counter()
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n = z.size
    if np.max(np.abs(z), initial=0.0) > 4:
        raise ParameterDomain("series truncation is only sized for |z_i| <= 4")
    p = _check_real_selberg(alpha, mu, nu, n)
    spec = _selberg_rule(p, spec)
    lhs = hyp0f1(alpha, mu + nu, z, np.ones(n), max_weight).value
    rhs, err = _selberg_expectation(p, lambda X: hyp0f1(alpha, mu, z, X, max_weight).value, spec)
    tol = tolerance if tolerance is not None else default_tolerance(n)
    params = {"n": n, "alpha": alpha, "mu": mu, "nu": nu, "z": list(z)}
    return VerificationReport.build(Identity.SONINE_0F1, params, lhs, rhs, tol, spec,
                                    _elapsed(start), {"error_estimate": err})


def verify_sonine_besselB(k: MultiplicityB, h: float, xi, spec: IntegrationSpec | None = None,
                          tolerance: float | None = None,
                          max_weight: int = DEFAULT_MAX_WEIGHT) -> VerificationReport:
    """``J_{k'}(xi, 1)`` against the average of ``J_k(xi, .)`` under the Sonine density."""
    start = time.perf_counter()
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    n = xi.size
    if np.iscomplexobj(h) or np.iscomplexobj(k.k1):
        raise ParameterDomain("the positive-density check needs real k1 and h")
    if not h > k.k2 * (n - 1):
        raise ParameterDomain(f"need h > k2(n-1) = {k.k2 * (n - 1)}, got h={h}")
    dens = SonineDensityParams(k, h, n)
    a, b, smooth = sonine_density_factors(dens)
    spec = spec or DEFAULT_SPEC
    lhs = bessel_B(dens.kprime, xi, np.ones(n), max_weight).value

    extra = {}
    if spec.method is Method.GAUSS_JACOBI and n == 2:
        # the diagonal factor is absorbed too, see integrate_symmetric_pair
        spec = spec.with_(jacobi_exponents=(float(a), float(b)))
        gap = 2 * k.k2
        extra["rule"] = "symmetric-pair"

        def integrand(X):
            diag = np.abs(X[:, 0] - X[:, 1]) ** gap
            return bessel_B(k, xi, X, max_weight).value * smooth(X) / diag
    elif spec.method is Method.GAUSS_JACOBI:
        spec = spec.with_(jacobi_exponents=(float(a), float(b)))

        def integrand(X):
            return bessel_B(k, xi, X, max_weight).value * smooth(X)
    elif spec.method is Method.MONTE_CARLO:
        raise ParameterDomain("Monte Carlo is not wired for the Sonine density")
    else:
        def integrand(X):
            return bessel_B(k, xi, X, max_weight).value * X.prod(axis=1) ** a * (1 - X).prod(axis=1) ** b * smooth(X)

    if extra:
        rhs, err = integrate_symmetric_pair(integrand, spec, gap)
    else:
        rhs, err = integrate_cube(integrand, n, spec)
    extra["error_estimate"] = err
    tol = tolerance if tolerance is not None else default_tolerance(n)
    params = {"n": n, "k1": k.k1, "k2": k.k2, "h": h, "xi": list(xi)}
    return VerificationReport.build(Identity.SONINE_BESSEL_B, params, lhs, rhs, tol, spec,
                                    _elapsed(start), extra)


# ---------------------------------------------------------------------------
# integrability probe


class Verdict(str, enum.Enum):
    CONVERGENT = "Convergent"
    DIVERGENT = "Divergent"
    INCONCLUSIVE = "Inconclusive"


GROWTH_RATIO = 1.5
FIRST_LAYER = 3
LAYER_NODES = 24
INTERIOR = (0.1, 0.9)


@dataclass
class ProbeResult:
    """Masses of ``|f_{k,h}|`` on the layers ``1 - x_1 in (eps, 2 eps)``."""

    layer_integrals: list[tuple[float, float]]
    verdict: Verdict
    fitted_exponent: float
    expected_exponent: float = math.nan
    normalized: bool = True
    runtime_ms: int = 0

    def to_dict(self) -> dict:
        return {
            "layer_integrals": [list(p) for p in self.layer_integrals],
            "verdict": self.verdict.value,
            "fitted_exponent": self.fitted_exponent,
            "expected_exponent": self.expected_exponent,
            "normalized": self.normalized,
        }

    def report(self, k: MultiplicityB, h, n: int, tolerance: float = 0.1) -> VerificationReport:
        """Wrap as a report comparing fitted and expected boundary exponents."""
        params = {"n": n, "k1": k.k1, "k2": k.k2, "h": h}
        return VerificationReport.build(
            Identity.INTEGRABILITY_PROBE, params, self.expected_exponent, self.fitted_exponent,
            tolerance, None, self.runtime_ms, {"verdict": self.verdict.value,
                                               "layers": self.layer_integrals},
        )


def _abs_weight(dens: SonineDensityParams, X: np.ndarray) -> np.ndarray:
    """``|f_{k,h}|`` without its normalizing constant."""
    sq = X**2
    k1 = complex(dens.k.k1).real
    b = complex(dens.boundary_exponent).real
    return np.prod(sq**k1 * (1 - sq) ** b, axis=1) * vandermonde_power(sq, 2 * dens.k.k2)


def probe_integrability(k: MultiplicityB, h, n: int, layers: int = 8) -> ProbeResult:
    """Fit the growth of boundary-layer masses of ``|f_{k,h}|`` near ``x_1 = 1``.

    Layers are ``eps_j = 2^-j``, ``j = 3 .. 3 + layers``; the remaining
    coordinates sit on a fixed Gauss grid in ``[0.1, 0.9]``.  A layer mass
    behaving like ``eps^(e+1)`` yields the fitted exponent ``e``.  When
    ``h`` is a pole of the normalization the unnormalized weight is used
    and ``normalized`` is False.
    """
    if layers < 6:
        raise ValueError("need at least 6 layers")
    start = time.perf_counter()
    dens = SonineDensityParams(k, h, n)
    norm = dens.normalization()
    # at a pole the normalized density vanishes; the unnormalized weight still
    # carries the boundary behaviour, so it is probed instead
    normalized = not isinstance(norm, Pole)
    scale = 2.0**n / abs(norm) if normalized else 1.0
    u, wu = roots_legendre(LAYER_NODES)
    lo, hi = INTERIOR
    others = (lo + hi) / 2 + (hi - lo) / 2 * u
    w_others = (hi - lo) / 2 * wu
    if n > 1:
        grids = np.meshgrid(*([others] * (n - 1)), indexing="ij")
        rest = np.stack([g.ravel() for g in grids], axis=1)
        w_rest = np.prod(np.stack(np.meshgrid(*([w_others] * (n - 1)), indexing="ij"), -1).reshape(-1, n - 1), axis=1)
    else:
        rest = np.zeros((1, 0))
        w_rest = np.ones(1)
    out = []
    for j in range(FIRST_LAYER, FIRST_LAYER + layers + 1):
        eps = 2.0**-j
        # Gauss-Legendre in s = log(1 - x_1) over (log eps, log 2 eps)
        s = math.log(eps) + math.log(2) * (u + 1) / 2
        ws = math.log(2) / 2 * wu * np.exp(s)
        x1 = 1 - np.exp(s)
        X = np.concatenate([np.repeat(x1, len(rest))[:, None], np.tile(rest, (len(x1), 1))], axis=1)
        W = np.repeat(ws, len(rest)) * np.tile(w_rest, len(x1))
        out.append((eps, float(scale * np.sum(_abs_weight(dens, X) * W))))
    eps = np.array([e for e, _ in out])
    mass = np.array([v for _, v in out])
    tail = len(out) // 2
    slope = np.polyfit(np.log(eps[-tail:]), np.log(mass[-tail:]), 1)[0]
    fitted = float(slope - 1)
    ratio = mass[-1] / mass[-3]
    growing = bool(np.all(np.diff(mass[-tail:]) > 0))
    if ratio >= GROWTH_RATIO and growing and fitted <= -1:
        verdict = Verdict.DIVERGENT
    elif ratio <= 1 / GROWTH_RATIO:
        verdict = Verdict.CONVERGENT
    else:
        verdict = Verdict.INCONCLUSIVE
    expected = float(np.real(dens.boundary_exponent))
    return ProbeResult(out, verdict, fitted, expected, normalized, _elapsed(start))


# ---------------------------------------------------------------------------
# combined classification


@dataclass
class Classification:
    n: int
    k1: complex
    k2: float
    h: complex
    membership: Membership
    detail: tuple[int, int] | None
    is_pole: bool
    probe: ProbeResult | None
    positive_measure_possible: bool
    conclusion: str
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "k1": self.k1, "k2": self.k2, "h": self.h,
            "membership": self.membership.value,
            "detail": list(self.detail) if self.detail else None,
            "is_pole": self.is_pole,
            "probe": self.probe.to_dict() if self.probe else None,
            "positive_measure_possible": self.positive_measure_possible,
            "conclusion": self.conclusion,
            "notes": self.notes,
        }


def classify_and_report(k: MultiplicityB, h, n: int, layers: int = 8) -> Classification:
    """Join the set membership of ``h``, its pole status and the probe into one verdict."""
    verdict = sigma_classify(h, k.k2, n)
    notes: list[str] = []
    real_h = abs(np.imag(h)) <= 1e-12
    hr = float(np.real(h))
    is_pole = real_h and any(abs(hr - p) < 1e-12 for p in pole_set(k.k2, n, (hr - 1, hr + 1)))
    probe = None
    if not is_pole and np.real(h) > -np.real(k.k1):
        probe = probe_integrability(k, h, n, layers)
    elif not is_pole:
        notes.append("density undefined: Re h <= -Re k1")

    if not real_h:
        possible = False
        conclusion = "k1 real and positivity forces h real: no positive Sonine measure for non-real h"
        if probe is not None:
            notes.append(f"density is complex-valued; |f| boundary exponent {probe.expected_exponent:.3g}")
    elif verdict.membership is Membership.CONTINUOUS:
        possible = True
        conclusion = "ContinuousPart => Sonine formula holds with the positive density f_{k,h}"
    elif verdict.membership is Membership.DISCRETE:
        possible = True
        conclusion = ("DiscretePart => density normalization has a pole; a positive measure is not "
                      "excluded, but none is constructed here")
    else:
        possible = False
        conclusion = "Outside Sigma => no positive Sonine measure; intertwiner not positive"
    return Classification(n, k.k1, k.k2, h, verdict.membership, verdict.detail, bool(is_pole),
                          probe, possible, conclusion, notes)
