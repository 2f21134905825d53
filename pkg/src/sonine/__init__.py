"""Sonine formulas, Selberg-type integrals and Heckman-Opdam polynomials.

Numerical tools for Jack polynomials, hypergeometric series of two
matrix arguments, Bessel functions of type B, the Sonine density and its
integrability, and connection coefficients between orthogonal families.
"""

from .errors import (
    ConditioningWarning,
    DivergenceWarning,
    DomainError,
    IllConditioned,
    NonFiniteIntegrand,
    NumericalDomainError,
    ParameterDomain,
    PochhammerZero,
    PoleParameter,
    SonineError,
)
from .heckmanopdam import (
    ConnectionMatrix,
    GeometricMultiplicity,
    MultiplicityBC,
    TrigPolynomial,
    contraction_check,
    ho_connection,
    ho_family,
    ho_polynomials,
    orbit_sum,
    sign_scan,
)
from .hypergeom import MultiplicityB, bessel_1d, bessel_B, dunkl_kernel_1d, hyp0f1
from .integrate import (
    IntegrationSpec,
    Method,
    integrate_cube,
    integrate_symmetric_pair,
    integrate_torus,
    sample_selberg,
)
from .jackcore import Partition, enumerate_partitions, gen_pochhammer, jack_C, jack_C_at_one
from .rankone import JacobiParams, jacobi_connection, jacobi_R, sonine_1d, xu_intertwine
from .reports import Identity, VerificationReport
from .selberg import (
    Membership,
    Pole,
    SelbergParams,
    SonineDensityParams,
    pole_set,
    selberg_In,
    sigma_classify,
    sonine_density,
)
from .verify import (
    ProbeResult,
    Verdict,
    classify_and_report,
    probe_integrability,
    verify_kadell,
    verify_selberg,
    verify_sonine_0f1,
    verify_sonine_besselB,
)

__version__ = "0.1.0"
