"""Exception and warning types shared across the package."""


class SonineError(Exception):
    """Base class for all package errors."""


class NumericalDomainError(SonineError, ValueError):
    """A parameter or argument lies outside the domain where a quantity is defined."""


class PochhammerZero(NumericalDomainError):
    """A generalized Pochhammer symbol in a series denominator vanishes."""


class PoleParameter(NumericalDomainError):
    """A parameter sits on a pole of a gamma-product normalization."""


class DomainError(NumericalDomainError):
    """Evaluation point outside the open domain of a density."""


class ParameterDomain(NumericalDomainError):
    """Distribution or integral parameters are not admissible."""


class NonFiniteIntegrand(NumericalDomainError):
    """An integrand returned inf or nan at a quadrature node."""


class IllConditioned(NumericalDomainError):
    """A linear solve or Gram factorization is too ill-conditioned to trust."""


class DivergenceWarning(RuntimeWarning):
    """Series shells kept growing up to the truncation degree."""


class ConditioningWarning(RuntimeWarning):
    """A value was computed close to a pole and may be inaccurate."""
