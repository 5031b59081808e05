"""Exception types shared across the package."""


class GaussOrliczError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(GaussOrliczError):
    """Point, vector or child expression has the wrong dimension."""


class DomainError(GaussOrliczError):
    """An expression was evaluated outside its domain (log of a
    nonpositive value, reciprocal at zero, ...)."""


class NotDifferentiable(GaussOrliczError):
    """Symbolic derivative requested for a node that has none
    (abs, min, max, indicator)."""


class NonFinite(GaussOrliczError):
    """A quadrature node evaluated to +-inf or NaN."""


class NoConvergence(GaussOrliczError):
    """Refinement did not settle.  For modular integrals this is the
    computable surrogate for the value +infinity."""


class NotADensity(GaussOrliczError):
    """Claimed density does not integrate to 1 against the Gaussian
    weight (beyond the allowed slack)."""


class NotMonotone(GaussOrliczError):
    """A map required to be strictly monotone failed the probe."""


class ConfigError(GaussOrliczError):
    """Malformed harness configuration or corpus input."""


class IOFailure(GaussOrliczError):
    """Report or baseline file could not be read or written."""
