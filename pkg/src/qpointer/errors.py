"""Exception types raised across the package."""


class QPointerError(Exception):
    """Base class for all package errors."""


class DomainError(QPointerError, ValueError):
    """Argument lies outside the convergence domain of the q-exponential."""


class NonConvergence(QPointerError, ArithmeticError):
    """Series term cap reached before the requested tolerance."""


class DimensionOverflow(QPointerError, RuntimeError):
    """Adaptive Fock truncation would exceed the configured maximum dimension."""


class DimensionMismatch(QPointerError, ValueError):
    pass


class NonPositiveNorm(QPointerError, ArithmeticError):
    """Squared norm of the post-selected pointer is not positive."""


class ZeroMeanPhoton(QPointerError, ArithmeticError):
    pass


class ConfigError(QPointerError, ValueError):
    pass
