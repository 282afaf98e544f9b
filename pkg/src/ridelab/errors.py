"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class RangeError(ValueError):
    """An inverse-function argument lies outside the attainable range."""


class UnsupportedRegimeError(ValueError):
    """The requested parameter regime is not handled by this operation."""


class TruncationOverflowError(ArithmeticError):
    """A truncated series failed to converge within the term cap."""


class AssumptionViolationError(RuntimeError):
    """A numeric probe contradicted a structural assumption (e.g. monotonicity)."""


class InsufficientDataError(RuntimeError):
    """A simulation produced no observations for the requested estimate."""


class ConfigError(ValueError):
    """A run configuration is missing, malformed, or inconsistent."""
