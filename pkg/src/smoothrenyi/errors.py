"""Exception hierarchy for the toolkit.

The CLI maps these onto exit codes: validation-type failures exit 1,
numerical failures exit 2.
"""


class EntropyError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(EntropyError):
    """Malformed or out-of-contract input (negative atoms, bad matrix, ...)."""


class DomainError(ValidationError):
    """Structurally valid input outside an operation's domain (e.g. zero mass)."""


class UnsupportedError(ValidationError):
    """Operation not defined for this input (e.g. smoothing at order one)."""


class ResourceError(EntropyError):
    """Requested computation exceeds the configured size bounds."""


class NumericalError(EntropyError):
    """An iterative kernel failed to converge or lost required accuracy."""
