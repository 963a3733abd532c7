"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data violates a structural requirement."""


class BoundExceeded(RuntimeError):
    """An enumeration ran past its configured size bound."""


class UnsupportedShape(ValueError):
    """A word-problem routine was asked about an intersection pattern it cannot handle."""
