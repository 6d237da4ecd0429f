"""Exception types raised across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class FittingError(ValidationError):
    """A regression problem is degenerate and has no unique solution."""
