"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data violates a structural constraint."""


class InconsistentInputError(ValidationError):
    """Input is well formed but describes a mathematically impossible object."""


class MissingDataError(ValidationError):
    """A computation needs data the descriptor does not carry."""
