"""Exception types shared across the package."""


class NilcohomError(Exception):
    """Base class for all package errors."""


class ParseError(NilcohomError):
    """Malformed input text; carries the character position when known."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class StructureError(NilcohomError):
    """A mathematical validity check failed (Jacobi, J^2, rank, ...)."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class UnsupportedError(NilcohomError):
    """The request is valid but outside the supported configuration."""


class PrecisionUnavailable(NilcohomError):
    """A certified enclosure source was exhausted before reaching the
    requested width."""
