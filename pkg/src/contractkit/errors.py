"""Exception types raised by contractkit."""


class ContractkitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ContractkitError, ValueError):
    """Two dimensions that must agree do not."""

    def __init__(self, what, expected, got):
        self.what = what
        self.expected = expected
        self.got = got
        super().__init__(f"{what}: expected {expected}, got {got}")


class ExternalDimMismatch(DimensionMismatch):
    """Two systems do not share the same external-variable space."""


class ParseError(ContractkitError, ValueError):
    """A system or contract document is malformed."""
