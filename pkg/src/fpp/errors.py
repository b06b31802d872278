"""Exception types shared across the package."""


class FppError(Exception):
    """Base class for all package-specific errors."""


class RangeError(FppError, ValueError):
    """A numeric argument is outside its documented range."""


class DomainError(FppError, ValueError):
    """An argument violates a structural precondition (size, bijectivity, ...)."""


class InvariantError(FppError, ValueError):
    """A value object fails one of its own invariants."""


class UnsupportedError(FppError, ValueError):
    """The request is well-formed but outside the supported parameter set."""


class StructuralError(FppError, ValueError):
    """A circuit references wires or control state that do not exist."""


class DimensionError(FppError, ValueError):
    """A dense simulation would exceed the supported Hilbert-space size."""
