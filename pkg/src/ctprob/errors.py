"""Exception types raised by the engine."""


class CTPError(Exception):
    """Base class for all engine errors."""


class DomainError(CTPError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConstraintError(DomainError):
    """A symbolic event is contradictory or references points off the lattice."""


class InvalidPathError(DomainError):
    """A path violates the hop range or a slice mask."""


class CapacityError(CTPError):
    """Exhaustive enumeration would exceed the configured guard."""


class DegenerateExperimentError(CTPError, ValueError):
    """The screen carries no weight, so nothing can be normalized."""


class InvariantViolation(CTPError, AssertionError):
    """An engine invariant failed at runtime."""

    def __init__(self, name, residual=None):
        self.name = name
        self.residual = residual
        msg = name if residual is None else f"{name} (residual {residual:.3e})"
        super().__init__(msg)
