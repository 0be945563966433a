"""Exception types shared across the package."""


class LiemodError(Exception):
    """Base class for package errors."""


class ShapeError(LiemodError, ValueError):
    """Incompatible shapes, bundles or degrees."""


class ContractError(LiemodError, ValueError):
    """A documented precondition does not hold (e.g. non-flat input to a flat-only formula)."""


class StructureError(LiemodError, ValueError):
    """An algebraic structure fails its defining identity (Q^2 != 0, unflat to order, ...)."""


class InvariantViolation(LiemodError, AssertionError):
    """An identity guaranteed by theory failed; indicates a bug."""


class NoSolution(LiemodError, ValueError):
    """Linear system has no solution; ``certificate`` is a covector proving it."""

    def __init__(self, certificate):
        super().__init__("right-hand side is not in the image")
        self.certificate = certificate
