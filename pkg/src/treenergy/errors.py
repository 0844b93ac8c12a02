"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class TreeEnergyError(Exception):
    """Base class for every domain error raised by this package."""


class InvalidSpec(TreeEnergyError, ValueError):
    pass


class NotAForest(TreeEnergyError, ValueError):
    pass


class EdgeNotPresent(TreeEnergyError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else "edge not present"


class VertexNotPresent(TreeEnergyError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "vertex not present"


class SameVertex(TreeEnergyError, ValueError):
    pass


class NotConnected(TreeEnergyError, ValueError):
    pass


class ZeroPolynomial(TreeEnergyError, ValueError):
    pass


class DegreeMismatch(TreeEnergyError, ValueError):
    pass


class NotMonic(TreeEnergyError, ValueError):
    pass


class NegativeCoefficient(TreeEnergyError, ValueError):
    pass


class OrderMismatch(TreeEnergyError, ValueError):
    pass


class QuadratureFailure(TreeEnergyError, ArithmeticError):
    pass


class CapExceeded(TreeEnergyError, ValueError):
    pass


class InvalidOrder(TreeEnergyError, ValueError):
    pass


class RangeViolation(TreeEnergyError, ValueError):
    pass


class UnresolvedTie(TreeEnergyError, ArithmeticError):
    pass


class VerificationFailure(TreeEnergyError, AssertionError):
    """Raised by strict verification; ``quantity`` names what diverged."""

    def __init__(self, quantity: str, computed: object, expected: object) -> None:
        super().__init__(f"{quantity}: computed {computed!r}, expected {expected!r}")
        self.quantity = quantity
        self.computed = computed
        self.expected = expected
