"""Exception hierarchy shared by every module.

The CLI maps ``ResourceCapExceeded`` to exit code 3 and every other
``CtsLabError`` to exit code 2.
"""


class CtsLabError(Exception):
    """Base class for all library errors."""


class InvalidInput(CtsLabError, ValueError):
    pass


class NotPrime(InvalidInput):
    pass


class ZeroInverse(CtsLabError, ZeroDivisionError):
    pass


class RadiusExceedsField(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class ZeroPolynomial(InvalidInput):
    pass


class DegreeTooLarge(InvalidInput):
    pass


class DegreeMismatch(InvalidInput):
    pass


class BadCharacteristic(InvalidInput):
    pass


class MissingDeclaration(InvalidInput):
    pass


class NotLinearFamily(InvalidInput):
    pass


class NoCtsInPool(CtsLabError):
    pass


class FieldTooSmall(InvalidInput):
    pass


class HypothesisUnmet(InvalidInput):
    pass


class UnsortedDegrees(InvalidInput):
    pass


class DuplicateNode(InvalidInput):
    pass


class ThetaOutOfBox(InvalidInput):
    pass


class ResourceCapExceeded(CtsLabError):
    def __init__(self, what: str, needed: int, cap: int):
        super().__init__(f"{what}: needs {needed} > cap {cap}")
        self.what = what
        self.needed = needed
        self.cap = cap
