"""Exception hierarchy shared by every module of the package."""


class AlgebraError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class DimensionMismatch(AlgebraError, ValueError):
    pass


class SlotOutOfRange(AlgebraError, ValueError):
    pass


class NotFiniteUnitShape(AlgebraError, ValueError):
    pass


class SingularBlock(AlgebraError, ValueError):
    pass


class NotFredholm(AlgebraError, ValueError):
    pass


class ZeroElement(AlgebraError, ValueError):
    pass


class ZeroAlpha(AlgebraError, ValueError):
    pass


class NotLnPrime(AlgebraError, ValueError):
    pass


class NotInKernelXi(AlgebraError, ValueError):
    pass


class RelationViolation(AlgebraError, ValueError):
    pass


class BadResidue(AlgebraError, ValueError):
    pass


class ConjugatorMismatch(AlgebraError, ValueError):
    pass


class BadParameter(AlgebraError, ValueError):
    pass


class EmptySet(AlgebraError, ValueError):
    pass


class NotProper(AlgebraError, ValueError):
    pass


class NotAntichain(AlgebraError, ValueError):
    pass


class TooLarge(AlgebraError, ValueError):
    pass


class ParseError(AlgebraError, SyntaxError):
    """Malformed input text; ``offset`` is a 0-based byte offset."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at byte {offset})")
        self.msg = message
        self.offset = offset


class IndexOutOfRange(ParseError):
    pass
