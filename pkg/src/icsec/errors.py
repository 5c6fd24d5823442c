"""Exception hierarchy shared by every module.

The CLI maps :class:`ValidationError` to exit status 2, :class:`BudgetExceeded`
to 3 and :class:`ConstructionError` to 4.
"""


class IndexCodingError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(IndexCodingError, ValueError):
    """Malformed or inconsistent input."""


class UnsupportedField(ValidationError):
    pass


class NonPrimeCharacteristic(UnsupportedField):
    pass


class UnsupportedExtension(UnsupportedField):
    pass


class DegreeTooLarge(UnsupportedField):
    pass


class ReducibleModulus(UnsupportedField):
    pass


class FieldMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class ZeroCode(ValidationError):
    """The spanning set generates only the zero vector."""


class ParseError(ValidationError):
    pass


class InvalidDemand(ValidationError):
    """A receiver demands a message it already holds."""


class IndexOutOfRange(ValidationError):
    pass


class RestrictionOverlap(ValidationError):
    """A restricted set meets the receiver's side information or demand."""


class UndemandedMessage(ValidationError):
    pass


class RepeatedAlpha(ValidationError):
    pass


class ZeroInverse(IndexCodingError, ZeroDivisionError):
    pass


class BudgetExceeded(IndexCodingError):
    """An exhaustive enumeration would exceed its configured budget."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: needs {needed} evaluations, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class DecodeFailure(IndexCodingError):
    """No codeword (or message) lies within the decoding radius."""


class Ambiguous(IndexCodingError):
    """More than one demanded value is consistent with the received word."""


class NoRecipe(IndexCodingError):
    pass


class ConstructionError(IndexCodingError):
    pass


class FieldTooSmall(ConstructionError):
    pass


class NotEnoughFieldElements(ConstructionError, ValidationError):
    pass


DEFAULT_BUDGET = 1 << 24


def check_budget(what: str, needed: int, budget: int) -> None:
    if needed > budget:
        raise BudgetExceeded(what, needed, budget)
