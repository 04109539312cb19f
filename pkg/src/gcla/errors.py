"""Exception types shared across the package."""


class GclaError(Exception):
    """Base class for all errors raised by gcla."""


class InvalidSymbol(GclaError, ValueError):
    pass


class LengthOverflow(GclaError, OverflowError):
    """An expansion length would not fit in a signed 64-bit integer."""


class BudgetExceeded(GclaError):
    """An operation would materialize more than the allowed number of symbols."""


class DimensionMismatch(GclaError, ValueError):
    pass


class ElementOutOfUniverse(GclaError, ValueError):
    pass


class InvalidInstance(GclaError, ValueError):
    pass


class InvalidForm(GclaError, ValueError):
    pass


class MixedTargets(GclaError, ValueError):
    pass


class FormatError(GclaError, ValueError):
    """A serialized file could not be parsed."""
