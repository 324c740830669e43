"""Exception hierarchy shared by every module."""


class MinprodError(Exception):
    """Base class for all engine errors."""


class EntryAboveBound(MinprodError, ValueError):
    pass


class NonPositiveMultiplicity(MinprodError, ValueError):
    pass


class NonPositiveScale(MinprodError, ValueError):
    pass


class BoundExceeded(MinprodError):
    """A truncated spectrum cannot certify the requested quantity."""


class InsufficientData(MinprodError):
    """A descriptor lacks the data (usually a full spectrum) an operation needs."""


class InvalidG(MinprodError, ValueError):
    pass


class SchemaError(MinprodError, ValueError):
    pass


class InvariantViolation(MinprodError, ValueError):
    pass


class NotConstant(MinprodError):
    pass


class ParseError(MinprodError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f": expected {' or '.join(repr(e) for e in self.expected)}"
        super().__init__(detail)
