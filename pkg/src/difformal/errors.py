"""Exception types shared across the package."""


class DifformalError(Exception):
    pass


class ParseError(DifformalError, ValueError):
    """Raised for malformed input text.

    ``position`` is the 0-based character offset where the problem was found.
    """

    def __init__(self, message, position=None):
        self.message = message
        self.position = position
        if position is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} (at position {position})")


class ExprSyntaxError(ParseError):
    pass


class UnsupportedError(ParseError):
    pass


class EmptyPolynomial(DifformalError, ValueError):
    pass


class UnresolvedParameter(DifformalError, ValueError):
    pass


class ResourceLimit(DifformalError, RuntimeError):
    pass
