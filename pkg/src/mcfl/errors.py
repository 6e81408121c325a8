"""Exception types shared across the package."""


class McflError(Exception):
    """Base class for every error raised by this package."""


class ParseError(McflError):
    def __init__(self, message, position=None):
        self.message = message
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class SortError(ParseError):
    """An operator was applied to a subterm of the wrong sort."""


class SortMismatch(McflError):
    pass


class UnknownLetter(ParseError):
    pass


class UnboundVariable(McflError):
    pass


class NotClosed(McflError):
    pass


class NotWellOrderedShape(McflError):
    """A pair ``t1 >< t2`` with ``t2`` other than ``eps`` blocks translation to the w-fragment."""


class PreconditionViolated(McflError):
    pass


class InvalidGrammar(McflError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(map(str, self.diagnostics)))


class EmptyRoot(McflError):
    """No cycle through the requested state covers the whole accepting set."""


class AlphabetClash(McflError):
    pass
