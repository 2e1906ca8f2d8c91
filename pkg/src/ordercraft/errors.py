"""Exception hierarchy shared by all ordercraft modules."""


class OrdercraftError(Exception):
    """Base class for all errors raised by ordercraft."""


class InvalidGraphError(OrdercraftError, ValueError):
    """Malformed graph input: out-of-range ids, self-loops, duplicate edges."""


class InvalidOrderingError(OrdercraftError, ValueError):
    """An ordering is not a bijection onto the expected vertex set."""


class NotChordalError(OrdercraftError):
    """A graph that was required to be chordal is not."""


class PreconditionError(OrdercraftError):
    """The preconditions of a move or construction do not hold for this input."""


class SizeLimitError(OrdercraftError):
    """An exhaustive computation was refused because the instance is too large."""


class FormatError(OrdercraftError, ValueError):
    """A text file does not follow its documented format."""

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
