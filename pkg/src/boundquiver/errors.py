"""Exception hierarchy shared by the library and the command line."""


class BoundQuiverError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatch(BoundQuiverError):
    """Raised when objects over different ground fields are combined."""


class NotAdmissible(BoundQuiverError):
    """No power of the arrow ideal was found inside the relation ideal."""

    def __init__(self, cap):
        super().__init__(f"no length n <= {cap} with every path of length n in the ideal")
        self.cap = cap


class MalformedRelation(BoundQuiverError):
    pass


class HorizonNotReached(BoundQuiverError):
    """An e-bounded prefix of the resolution could not be certified."""

    def __init__(self, depth_cap, detail=""):
        msg = f"no e-bounded horizon certified within depth {depth_cap}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.depth_cap = depth_cap


class NonExactSequence(BoundQuiverError):
    pass


class ParseError(BoundQuiverError):
    """Syntax or semantic error in an algebra description file.

    ``line`` and ``column`` are 1-based; ``token`` is the offending text.
    """

    def __init__(self, message, line=None, column=None, token=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.token = token
