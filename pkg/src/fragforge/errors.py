"""Exception hierarchy shared by all fragforge modules."""

from __future__ import annotations


class FragforgeError(Exception):
    """Base class for every error raised by fragforge."""


# -- model -------------------------------------------------------------------


class ModelError(FragforgeError, ValueError):
    pass


class InvalidId(ModelError):
    pass


class UnknownKind(ModelError):
    def __init__(self, kind: str, column: int | None = None):
        self.kind = kind
        self.column = column
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"unknown fragment kind {kind!r}{where}")


class DuplicateId(ModelError):
    def __init__(self, namespace: str, ident: str):
        self.namespace = namespace
        self.ident = ident
        super().__init__(f"duplicate {namespace} id {ident!r}")


class KindFieldMismatch(ModelError):
    pass


class MalformedDimension(ModelError):
    pass


class UnknownFragment(ModelError, LookupError):
    pass


class UnknownDimension(ModelError, LookupError):
    pass


class UnknownValue(ModelError, LookupError):
    pass


class DuplicateProperty(ModelError):
    pass


class UnknownTarget(ModelError, LookupError):
    pass


class TargetForbidden(ModelError):
    pass


class MissingTarget(ModelError):
    pass


class PrecedenceCycle(ModelError):
    pass


# -- bibliography --------------------------------------------------------------


class ParseError(FragforgeError, ValueError):
    """Malformed BibTeX input; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"{line}:{column}: {message}")


class DuplicateKey(FragforgeError, ValueError):
    def __init__(self, key: str, line: int | None = None, column: int | None = None):
        self.key = key
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}duplicate bibliography key {key!r}")


# -- store -------------------------------------------------------------------


class FormatError(FragforgeError, ValueError):
    """A library tree on disk does not follow the record format."""

    def __init__(self, path, message: str, location: str | None = None):
        self.path = path
        self.location = location
        self.reason = message
        where = f" ({location})" if location else ""
        super().__init__(f"{path}{where}: {message}")


class UnrepresentableValue(FragforgeError, ValueError):
    pass


# -- query -------------------------------------------------------------------


class QuerySyntaxError(FragforgeError, ValueError):
    def __init__(self, message: str, column: int):
        self.column = column
        self.reason = message
        super().__init__(f"column {column}: {message}")


class DegenerateTable(FragforgeError, ValueError):
    pass
