"""Exception hierarchy shared by every dimkit module."""

from __future__ import annotations


class DimkitError(Exception):
    """Base class for all dimkit errors."""

    exit_code = 1


class InvalidParameter(DimkitError, ValueError):
    exit_code = 2


class ParseError(DimkitError, ValueError):
    """Malformed class/witness/certificate document.

    ``row`` and ``col`` locate the offending matrix entry when known.
    """

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        if row is not None:
            message = f"{message} (row {row}, col {col})"
        super().__init__(message)
        self.row = row
        self.col = col


class WrongKind(DimkitError, TypeError):
    pass


class ResourceLimit(DimkitError):
    exit_code = 3


class InvalidWitness(DimkitError, ValueError):
    pass


class InvalidCertificate(DimkitError, ValueError):
    pass


class InvalidClique(DimkitError, ValueError):
    pass


class ConstructionFailure(DimkitError):
    def __init__(self, message: str, achieved: int | None = None):
        super().__init__(message)
        self.achieved = achieved


class SearchFailure(DimkitError):
    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best
