"""Exception hierarchy.

Everything raised for bad *data* derives from :class:`DataError`; the CLI maps
those to exit code 2. I/O and usage problems are left to the standard
exceptions (``OSError``, ``argparse``) and map to exit code 1.
"""
from __future__ import annotations


class DataError(ValueError):
    """Base class for input-data and computation errors."""


class MalformedTable(DataError):
    """An intermediate CSV/JSON file does not have the expected layout."""


# ingest
class MissingColumn(DataError):
    pass


class MalformedRow(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInput(DataError):
    pass


class InvalidRecord(DataError):
    pass


class DuplicateRecord(DataError):
    pass


# indicators
class EmptyGroup(DataError):
    pass


class ZeroInstitutions(DataError):
    pass


class NonPositiveEnergy(DataError):
    pass


class NegativeEntropy(DataError):
    pass


class ZeroWorldValue(DataError):
    pass


# cohorts
class BadConfig(DataError):
    pass


class EmptyCohort(BadConfig):
    pass


class DuplicateGdpEntry(DataError):
    pass


# stats
class LengthMismatch(DataError):
    pass


class ConstantVector(DataError):
    pass


class TooFewPoints(DataError):
    pass


class NonPositiveForLog(DataError):
    pass


class UnknownVariable(DataError):
    pass


# cli
class UnknownCountry(DataError):
    pass
