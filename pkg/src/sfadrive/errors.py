"""Exception hierarchy shared across the package.

Every failure raised by the library derives from :class:`SfaDriveError` so
callers (and the CLI exit-code mapping) can distinguish usage mistakes from
data and numerical problems.
"""


class SfaDriveError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(SfaDriveError, ValueError):
    """A parameter is outside its documented domain."""


class InsufficientDataError(SfaDriveError):
    """A sequence is too short for the requested operation."""


class NumericalDomainError(SfaDriveError):
    """Values left their mathematically guaranteed domain (non-finite, out of range)."""


class RankDeficiencyError(SfaDriveError):
    """The whitened signal has fewer usable dimensions than requested outputs."""


class DegenerateSignalError(SfaDriveError):
    """A signal has zero variance where a normalization requires spread."""


class CsvParseError(SfaDriveError):
    """A delimited input file does not match the expected schema."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
