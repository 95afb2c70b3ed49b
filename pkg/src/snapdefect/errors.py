"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: ConfigurationError -> 2,
DataError -> 3, NumericError -> 4.
"""


class SnapdefectError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SnapdefectError):
    """Invalid model/sampler/analysis configuration."""


class DataError(SnapdefectError):
    """Problem with input data (files, snapshot sets, fit inputs)."""


class FormatError(DataError):
    """A file does not follow the expected format (bad magic, version...)."""


class CorruptedDataError(DataError):
    """A file is structurally valid but truncated or inconsistent."""

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (at byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


class NumericError(SnapdefectError):
    """Numerical failure: non-convergence, degenerate fit, ambiguous minimum."""
