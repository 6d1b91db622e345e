"""
Exception hierarchy with stable command-line exit codes.
"""

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .models.series import ValidationReport


class ShapeletError(Exception):
    """Base error; ``exit_code`` is what the CLI returns for it."""

    exit_code: int = 1

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class ConfigError(ShapeletError):
    """Invalid parameters or parameters incompatible with the data."""

    exit_code = 2


class UnknownClassError(ConfigError):
    """A class identifier that the model does not know."""


class DataError(ShapeletError):
    """Input data violates a contract."""

    exit_code = 3


class ParseError(DataError):
    """Malformed dataset file."""

    def __init__(self, detail: str, line: int, column: Optional[int] = None) -> None:
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {detail}")
        self.line = line
        self.column = column


class DataValidationError(DataError):
    """Dataset failed validation; the report lists every issue."""

    def __init__(self, report: "ValidationReport") -> None:
        super().__init__("; ".join(issue.message for issue in report.errors))
        self.report = report


class LengthMismatchError(DataError):
    """Series length differs from the training length."""


class ShapeTooLongError(DataError):
    """Dilated shapelet span does not fit in the series."""


class DegenerateDataError(DataError):
    """Every feature column is constant."""


class DimensionMismatchError(DataError):
    """Feature count differs from the fitted model."""


class ArchiveError(DataError):
    """Model archive unreadable or of an unsupported version."""
