"""Exception types shared across the package."""


class GridTuranError(Exception):
    """Base class for all package errors."""


class GraphFormatError(GridTuranError, ValueError):
    """Malformed canonical edge-list input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)


class ResourceLimitError(GridTuranError, RuntimeError):
    """A configured vertex cap or enumeration budget would be exceeded."""


class BudgetExceeded(ResourceLimitError):
    """A search ran out of its step or wall-clock budget before finishing."""


class PreconditionError(GridTuranError, ValueError):
    """An operation was called outside the regime it is defined for."""
