"""Exception types shared across the package."""


class SurfcolError(Exception):
    """Base class for all package errors."""


class DomainError(SurfcolError, ValueError):
    """Input outside the domain of an operation (bad index, bad table, ...)."""


class StructureError(SurfcolError, ValueError):
    """A diagram whose combinatorics do not close up consistently."""


class UnsupportedError(SurfcolError):
    """Well-formed input that this package deliberately does not handle."""


class BudgetExceeded(SurfcolError):
    """A search or enumeration hit its budget.

    ``partial`` holds whatever was produced before the cut-off and
    ``progress`` the amount of work done (nodes, assignments, ...).
    """

    def __init__(self, message: str, partial=None, progress: int = 0):
        super().__init__(message)
        self.partial = partial if partial is not None else []
        self.progress = progress
