from typing import Any, Dict, Optional


class RigidificationError(Exception):
    """Base class for every error raised by the simplicial helpers."""

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}


class DomainError(RigidificationError, ValueError):
    """A precondition or invariant of an operation was violated."""


class CapError(RigidificationError):
    """A dimension or size cap is too small for the requested computation.

    This is never a mathematical negative: raising the cap may change the answer.
    """


class BudgetError(CapError):
    """The candidate budget of an enumeration was exhausted."""


class InputError(RigidificationError):
    """An input file could not be parsed or failed validation."""

    def __init__(self, message: str, errors: Optional[Dict[str, Any]] = None):
        super().__init__(message, detail=errors)
        self.errors = errors or {}


class NotQuasiCategoryError(DomainError):
    """A construction that needs a quasi-category met an unfillable inner horn."""

    def __init__(self, message: str, certificate: Optional[Dict[str, Any]] = None):
        super().__init__(message, detail=certificate)
        self.certificate = certificate or {}
