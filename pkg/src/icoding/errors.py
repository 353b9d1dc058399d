"""Exception hierarchy shared by every module."""

from __future__ import annotations


class IndexCodingError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""


class ParseError(IndexCodingError, ValueError):
    """Malformed instance or matrix text."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InvalidInstanceError(IndexCodingError, ValueError):
    """Side information that violates the instance invariants."""


class CapExceededError(IndexCodingError):
    """A brute-force routine was asked to go beyond its declared size cap."""


class FieldTooSmallError(IndexCodingError):
    """Every field element is vetoed for some entry of the coding matrix."""


class ContractViolation(IndexCodingError):
    """A caller broke a documented precondition."""
