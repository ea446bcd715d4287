from __future__ import annotations

from enum import StrEnum
from typing import Any


class DiscardReason(StrEnum):
    LEADING_COEFFICIENT = "leading-coefficient"
    UNIT_IDEAL = "unit-ideal"
    NOT_ZERO_DIMENSIONAL = "not-zero-dimensional"
    SIGNATURE_MISMATCH = "signature-mismatch"
    DIMENSION_MISMATCH = "dimension-mismatch"
    NO_SEPARATING_FORM = "no-separating-form"
    FORM_NOT_SEPARATING = "form-not-separating"
    RADICAL_LOOP = "radicalization-loop-exceeded"
    SINGULAR_HANKEL = "singular-hankel"
    INCOMPATIBLE = "incompatible"
    CONFIRMATION = "confirmation-mismatch"
    OUTVOTED = "outvoted"


class RurError(Exception):
    """Base class for every error raised by rurpi."""


class UsageError(RurError, ValueError):
    pass


class ParseError(UsageError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(message, line, column)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line:
            return f"line {self.line}, column {self.column}: {self.message}"
        return self.message


class IdealIsUnit(RurError):
    pass


class NotZeroDimensional(RurError):
    pass


class EmptyVariety(RurError):
    pass


class NoSeparatingForm(RurError):
    def __init__(self, message: str, fallback: Any = None) -> None:
        super().__init__(message, fallback)
        self.fallback = fallback

    def __str__(self) -> str:
        return str(self.args[0])


class SingularHankel(RurError, ArithmeticError):
    pass


class BadPrime(RurError):
    def __init__(
        self, prime: int, reason: DiscardReason, shape: tuple | None = None
    ) -> None:
        super().__init__(prime, reason, shape)
        self.prime = prime
        self.reason = DiscardReason(reason)
        self.shape = shape

    def __str__(self) -> str:
        return f"bad prime {self.prime}: {self.reason}"


class IncompatiblePrime(RurError):
    pass


class NoReconstruction(RurError):
    pass


class NeedMorePrimes(RurError):
    pass


class ReconstructionFailed(RurError):
    pass


class InvariantViolation(RurError, AssertionError):
    pass
