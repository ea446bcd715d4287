from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

from ..algebra.polyarith import UniIntPoly
from ..algebra.quotient import SepForm
from ..errors import DiscardReason


@dataclass(frozen=True, slots=True)
class DiscardedPrime:
    prime: int
    reason: DiscardReason


@dataclass(frozen=True, slots=True)
class RurCandidate:
    """Reconstructed representation over Q.

    x_i = (numerators[i] / denominators[i]) / (derivative / derivative_den)
    evaluated at the roots of ``minpoly``. ``minpoly`` is primitive with a
    positive leading coefficient; ``derivative / derivative_den`` is the
    derivative of the monic associate of ``minpoly``.
    """

    form: SepForm
    minpoly: UniIntPoly
    numerators: tuple[UniIntPoly, ...]
    denominators: tuple[int, ...]
    derivative: UniIntPoly
    derivative_den: int
    prime_count: int
    radicalized: bool = False
    discarded: tuple[DiscardedPrime, ...] = field(default=(), compare=False)

    @property
    def dim(self) -> int:
        return len(self.minpoly) - 1

    @property
    def nvars(self) -> int:
        return len(self.numerators)


class CertStatus(StrEnum):
    VERIFIED = "verified"
    FAILED = "failed"
    SKIPPED = "skipped"


@dataclass(frozen=True, slots=True)
class EquationVerdict:
    index: int
    degree: int
    monomials: int
    status: CertStatus
    # N * d * degree^2, the cost guess for one substitution
    work: int = 0
    residual: UniIntPoly | None = None


@dataclass(frozen=True, slots=True)
class CertReport:
    equations: tuple[EquationVerdict, ...]
    sepform_identity: CertStatus
    mode: int
    radicalized: bool = False

    @property
    def work(self) -> int:
        return sum(e.work for e in self.equations)

    @property
    def overall(self) -> CertStatus:
        statuses = [e.status for e in self.equations] + [self.sepform_identity]
        if CertStatus.FAILED in statuses:
            return CertStatus.FAILED
        if CertStatus.VERIFIED in statuses:
            return CertStatus.VERIFIED
        return CertStatus.SKIPPED
