from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import ceil, floor, log10

from pydantic import BaseModel, Field

from ..algebra.realroots import Interval, SolutionBox
from .rur import CertReport, RurCandidate
from .system import PolySystem


def format_decimal(x: Fraction, places: int, up: bool = False) -> str:
    """x rounded toward +inf (up) or -inf to ``places`` decimals, trailing zeros dropped."""
    scaled = x * 10**places
    n = ceil(scaled) if up else floor(scaled)
    if n == 0:
        return "0"
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(places + 1, "0")
    whole, frac = digits[: len(digits) - places], digits[len(digits) - places :].rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def _ints(values: Sequence[int]) -> list[str]:
    return [str(c) for c in values]


class DecimalInterval(BaseModel):
    lo: str = Field(description="Lower end, rounded down")
    hi: str = Field(description="Upper end, rounded up")

    @classmethod
    def of(cls, iv: Interval, places: int) -> DecimalInterval:
        return cls(lo=format_decimal(iv.lo, places), hi=format_decimal(iv.hi, places, up=True))


class Parametrization(BaseModel):
    variable: str
    numerator: list[str] = Field(description="Q~_i coefficients, constant term first")
    denominator: str = Field(description="Positive integer q_i")


class Derivative(BaseModel):
    numerator: list[str] = Field(description="D~ coefficients, constant term first")
    denominator: str = Field(description="Positive integer d~; m' = D~/d~")


class EquationReport(BaseModel):
    index: int
    degree: int
    monomials: int
    status: str = Field(description="verified, failed or skipped")
    work: int = Field(0, description="Cost guess N * d * degree^2")
    residual: list[str] | None = Field(
        default=None, description="Remainder of the cleared substitution when failed"
    )


class Solution(BaseModel):
    root: DecimalInterval = Field(description="Isolating interval of the root of m")
    exact: bool
    coordinates: dict[str, DecimalInterval]


class DiscardEntry(BaseModel):
    prime: str
    reason: str


class RurDocument(BaseModel):
    variables: list[str]
    form: list[str] = Field(description="Separating form coefficients lambda_i")
    minpoly: list[str] = Field(description="Primitive m~, constant term first")
    parametrization: list[Parametrization]
    derivative: Derivative
    prime_count: int = Field(description="Primes used for reconstruction")
    dim: int = Field(description="Degree of m, number of solutions")
    radicalized: bool
    certification: str = Field(description="verified, failed or skipped")
    certify_mode: int
    equations: list[EquationReport]
    sepform_identity: str
    certification_work: int
    solutions: list[Solution] | None = None
    discarded_primes: list[DiscardEntry] = Field(default_factory=list)
    giac: str | None = None

    @classmethod
    def build(
        cls,
        system: PolySystem,
        rur: RurCandidate,
        report: CertReport,
        boxes: Sequence[SolutionBox] | None = None,
        precision: int = 53,
        giac: bool = False,
    ) -> RurDocument:
        places = ceil(precision * log10(2)) + 2
        solutions = None
        if boxes is not None:
            solutions = [
                Solution(
                    root=DecimalInterval.of(box.root.interval, places),
                    exact=box.exact,
                    coordinates={
                        name: DecimalInterval.of(iv, places)
                        for name, iv in zip(system.variables, box.coords)
                    },
                )
                for box in boxes
            ]
        return cls(
            variables=list(system.variables),
            form=_ints(rur.form.lambdas),
            minpoly=_ints(rur.minpoly),
            parametrization=[
                Parametrization(variable=name, numerator=_ints(Q), denominator=str(q))
                for name, Q, q in zip(system.variables, rur.numerators, rur.denominators)
            ],
            derivative=Derivative(
                numerator=_ints(rur.derivative), denominator=str(rur.derivative_den)
            ),
            prime_count=rur.prime_count,
            dim=rur.dim,
            radicalized=rur.radicalized,
            certification=str(report.overall),
            certify_mode=report.mode,
            equations=[
                EquationReport(
                    index=e.index,
                    degree=e.degree,
                    monomials=e.monomials,
                    status=str(e.status),
                    work=e.work,
                    residual=_ints(e.residual) if e.residual is not None else None,
                )
                for e in report.equations
            ],
            sepform_identity=str(report.sepform_identity),
            certification_work=report.work,
            solutions=solutions,
            discarded_primes=[
                DiscardEntry(prime=str(d.prime), reason=str(d.reason)) for d in rur.discarded
            ],
            giac=giac_list(rur) if giac else None,
        )


def _giac_poly(coeffs: Sequence[int], den: int = 1) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append(f"{sign}{body}" if terms or c < 0 else body)
    text = "".join(terms) or "0"
    return f"({text})/{den}" if den != 1 else text


def giac_list(rur: RurCandidate) -> str:
    """``[rur, form, m, m', Q_1, ..., Q_n]`` in Giac list syntax."""
    parts = [
        "rur",
        "[" + ",".join(str(c) for c in rur.form.lambdas) + "]",
        _giac_poly(rur.minpoly),
        _giac_poly(rur.derivative, rur.derivative_den),
    ]
    parts.extend(_giac_poly(Q, q) for Q, q in zip(rur.numerators, rur.denominators))
    return "[" + ",".join(parts) + "]"
