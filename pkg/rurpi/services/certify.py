"""Exact certification of a reconstructed representation.

Each equation P of total degree delta is checked by clearing
m'^delta * P(Q_1/m', ..., Q_n/m') to one integer polynomial over a single
denominator and dividing it by the primitive minimal polynomial: the
representation satisfies P exactly when the remainder vanishes.
"""

from __future__ import annotations

import asyncio
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from math import gcd, lcm

from ..algebra.polyarith import (
    IntPoly,
    Monomial,
    UniIntPoly,
    uni_int_add,
    uni_int_content,
    uni_int_divrem,
    uni_int_pow,
    uni_int_primitive,
    uni_int_product,
    uni_int_scale,
    uni_int_shift,
    uni_int_strip,
)
from ..config import ExecutorKind, Settings, get_settings
from ..executor import get_executor, run_blocking
from ..models.rur import CertReport, CertStatus, EquationVerdict, RurCandidate
from ..models.system import PolySystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class RatUniPoly:
    numerator: UniIntPoly
    denominator: int = 1

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    def normalize(self) -> RatUniPoly:
        if not self.numerator:
            return RatUniPoly([], 1)
        g = gcd(uni_int_content(self.numerator), self.denominator)
        if g == 1:
            return self
        return RatUniPoly([c // g for c in self.numerator], self.denominator // g)


def frac_add(x: RatUniPoly, y: RatUniPoly) -> RatUniPoly:
    """A/a + B/b = (A*(b/g) + B*(a/g)) / (g*(a/g)*(b/g)), g = gcd(a, b)."""
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    a, b = x.denominator, y.denominator
    g = gcd(a, b)
    ag, bg = a // g, b // g
    return RatUniPoly(
        uni_int_add(uni_int_scale(x.numerator, bg), uni_int_scale(y.numerator, ag)),
        g * ag * bg,
    )


def frac_sum(terms: Sequence[RatUniPoly]) -> RatUniPoly:
    if not terms:
        return RatUniPoly([], 1)
    if len(terms) == 1:
        return terms[0]
    mid = len(terms) // 2
    return frac_add(frac_sum(terms[:mid]), frac_sum(terms[mid:]))


class _Powers:
    """Memoized powers of D~, d~, Q~_l and q_l for one representation."""

    __slots__ = ("rur", "_cache")

    def __init__(self, rur: RurCandidate) -> None:
        self.rur = rur
        self._cache: dict[tuple[int, int], tuple[UniIntPoly, int]] = {}

    def get(self, which: int, k: int) -> tuple[UniIntPoly, int]:
        # which = -1 is the derivative, l >= 0 the l-th numerator
        key = (which, k)
        if key not in self._cache:
            if which < 0:
                poly, den = self.rur.derivative, self.rur.derivative_den
            else:
                poly, den = self.rur.numerators[which], self.rur.denominators[which]
            self._cache[key] = (uni_int_pow(poly, k), den**k)
        return self._cache[key]


def monomial_eval(
    coeff: int,
    mono: Monomial,
    rur: RurCandidate,
    delta: int,
    powers: _Powers | None = None,
) -> RatUniPoly:
    """c * D~^(delta-|a|) * prod Q~_l^a_l over d~^(delta-|a|) * prod q_l^a_l."""
    if not coeff:
        return RatUniPoly([], 1)
    powers = powers or _Powers(rur)
    factors: list[UniIntPoly] = []
    den = 1
    rest = delta - sum(mono)
    if rest:
        poly, scale = powers.get(-1, rest)
        factors.append(poly)
        den *= scale
    for l, a in enumerate(mono):
        if a:
            poly, scale = powers.get(l, a)
            factors.append(poly)
            den *= scale
    return RatUniPoly(uni_int_scale(uni_int_product(factors), coeff), den)


def _modulus(rur: RurCandidate) -> UniIntPoly:
    return uni_int_primitive(uni_int_strip(list(rur.minpoly)))


def substitute_check(
    eq: IntPoly, rur: RurCandidate
) -> tuple[CertStatus, UniIntPoly | None]:
    delta = eq.total_degree
    powers = _Powers(rur)
    total = frac_sum([monomial_eval(c, m, rur, delta, powers) for m, c in eq.terms])
    _, remainder, _ = uni_int_divrem(total.numerator, _modulus(rur))
    if remainder:
        return CertStatus.FAILED, remainder
    return CertStatus.VERIFIED, None


def sepform_identity_check(rur: RurCandidate) -> CertStatus:
    """sum l_i * Q~_i/q_i == t * D~/d~ modulo m~, cleared to integers."""
    L = lcm(*rur.denominators, rur.derivative_den)
    acc: UniIntPoly = uni_int_scale(
        uni_int_shift(rur.derivative, 1), -(L // rur.derivative_den)
    )
    for lam, Q, q in zip(rur.form.lambdas, rur.numerators, rur.denominators):
        if lam:
            acc = uni_int_add(acc, uni_int_scale(Q, lam * (L // q)))
    _, remainder, _ = uni_int_divrem(acc, _modulus(rur))
    return CertStatus.FAILED if remainder else CertStatus.VERIFIED


def _check_equation(index: int, eq: IntPoly, rur: RurCandidate) -> EquationVerdict:
    status, residual = substitute_check(eq, rur)
    delta = eq.total_degree
    return EquationVerdict(
        index=index,
        degree=delta,
        monomials=len(eq),
        status=status,
        work=rur.prime_count * rur.dim * delta * delta,
        residual=residual,
    )


@dataclass(slots=True)
class CertificationService:
    settings: Settings | None = None

    def __post_init__(self) -> None:
        if self.settings is None:
            self.settings = get_settings()

    async def certify(
        self,
        system: PolySystem,
        rur: RurCandidate,
        mode: int | None = None,
        thread_cap: int | None = None,
        executor_kind: ExecutorKind | None = None,
    ) -> CertReport:
        mode = self.settings.certify_mode if mode is None else mode
        thread_cap = thread_cap or self.settings.cert_threads
        executor = get_executor(executor_kind)
        semaphore = asyncio.Semaphore(thread_cap)

        async def check(index: int, eq: IntPoly) -> EquationVerdict:
            skipped = mode == 0 or (mode > 1 and eq.total_degree >= mode)
            if skipped:
                return EquationVerdict(
                    index, eq.total_degree, len(eq), CertStatus.SKIPPED
                )
            async with semaphore:
                return await run_blocking(executor, _check_equation, index, eq, rur)

        verdicts = await asyncio.gather(
            *(check(i, eq) for i, eq in enumerate(system.generators))
        )
        if any(v.status is not CertStatus.SKIPPED for v in verdicts):
            async with semaphore:
                identity = await run_blocking(executor, sepform_identity_check, rur)
        else:
            identity = CertStatus.SKIPPED

        report = CertReport(tuple(verdicts), identity, mode, rur.radicalized)
        for v in verdicts:
            if v.status is CertStatus.FAILED:
                logger.warning("equation failed index=%d degree=%d", v.index, v.degree)
        logger.info(
            "certification status=%s mode=%d identity=%s work=%d",
            report.overall, mode, identity, report.work,
        )
        return report
