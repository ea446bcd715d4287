from __future__ import annotations

import random
from dataclasses import replace

import pytest

from rurpi.algebra import polyarith
from rurpi.algebra.polyarith import IntPoly
from rurpi.algebra.quotient import SepForm
from rurpi.config import SolveConfig
from rurpi.models.rur import CertStatus, RurCandidate
from rurpi.models.system import PolySystem
from rurpi.parser import parse_system
from rurpi.services.certify import (
    CertificationService,
    RatUniPoly,
    frac_add,
    frac_sum,
    monomial_eval,
    sepform_identity_check,
    substitute_check,
)
from rurpi.services.driver import SolverService
from rurpi.systems import katsura

TOY_RUR = RurCandidate(
    form=SepForm((0, 1)),
    minpoly=[2, -3, 1],
    numerators=([-5, 3], [-4, 3]),
    denominators=(1, 1),
    derivative=[-3, 2],
    derivative_den=1,
    prime_count=1,
)

SQRT2_RUR = RurCandidate(
    form=SepForm((1,)),
    minpoly=[-2, 0, 1],
    numerators=([4],),
    denominators=(1,),
    derivative=[0, 2],
    derivative_den=1,
    prime_count=1,
)


def _poly(text: str) -> IntPoly:
    (eq,) = parse_system(f"vars: x, y\n{text}\n").generators
    return eq


def test_frac_add_examples() -> None:
    assert frac_add(RatUniPoly([1], 2), RatUniPoly([1], 3)) == RatUniPoly([5], 6)
    assert frac_add(RatUniPoly([1, 1], 4), RatUniPoly([1], 6)) == RatUniPoly([5, 3], 12)
    assert frac_add(RatUniPoly([], 1), RatUniPoly([7], 5)) == RatUniPoly([7], 5)
    assert frac_add(RatUniPoly([3], 2), RatUniPoly([-3], 2)).normalize() == RatUniPoly([], 1)
    assert frac_sum([]) == RatUniPoly([], 1)
    assert frac_sum([RatUniPoly([1], k) for k in (2, 3, 6)]).normalize() == RatUniPoly([1], 1)


def test_monomial_eval_examples() -> None:
    # x*y with delta 2: Q_x * Q_y
    assert monomial_eval(1, (1, 1), TOY_RUR, 2) == RatUniPoly([20, -27, 9], 1)
    # constant -2 with delta 2: -2 * D^2
    assert monomial_eval(-2, (0, 0), TOY_RUR, 2) == RatUniPoly([-18, 24, -8], 1)
    assert monomial_eval(0, (3, 0), TOY_RUR, 3) == RatUniPoly([], 1)

    halved = replace(TOY_RUR, denominators=(2, 1), derivative_den=3)
    value = monomial_eval(1, (1, 0), halved, 2)
    assert value.denominator == 6
    assert value.numerator == [15, -19, 6]


def test_toy_equations_substitute_to_zero() -> None:
    assert substitute_check(_poly("x + y - 3"), TOY_RUR) == (CertStatus.VERIFIED, None)
    assert substitute_check(_poly("x*y - 2"), TOY_RUR) == (CertStatus.VERIFIED, None)
    assert substitute_check(_poly("x^2 - 3*x + 2"), TOY_RUR) == (CertStatus.VERIFIED, None)


def test_wrong_equation_reports_residual() -> None:
    status, residual = substitute_check(_poly("x - 1"), TOY_RUR)
    assert status is CertStatus.FAILED
    assert residual == [-2, 1]


def test_sepform_identity() -> None:
    assert sepform_identity_check(TOY_RUR) is CertStatus.VERIFIED
    assert sepform_identity_check(SQRT2_RUR) is CertStatus.VERIFIED
    assert sepform_identity_check(replace(SQRT2_RUR, numerators=([5],))) is CertStatus.FAILED


def test_common_factor_is_harmless() -> None:
    scaled = replace(TOY_RUR, numerators=([-35, 21], [-28, 21]), denominators=(7, 7))
    assert substitute_check(_poly("x*y - 2"), scaled)[0] is CertStatus.VERIFIED
    assert sepform_identity_check(scaled) is CertStatus.VERIFIED

    # a non-primitive minimal polynomial describes the same roots
    doubled = replace(TOY_RUR, minpoly=[4, -6, 2])
    assert substitute_check(_poly("x*y - 2"), doubled)[0] is CertStatus.VERIFIED


@pytest.mark.asyncio
async def test_certify_modes(settings) -> None:
    system = parse_system("vars: x, y\nx + y - 3\nx*y - 2\n(x + y - 3)*x^21\n")
    service = CertificationService(settings)

    full = await service.certify(system, TOY_RUR, mode=1, executor_kind="thread")
    assert [v.status for v in full.equations] == [CertStatus.VERIFIED] * 3
    assert full.equations[2].degree == 22
    assert full.overall is CertStatus.VERIFIED

    capped = await service.certify(system, TOY_RUR, mode=19, executor_kind="thread")
    assert [v.status for v in capped.equations] == [
        CertStatus.VERIFIED,
        CertStatus.VERIFIED,
        CertStatus.SKIPPED,
    ]
    assert capped.sepform_identity is CertStatus.VERIFIED
    assert capped.overall is CertStatus.VERIFIED

    skipped = await service.certify(system, TOY_RUR, mode=0, executor_kind="thread")
    assert all(v.status is CertStatus.SKIPPED for v in skipped.equations)
    assert skipped.sepform_identity is CertStatus.SKIPPED
    assert skipped.overall is CertStatus.SKIPPED
    assert skipped.work == 0


@pytest.mark.asyncio
async def test_certify_reports_failure(settings) -> None:
    system = parse_system("vars: x, y\nx + y - 3\nx*y - 3\n")
    report = await CertificationService(settings).certify(
        system, TOY_RUR, mode=1, executor_kind="thread"
    )
    assert report.equations[0].status is CertStatus.VERIFIED
    assert report.equations[1].status is CertStatus.FAILED
    assert report.equations[1].residual
    assert report.overall is CertStatus.FAILED


def _perturbations(rur: RurCandidate, rng: random.Random, count: int):
    deltas = [d for d in range(-5, 6) if d]
    fields = ["minpoly", "derivative"] + [f"numerator{l}" for l in range(rur.nvars)]
    produced = 0
    while produced < count:
        which = rng.choice(fields)
        delta = rng.choice(deltas)
        if which.startswith("numerator"):
            l = int(which.removeprefix("numerator"))
            coeffs = list(rur.numerators[l]) or [0]
        else:
            coeffs = list(getattr(rur, which))
        k = rng.randrange(len(coeffs))
        coeffs[k] += delta
        if which == "minpoly" and coeffs[-1] == 0:
            continue
        if which.startswith("numerator"):
            numerators = list(rur.numerators)
            numerators[l] = coeffs
            yield replace(rur, numerators=tuple(numerators))
        else:
            yield replace(rur, **{which: coeffs})
        produced += 1


async def _count_false_verifications(
    system: PolySystem, rur: RurCandidate, seed: int, settings
) -> int:
    service = CertificationService(settings)
    wrong = 0
    for bad in _perturbations(rur, random.Random(seed), 100):
        report = await service.certify(system, bad, mode=1, executor_kind="thread")
        if report.overall is not CertStatus.FAILED:
            wrong += 1
    return wrong


@pytest.mark.asyncio
async def test_perturbed_toy_never_verifies(toy_system: PolySystem, settings) -> None:
    assert await _count_false_verifications(toy_system, TOY_RUR, 1, settings) == 0


@pytest.mark.asyncio
async def test_perturbed_katsura_never_verifies(
    solve_config: SolveConfig, settings
) -> None:
    system = katsura(3)
    candidate, report = await SolverService(settings).solve(system, solve_config)
    assert report.overall is CertStatus.VERIFIED
    assert await _count_false_verifications(system, candidate, 2, settings) == 0


def _multiplication_work(monkeypatch, eq: IntPoly, rur: RurCandidate) -> int:
    # operand size in coefficients times bits, the cost of one fast product
    work = 0
    mul = polyarith.uni_int_mul

    def counting_mul(a, b):
        nonlocal work
        bits = max(abs(c) for c in a).bit_length() + max(abs(c) for c in b).bit_length()
        work += (len(a) + len(b)) * bits
        return mul(a, b)

    with monkeypatch.context() as patch:
        patch.setattr(polyarith, "uni_int_mul", counting_mul)
        substitute_check(eq, rur)
    return work


def test_substitution_work_grows_quadratically_in_degree(monkeypatch) -> None:
    eq = _poly("x^20 - y^20")
    squared = _poly("x^40 - 2*x^20*y^20 + y^40")
    assert squared.total_degree == 2 * eq.total_degree

    base = _multiplication_work(monkeypatch, eq, TOY_RUR) / len(eq.terms)
    doubled = _multiplication_work(monkeypatch, squared, TOY_RUR) / len(squared.terms)
    assert base > 0
    # quadratic growth gives 4x per term when the degree doubles
    assert doubled <= 5 * base
