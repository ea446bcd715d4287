"""Benchmark system families."""

from __future__ import annotations

from collections.abc import Callable

from .algebra.polyarith import IntPoly, Monomial
from .errors import UsageError
from .models.system import PolySystem


def _mono(n: int, *indices: int) -> Monomial:
    exps = [0] * n
    for i in indices:
        exps[i] += 1
    return tuple(exps)


def _accumulate(acc: dict[Monomial, int], mono: Monomial, c: int) -> None:
    v = acc.get(mono, 0) + c
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


def katsura(k: int) -> PolySystem:
    """Katsura system in x1..xk; its quotient has dimension 2^(k-1)."""
    if k < 2:
        raise UsageError("katsura needs at least 2 variables")
    n = k - 1
    variables = tuple(f"x{i + 1}" for i in range(k))

    linear: dict[Monomial, int] = {_mono(k, 0): 1, _mono(k): -1}
    for i in range(1, k):
        linear[_mono(k, i)] = 2
    generators = [IntPoly.from_dict(linear, k)]

    for m in range(n):
        acc: dict[Monomial, int] = {}
        for l in range(-n, n + 1):
            a, b = abs(l), abs(m - l)
            if b <= n:
                _accumulate(acc, _mono(k, a, b), 1)
        _accumulate(acc, _mono(k, m), -1)
        generators.append(IntPoly.from_dict(acc, k))
    return PolySystem(variables, tuple(generators), f"katsura({k})")


def noon(k: int) -> PolySystem:
    """Noon's neural network model, 1.1 written as 11/10 and denominators cleared."""
    if k < 2:
        raise UsageError("noon needs at least 2 variables")
    variables = tuple(f"x{i + 1}" for i in range(k))
    generators = []
    for i in range(k):
        acc: dict[Monomial, int] = {_mono(k, i): -11, _mono(k): 10}
        for j in range(k):
            if j != i:
                _accumulate(acc, _mono(k, i, j, j), 10)
        generators.append(IntPoly.from_dict(acc, k))
    return PolySystem(variables, tuple(generators), f"noon({k})")


SYSTEM_FAMILIES: dict[str, Callable[[int], PolySystem]] = {
    "katsura": katsura,
    "noon": noon,
}


def generate(family: str, k: int) -> PolySystem:
    try:
        builder = SYSTEM_FAMILIES[family]
    except KeyError:
        raise UsageError(f"unknown system family {family!r}") from None
    return builder(k)
