"""Reduced grevlex Groebner bases over Z/pZ.

Buchberger with the normal selection strategy refined by sugar degree and the
Gebauer-Moeller criteria. A completed run records the pairs whose S-polynomial
reduced to zero; later primes skip those pairs instead of reducing them.
"""

from __future__ import annotations

import heapq
import logging
from collections.abc import Collection, Sequence
from dataclasses import dataclass, field

from ..errors import IdealIsUnit, UsageError
from .polyarith import (
    ModPoly,
    Monomial,
    grevlex_key,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    normal_form,
)

logger = logging.getLogger(__name__)

# (lm_i, lm_j, i, j): leading monomials of the pair plus their insertion positions
PairKey = tuple[Monomial, Monomial, int, int]


@dataclass(frozen=True, slots=True)
class LearnedHints:
    zero_pairs: frozenset[PairKey]
    trace: tuple[Monomial, ...]
    signature: frozenset[Monomial]


@dataclass(frozen=True, slots=True)
class GroebnerBasisModP:
    polys: tuple[ModPoly, ...]
    modulus: int
    signature: frozenset[Monomial]

    @property
    def nvars(self) -> int:
        return self.polys[0].nvars

    @property
    def leading_monomials(self) -> list[Monomial]:
        return [g.lm for g in self.polys]


def signatures_compatible(a: Collection[Monomial], b: Collection[Monomial]) -> bool:
    return frozenset(a) == frozenset(b)


def spoly(f: ModPoly, g: ModPoly, lcm: Monomial | None = None) -> ModPoly:
    lcm = lcm or mono_lcm(f.lm, g.lm)
    p = f.modulus
    left = f.mul_term(mono_div(lcm, f.lm), pow(f.lc, -1, p))
    right = g.mul_term(mono_div(lcm, g.lm), pow(g.lc, -1, p))
    return left - right


@dataclass(slots=True)
class _Buchberger:
    modulus: int
    hints: LearnedHints | None
    basis: list[ModPoly] = field(default_factory=list)
    sugar: list[int] = field(default_factory=list)
    active: list[int] = field(default_factory=list)
    pairs: list[tuple] = field(default_factory=list)
    zero_pairs: set[PairKey] = field(default_factory=set)
    skipped: int = 0
    hints_live: bool = False

    def __post_init__(self) -> None:
        self.hints_live = self.hints is not None

    def active_polys(self) -> list[ModPoly]:
        return [self.basis[k] for k in self.active]

    def insert(self, h: ModPoly, sugar: int) -> None:
        h = h.monic()
        if not any(h.lm):
            raise IdealIsUnit(f"basis mod {self.modulus} is {{1}}")
        k = len(self.basis)
        self.basis.append(h)
        self.sugar.append(sugar)
        if self.hints_live:
            trace = self.hints.trace
            if k >= len(trace) or trace[k] != h.lm:
                logger.debug("hints dropped p=%d at insertion=%d", self.modulus, k)
                self.hints_live = False
        self._update(k)

    def _update(self, k: int) -> None:
        h_lm = self.basis[k].lm

        def lm(i: int) -> Monomial:
            return self.basis[i].lm

        candidates = list(self.active)
        lcms = {g: mono_lcm(h_lm, lm(g)) for g in candidates}

        kept: list[int] = []
        for idx, g in enumerate(candidates):
            target = lcms[g]
            if mono_coprime(h_lm, lm(g)):
                kept.append(g)
                continue
            later = candidates[idx + 1 :]
            if any(mono_divides(lcms[f], target) for f in later):
                continue
            if any(mono_divides(lcms[f], target) for f in kept):
                continue
            kept.append(g)
        new_pairs = [g for g in kept if not mono_coprime(h_lm, lm(g))]

        survivors = []
        for entry in self.pairs:
            _, _, i, j, pair_lcm = entry
            if (
                mono_divides(h_lm, pair_lcm)
                and mono_lcm(lm(i), h_lm) != pair_lcm
                and mono_lcm(h_lm, lm(j)) != pair_lcm
            ):
                continue
            survivors.append(entry)
        for g in new_pairs:
            survivors.append(self._pair(g, k, lcms[g]))
        heapq.heapify(survivors)
        self.pairs = survivors
        self.active = [g for g in self.active if not mono_divides(h_lm, lm(g))]
        self.active.append(k)

    def _pair(self, i: int, j: int, lcm: Monomial) -> tuple:
        deg = sum(lcm)
        sugar = max(
            self.sugar[i] + deg - sum(self.basis[i].lm),
            self.sugar[j] + deg - sum(self.basis[j].lm),
        )
        return (sugar, grevlex_key(lcm), i, j, lcm)

    def run(self) -> None:
        while self.pairs:
            sugar, _, i, j, lcm = heapq.heappop(self.pairs)
            key = (self.basis[i].lm, self.basis[j].lm, i, j)
            if self.hints_live and key in self.hints.zero_pairs:
                self.zero_pairs.add(key)
                self.skipped += 1
                continue
            h = normal_form(spoly(self.basis[i], self.basis[j], lcm), self.active_polys())
            if h.is_zero:
                self.zero_pairs.add(key)
            else:
                self.insert(h, sugar)

    def reduced(self) -> list[ModPoly]:
        polys = sorted(self.active_polys(), key=lambda g: grevlex_key(g.lm))
        out = []
        for idx, g in enumerate(polys):
            others = polys[:idx] + polys[idx + 1 :]
            tail = normal_form(g.tail(), others)
            out.append(ModPoly(((g.lm, 1),) + tail.terms, g.modulus, g.nvars))
        return out


def buchberger_modp(
    gens: Sequence[ModPoly], hints: LearnedHints | None = None
) -> tuple[GroebnerBasisModP, LearnedHints]:
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        raise UsageError("no nonzero generators")
    p = gens[0].modulus
    if any(g.modulus != p for g in gens):
        raise UsageError("generators over different moduli")

    engine = _Buchberger(p, hints)
    for g in sorted(gens, key=lambda g: grevlex_key(g.lm)):
        h = normal_form(g, engine.active_polys())
        if not h.is_zero:
            engine.insert(h, max(sum(m) for m, _ in g.terms))
    engine.run()

    polys = engine.reduced()
    signature = frozenset(g.lm for g in polys)
    if hints is not None:
        logger.debug(
            "hinted run p=%d skipped=%d live=%s", p, engine.skipped, engine.hints_live
        )
    learned = LearnedHints(
        zero_pairs=frozenset(engine.zero_pairs),
        trace=tuple(g.lm for g in engine.basis),
        signature=signature,
    )
    return GroebnerBasisModP(tuple(polys), p, signature), learned
