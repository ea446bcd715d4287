"""Real-root isolation of integer polynomials (Vincent-Akritas-Strzebonski
continued fractions) and interval back-substitution through a representation."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .polyarith import IntPoly, UniIntPoly, uni_int_primitive, uni_int_strip

if TYPE_CHECKING:
    from ..models.rur import RurCandidate

# Moebius transform x -> (a*x + b) / (c*x + d)
Moebius = tuple[int, int, int, int]


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, x: Fraction | int) -> Interval:
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction | int) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: Interval) -> Interval:
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other: Interval) -> Interval:
        products = (
            self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi
        )
        return Interval(min(products), max(products))

    def scale(self, c: Fraction | int) -> Interval:
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))

    def __truediv__(self, other: Interval) -> Interval:
        if other.contains(0):
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __pow__(self, k: int) -> Interval:
        out = Interval.point(1)
        for _ in range(k):
            out = out * self
        return out


@dataclass(frozen=True, slots=True)
class IsolationInterval:
    lo: Fraction
    hi: Fraction
    exact: bool = False

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)


@dataclass(frozen=True, slots=True)
class SolutionBox:
    root: IsolationInterval
    coords: tuple[Interval, ...]

    @property
    def exact(self) -> bool:
        return self.root.exact


# -- univariate helpers ------------------------------------------------------


def _sign(x: Fraction | int) -> int:
    return (x > 0) - (x < 0)


def eval_exact(f: Sequence[int], x: Fraction | int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def eval_interval(f: Sequence[int], x: Interval) -> Interval:
    acc = Interval.point(0)
    for c in reversed(f):
        acc = acc * x + Interval.point(c)
    return acc


def sign_variations(f: Sequence[int]) -> int:
    signs = [_sign(c) for c in f if c]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def taylor_shift(f: Sequence[int], s: int) -> UniIntPoly:
    """Coefficients of f(x + s)."""
    g = list(f)
    n = len(g)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            g[j] += s * g[j + 1]
    return g


def _reciprocal_shift(f: Sequence[int]) -> UniIntPoly:
    # (x + 1)^n f(1 / (x + 1))
    return taylor_shift(list(reversed(f)), 1)


def _pow2_exponent(ratio: Fraction, k: int) -> int:
    """Smallest e with 2^(e*k) >= ratio, ratio > 0."""
    e = -(-(ratio.numerator.bit_length() - ratio.denominator.bit_length() + 1) // k)
    while Fraction(2) ** ((e - 1) * k) >= ratio:
        e -= 1
    while Fraction(2) ** (e * k) < ratio:
        e += 1
    return e


def positive_root_bound_exponent(f: Sequence[int]) -> int | None:
    """E with every positive root of f below 2^E, or None when f has none."""
    n = len(f) - 1
    lead = f[-1]
    if lead < 0:
        f = [-c for c in f]
        lead = -lead
    exps = [
        _pow2_exponent(Fraction(-c, lead), n - i) for i, c in enumerate(f[:-1]) if c < 0
    ]
    return max(exps) + 1 if exps else None


def cauchy_bound(f: Sequence[int]) -> int:
    lead = abs(f[-1])
    return 1 + max((abs(c) for c in f[:-1]), default=0) // lead + 1


def _transform(M: Moebius, x: Fraction | int | None) -> Fraction | None:
    a, b, c, d = M
    if x is None:
        return Fraction(a, c) if c else None
    den = c * x + d
    return Fraction(a * x + b) / den if den else None


def _vas_positive(f: UniIntPoly) -> list[tuple[Fraction | None, Fraction | None, bool]]:
    """Roots of f in (0, inf): (lo, hi, exact) with None meaning +infinity."""
    out: list[tuple[Fraction | None, Fraction | None, bool]] = []
    stack: list[tuple[UniIntPoly, Moebius]] = [(list(f), (1, 0, 0, 1))]
    while stack:
        g, M = stack.pop()
        a, b, c, d = M
        while g and g[0] == 0:
            root = _transform(M, 0)
            out.append((root, root, True))
            g = g[1:]
        v = sign_variations(g)
        if v == 0:
            continue
        if v == 1:
            lo, hi = _transform(M, 0), _transform(M, None)
            out.append((lo, hi, False))
            continue
        rev = list(reversed(g))
        E = positive_root_bound_exponent(rev)
        if E is not None and E < 0:
            s = 1 << -E
            g = taylor_shift(g, s)
            M = (a, b + a * s, c, d + c * s)
            a, b, c, d = M
            if g[0] == 0:
                stack.append((g, M))
                continue
            v = sign_variations(g)
            if v < 2:
                stack.append((g, M))
                continue
        g1 = taylor_shift(g, 1)
        M1 = (a, a + b, c, c + d)
        r = 0
        if g1[0] == 0:
            root = _transform(M1, 0)
            out.append((root, root, True))
            g1 = g1[1:]
            r = 1
        v1 = sign_variations(g1)
        if v1:
            stack.append((g1, M1))
        if v - v1 - r > 0:
            g2 = _reciprocal_shift(g)
            M2 = (b, a + b, d, c + d)
            while g2 and g2[0] == 0:
                g2 = g2[1:]
            stack.append((g2, M2))
    return out


def _tighten(f: Sequence[int], lo: Fraction, hi: Fraction) -> IsolationInterval:
    """Move endpoints off roots of f; the open interval holds exactly one root."""
    while eval_exact(f, lo) == 0 or eval_exact(f, hi) == 0:
        mid = (lo + hi) / 2
        fm = eval_exact(f, mid)
        if fm == 0:
            return IsolationInterval(mid, mid, True)
        if eval_exact(f, lo) == 0:
            if _sign(fm) * _sign(eval_exact(f, hi)) < 0 and eval_exact(f, hi) != 0:
                lo = mid
            else:
                hi = mid
        else:
            if _sign(fm) * _sign(eval_exact(f, lo)) < 0:
                hi = mid
            else:
                lo = mid
    return IsolationInterval(lo, hi, False)


def bisect(f: Sequence[int], iv: IsolationInterval) -> IsolationInterval:
    if iv.exact:
        return iv
    mid = (iv.lo + iv.hi) / 2
    fm = eval_exact(f, mid)
    if fm == 0:
        return IsolationInterval(mid, mid, True)
    if _sign(fm) * _sign(eval_exact(f, iv.lo)) < 0:
        return IsolationInterval(iv.lo, mid, False)
    return IsolationInterval(mid, iv.hi, False)


def _positive_pass(f: UniIntPoly, bound: int) -> list[IsolationInterval]:
    out = []
    for lo, hi, exact in _vas_positive(f):
        if exact:
            out.append(IsolationInterval(lo, lo, True))
            continue
        lo = Fraction(0) if lo is None else lo
        hi = Fraction(bound) if hi is None else hi
        if lo > hi:
            lo, hi = hi, lo
        out.append(_tighten(f, lo, hi))
    return out


def isolate_real_roots(m: Sequence[int]) -> list[IsolationInterval]:
    """Disjoint isolating intervals of the real roots of a squarefree m, ascending."""
    f = uni_int_primitive(uni_int_strip(list(m)))
    if len(f) <= 1:
        return []
    found: list[IsolationInterval] = []
    if f[0] == 0:
        found.append(IsolationInterval(Fraction(0), Fraction(0), True))
        while f[0] == 0:
            f = f[1:]
    bound = cauchy_bound(f)
    found.extend(_positive_pass(f, bound))
    mirrored = [c if i % 2 == 0 else -c for i, c in enumerate(f)]
    for iv in _positive_pass(mirrored, bound):
        found.append(IsolationInterval(-iv.hi, -iv.lo, iv.exact))
    found.sort(key=lambda iv: (iv.lo, iv.hi))

    # closed intervals may touch at a non-root point
    for k in range(len(found) - 1):
        while found[k].hi >= found[k + 1].lo:
            if not found[k].exact:
                found[k] = bisect(f, found[k])
            else:
                found[k + 1] = bisect(f, found[k + 1])
    return found


# -- back-substitution -------------------------------------------------------


def _coords(rur: RurCandidate, x: Interval) -> tuple[Interval, ...] | None:
    dm = eval_interval(rur.derivative, x)
    if dm.contains(0):
        return None
    out = []
    for Q, q in zip(rur.numerators, rur.denominators):
        num = eval_interval(Q, x).scale(Fraction(rur.derivative_den, q))
        out.append(num / dm)
    return tuple(out)


def solution_boxes(
    rur: RurCandidate, intervals: Sequence[IsolationInterval], precision: int = 53
) -> list[SolutionBox]:
    """Bisect each root interval until every coordinate is known to 2^-precision."""
    target = Fraction(1, 1 << precision)
    m = rur.minpoly
    boxes = []
    for iv in intervals:
        while True:
            coords = _coords(rur, iv.interval)
            if coords is not None and all(c.width <= target for c in coords):
                break
            iv = bisect(m, iv)
        boxes.append(SolutionBox(iv, coords))
    return boxes


def eval_on_box(poly: IntPoly, box: Sequence[Interval]) -> Interval:
    """Interval enclosure of an integer polynomial over a box."""
    acc = Interval.point(0)
    for mono, c in poly.terms:
        term = Interval.point(c)
        for x, e in zip(box, mono):
            if e:
                term = term * x**e
        acc = acc + term
    return acc
