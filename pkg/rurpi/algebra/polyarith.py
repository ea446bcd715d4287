"""Monomials, the grevlex order, sparse multivariate polynomials over Z/pZ and Z,
and dense univariate polynomial kits.

Univariate polynomials are plain lists of coefficients, constant term first,
with no trailing zeros; the zero polynomial is the empty list.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from functools import reduce
from math import gcd

import numpy as np
from sympy import isprime

from ..errors import UsageError

PRIME_LOW = 1 << 29
PRIME_HIGH = 1 << 30
KARATSUBA_THRESHOLD = 32

Monomial = tuple[int, ...]
UniModPoly = list[int]
UniIntPoly = list[int]


class MonomialOrder(StrEnum):
    GREVLEX = "grevlex"


def check_prime(p: int) -> int:
    """Validate a working prime: 2^29 < p < 2^30, so 4p^2 < 2^63."""
    if not (PRIME_LOW < p < PRIME_HIGH) or not isprime(p):
        raise UsageError(f"{p} is not a prime in (2^29, 2^30)")
    return p


# -- monomials ---------------------------------------------------------------


def total_degree(m: Monomial) -> int:
    return sum(m)


def grevlex_key(m: Monomial) -> tuple[int, ...]:
    # ascending key: degree first, then the smaller trailing exponent wins
    return (sum(m), *(-e for e in reversed(m)))


def _heap_key(m: Monomial) -> tuple[int, ...]:
    # min-heap key popping the grevlex-largest monomial first
    return (-sum(m), *reversed(m))


def cmp_grevlex(a: Monomial, b: Monomial) -> int:
    if len(a) != len(b):
        raise UsageError(
            f"monomials over different variable counts ({len(a)} vs {len(b)})"
        )
    ka, kb = grevlex_key(a), grevlex_key(b)
    return (ka > kb) - (ka < kb)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def unit_monomial(nvars: int, index: int | None = None) -> Monomial:
    return tuple(1 if k == index else 0 for k in range(nvars))


def pure_power_index(m: Monomial) -> int | None:
    """Index of the variable when m is a pure power x_i^k (k > 0)."""
    found = None
    for i, e in enumerate(m):
        if e:
            if found is not None:
                return None
            found = i
    return found


# -- sparse multivariate -----------------------------------------------------


def _sorted_terms(items: Iterable[tuple[Monomial, int]]) -> tuple[tuple[Monomial, int], ...]:
    return tuple(sorted(items, key=lambda t: grevlex_key(t[0]), reverse=True))


@dataclass(frozen=True, slots=True)
class ModPoly:
    terms: tuple[tuple[Monomial, int], ...]
    modulus: int
    nvars: int
    order: MonomialOrder = MonomialOrder.GREVLEX

    @classmethod
    def from_dict(
        cls, coeffs: Mapping[Monomial, int], modulus: int, nvars: int
    ) -> ModPoly:
        items = ((m, c % modulus) for m, c in coeffs.items())
        return cls(_sorted_terms((m, c) for m, c in items if c), modulus, nvars)

    @classmethod
    def zero(cls, modulus: int, nvars: int) -> ModPoly:
        return cls((), modulus, nvars)

    @classmethod
    def monomial(cls, m: Monomial, modulus: int, coeff: int = 1) -> ModPoly:
        coeff %= modulus
        return cls(((m, coeff),) if coeff else (), modulus, len(m))

    @classmethod
    def linear_form(cls, lambdas: Sequence[int], modulus: int) -> ModPoly:
        n = len(lambdas)
        return cls.from_dict(
            {unit_monomial(n, i): c for i, c in enumerate(lambdas)}, modulus, n
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lm(self) -> Monomial:
        return self.terms[0][0]

    @property
    def lc(self) -> int:
        return self.terms[0][1]

    def tail(self) -> ModPoly:
        return ModPoly(self.terms[1:], self.modulus, self.nvars, self.order)

    def to_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def monic(self) -> ModPoly:
        if self.is_zero or self.lc == 1:
            return self
        return self.scale(pow(self.lc, -1, self.modulus))

    def scale(self, c: int) -> ModPoly:
        p = self.modulus
        c %= p
        if not c:
            return ModPoly.zero(p, self.nvars)
        return ModPoly(tuple((m, a * c % p) for m, a in self.terms), p, self.nvars)

    def mul_term(self, mono: Monomial, c: int = 1) -> ModPoly:
        p = self.modulus
        c %= p
        if not c:
            return ModPoly.zero(p, self.nvars)
        # multiplying by a monomial preserves the order of the terms
        return ModPoly(
            tuple((mono_mul(m, mono), a * c % p) for m, a in self.terms), p, self.nvars
        )

    def __add__(self, other: ModPoly) -> ModPoly:
        acc = self.to_dict()
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return ModPoly.from_dict(acc, self.modulus, self.nvars)

    def __sub__(self, other: ModPoly) -> ModPoly:
        return self + other.scale(-1)

    def __mul__(self, other: ModPoly) -> ModPoly:
        p = self.modulus
        acc: dict[Monomial, int] = {}
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                m = mono_mul(ma, mb)
                acc[m] = (acc.get(m, 0) + ca * cb) % p
        return ModPoly.from_dict(acc, p, self.nvars)


@dataclass(frozen=True, slots=True)
class IntPoly:
    terms: tuple[tuple[Monomial, int], ...]
    nvars: int

    @classmethod
    def from_dict(cls, coeffs: Mapping[Monomial, int], nvars: int) -> IntPoly:
        return cls(_sorted_terms((m, c) for m, c in coeffs.items() if c), nvars)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def leading_monomial(self) -> Monomial:
        return self.terms[0][0]

    @property
    def leading_coefficient(self) -> int:
        return self.terms[0][1]

    @property
    def total_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    def __len__(self) -> int:
        return len(self.terms)

    def content(self) -> int:
        return reduce(gcd, (c for _, c in self.terms), 0)

    def reduce(self, p: int) -> ModPoly:
        return ModPoly(
            tuple((m, c % p) for m, c in self.terms if c % p), p, self.nvars
        )


def normal_form(f: ModPoly, basis: Sequence[ModPoly]) -> ModPoly:
    """Fully reduce f by the basis; no term of the result is divisible by a
    leading monomial of the basis."""
    if f.is_zero or not basis:
        return f
    p = f.modulus
    reducers = [(g.lm, pow(g.lc, -1, p), g.terms[1:]) for g in basis if not g.is_zero]
    work = dict(f.terms)
    heap = [(_heap_key(m), m) for m in work]
    heapq.heapify(heap)
    remainder: list[tuple[Monomial, int]] = []
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        for lm, inv, tail in reducers:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                factor = c * inv % p
                for tm, tc in tail:
                    nm = mono_mul(tm, q)
                    old = work.get(nm)
                    if old is None:
                        work[nm] = -factor * tc % p
                        heapq.heappush(heap, (_heap_key(nm), nm))
                    else:
                        new = (old - factor * tc) % p
                        if new:
                            work[nm] = new
                        else:
                            del work[nm]
                break
        else:
            remainder.append((m, c))
    return ModPoly(tuple(remainder), p, f.nvars, f.order)


# -- delayed-reduction dot products ------------------------------------------


def matvec_modp(rows: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """rows @ v mod p with residues in [0, p), p < 2^30.

    Accumulators stay in [0, 4p^2): four products are added, 4p^2 is
    subtracted and added back through the sign bit, with no branch.
    """
    p2 = 4 * p * p
    acc = np.zeros(rows.shape[0], dtype=np.int64)
    d = rows.shape[1]
    k = 0
    while k + 4 <= d:
        acc += (
            rows[:, k] * v[k]
            + rows[:, k + 1] * v[k + 1]
            + rows[:, k + 2] * v[k + 2]
            + rows[:, k + 3] * v[k + 3]
        )
        acc -= p2
        acc += (acc >> 63) & p2
        k += 4
    for j in range(k, d):
        acc += rows[:, j] * v[j]
        acc -= p2
        acc += (acc >> 63) & p2
    return acc % p


# -- univariate over Z/pZ ----------------------------------------------------


def uni_strip(a: list[int]) -> list[int]:
    while a and not a[-1]:
        a.pop()
    return a


def uni_degree(a: Sequence[int]) -> int:
    return len(a) - 1


def uni_monic_modp(a: Sequence[int], p: int) -> UniModPoly:
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def uni_add_modp(a: Sequence[int], b: Sequence[int], p: int) -> UniModPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return uni_strip(out)


def uni_sub_modp(a: Sequence[int], b: Sequence[int], p: int) -> UniModPoly:
    return uni_add_modp(a, [-c % p for c in b], p)


def uni_scale_modp(a: Sequence[int], c: int, p: int) -> UniModPoly:
    c %= p
    return uni_strip([x * c % p for x in a]) if c else []


def uni_mul_modp(a: Sequence[int], b: Sequence[int], p: int) -> UniModPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return uni_strip([c % p for c in out])


def uni_derivative_modp(a: Sequence[int], p: int) -> UniModPoly:
    return uni_strip([i * a[i] % p for i in range(1, len(a))])


def uni_divrem_modp(
    a: Sequence[int], b: Sequence[int], p: int
) -> tuple[UniModPoly, UniModPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [c % p for c in a]
    uni_strip(r)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv = pow(b[-1], -1, p)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv % p
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] = (r[k + j] - c * b[j]) % p
    return uni_strip(q), uni_strip(r[:db])


def uni_rem_modp(a: Sequence[int], b: Sequence[int], p: int) -> UniModPoly:
    return uni_divrem_modp(a, b, p)[1]


def uni_gcd_modp(
    a: Sequence[int], b: Sequence[int], p: int, cofactors: bool = False
) -> UniModPoly | tuple[UniModPoly, UniModPoly, UniModPoly]:
    """Monic gcd; with ``cofactors`` also (u, v) such that u*a + v*b = g."""
    r0, r1 = uni_strip([c % p for c in a]), uni_strip([c % p for c in b])
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = uni_divrem_modp(r0, r1, p)
        r0, r1 = r1, r
        if cofactors:
            s0, s1 = s1, uni_sub_modp(s0, uni_mul_modp(q, s1, p), p)
            t0, t1 = t1, uni_sub_modp(t0, uni_mul_modp(q, t1, p), p)
    if not r0:
        return ([], [], []) if cofactors else []
    inv = pow(r0[-1], -1, p)
    g = uni_scale_modp(r0, inv, p)
    if not cofactors:
        return g
    return g, uni_scale_modp(s0, inv, p), uni_scale_modp(t0, inv, p)


def uni_inverse_modp(a: Sequence[int], m: Sequence[int], p: int) -> UniModPoly:
    g, u, _ = uni_gcd_modp(a, m, p, cofactors=True)
    if g != [1]:
        raise ZeroDivisionError("polynomial is not invertible modulo m")
    return uni_rem_modp(u, m, p)


def uni_compose_linear(
    a: Sequence[int], form: ModPoly
) -> ModPoly:
    """Expand a(t) with t replaced by a multivariate (linear) polynomial."""
    p = form.modulus
    acc = ModPoly.zero(p, form.nvars)
    one = unit_monomial(form.nvars)
    for c in reversed(a):
        acc = acc * form + ModPoly.monomial(one, p, c)
    return acc


# -- univariate over Z -------------------------------------------------------


def uni_int_strip(a: list[int]) -> list[int]:
    while a and not a[-1]:
        a.pop()
    return a


def uni_int_add(a: Sequence[int], b: Sequence[int]) -> UniIntPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return uni_int_strip(out)


def uni_int_sub(a: Sequence[int], b: Sequence[int]) -> UniIntPoly:
    return uni_int_add(a, [-c for c in b])


def uni_int_scale(a: Sequence[int], c: int) -> UniIntPoly:
    return [x * c for x in a] if c else []


def uni_int_shift(a: Sequence[int], k: int) -> UniIntPoly:
    """Multiply by t^k."""
    return [0] * k + list(a) if a else []


def uni_int_derivative(a: Sequence[int]) -> UniIntPoly:
    return uni_int_strip([i * a[i] for i in range(1, len(a))])


def uni_int_content(a: Sequence[int]) -> int:
    return reduce(gcd, a, 0)


def uni_int_primitive(a: Sequence[int]) -> UniIntPoly:
    """Primitive part with a positive leading coefficient."""
    if not a:
        return []
    c = uni_int_content(a)
    if a[-1] < 0:
        c = -c
    return [x // c for x in a]


def _schoolbook(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _add_into(out: list[int], part: Sequence[int], offset: int, sign: int = 1) -> None:
    for i, c in enumerate(part):
        out[offset + i] += sign * c


def _karatsuba(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    if len(b) <= KARATSUBA_THRESHOLD:
        return _schoolbook(a, b)
    h = len(a) // 2
    out = [0] * (len(a) + len(b) - 1)
    if len(b) <= h:
        _add_into(out, _karatsuba(a[:h], b), 0)
        _add_into(out, _karatsuba(a[h:], b), h)
        return out
    a0, a1, b0, b1 = a[:h], a[h:], b[:h], b[h:]
    z0 = _karatsuba(a0, b0)
    z2 = _karatsuba(a1, b1)
    z1 = _karatsuba(_padded_sum(a0, a1), _padded_sum(b0, b1))
    _add_into(out, z0, 0)
    _add_into(out, z2, 2 * h)
    _add_into(out, z1, h)
    _add_into(out, z0, h, -1)
    _add_into(out, z2, h, -1)
    return out


def _padded_sum(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def uni_int_mul(a: Sequence[int], b: Sequence[int]) -> UniIntPoly:
    """Exact product: schoolbook below 32 coefficients, Karatsuba above."""
    if not a or not b:
        return []
    return uni_int_strip(_karatsuba(a, b))


def uni_int_pow(a: Sequence[int], k: int) -> UniIntPoly:
    result: UniIntPoly = [1]
    base = list(a)
    while k:
        if k & 1:
            result = uni_int_mul(result, base)
        k >>= 1
        if k:
            base = uni_int_mul(base, base)
    return result


def uni_int_product(factors: Sequence[Sequence[int]]) -> UniIntPoly:
    """Balanced product tree."""
    if not factors:
        return [1]
    if len(factors) == 1:
        return list(factors[0])
    mid = len(factors) // 2
    return uni_int_mul(uni_int_product(factors[:mid]), uni_int_product(factors[mid:]))


def uni_int_divrem(
    a: Sequence[int], b: Sequence[int]
) -> tuple[UniIntPoly, UniIntPoly, int]:
    """Pseudo-division: returns (q, r, dhat) with dhat*a = q*b + r, deg r < deg b
    and dhat a power of the leading coefficient of b."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = uni_int_strip(list(a))
    db = len(b) - 1
    lcb = b[-1]
    dhat = 1
    if len(r) - 1 < db:
        return [], r, dhat
    q = [0] * (len(r) - db)
    while len(r) - 1 >= db:
        s = len(r) - 1 - db
        c = r[-1]
        if c % lcb:
            r = [x * lcb for x in r]
            q = [x * lcb for x in q]
            dhat *= lcb
            factor = c
        else:
            factor = c // lcb
        q[s] += factor
        for j in range(db + 1):
            r[s + j] -= factor * b[j]
        uni_int_strip(r)
    return uni_int_strip(q), r, dhat
