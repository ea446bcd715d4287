from __future__ import annotations

import random
from itertools import product

import numpy as np
import pytest

from rurpi.algebra.polyarith import (
    ModPoly,
    _schoolbook,
    check_prime,
    cmp_grevlex,
    matvec_modp,
    normal_form,
    uni_add_modp,
    uni_divrem_modp,
    uni_gcd_modp,
    uni_int_add,
    uni_int_divrem,
    uni_int_mul,
    uni_int_strip,
    uni_mul_modp,
)
from rurpi.errors import UsageError

BIG_PRIME = 1073741789


def test_check_prime_bounds() -> None:
    assert check_prime(BIG_PRIME) == BIG_PRIME
    with pytest.raises(UsageError):
        check_prime(13)
    with pytest.raises(UsageError):
        check_prime(BIG_PRIME + 1)


def test_grevlex_examples() -> None:
    assert cmp_grevlex((2, 0), (1, 1)) == 1
    assert cmp_grevlex((1, 0), (0, 2)) == -1
    assert cmp_grevlex((1, 1), (1, 1)) == 0
    with pytest.raises(UsageError):
        cmp_grevlex((1, 0), (1, 0, 0))


def test_grevlex_is_a_total_order_refining_degree() -> None:
    rng = random.Random(7)
    monos = [tuple(rng.randrange(4) for _ in range(3)) for _ in range(40)]
    for a, b, c in product(monos[:15], repeat=3):
        if cmp_grevlex(a, b) <= 0 and cmp_grevlex(b, c) <= 0:
            assert cmp_grevlex(a, c) <= 0
    for a, b in product(monos, repeat=2):
        assert cmp_grevlex(a, b) == -cmp_grevlex(b, a)
        if sum(a) > sum(b):
            assert cmp_grevlex(a, b) == 1


def test_normal_form_examples() -> None:
    p = 13
    f = ModPoly.monomial((2, 0), p)
    G = [ModPoly.from_dict({(2, 0): 1, (0, 1): -1}, p, 2)]
    assert normal_form(f, G).terms == (((0, 1), 1),)

    cube = ModPoly.monomial((3,), 7)
    assert normal_form(cube, [ModPoly.from_dict({(2,): 1, (0,): -2}, 7, 1)]).terms == (
        ((1,), 2),
    )

    y = ModPoly.monomial((0, 1), p)
    G = [ModPoly.from_dict({(2, 0): 1, (0, 2): -1}, p, 2)]
    assert normal_form(y, G) == y


def test_normal_form_is_idempotent_and_fully_reduced() -> None:
    rng = random.Random(3)
    p = 10007
    G = [
        ModPoly.from_dict({(2, 0): 1, (0, 1): -1}, p, 2),
        ModPoly.from_dict({(0, 2): 1, (1, 0): 3, (0, 0): 5}, p, 2),
    ]
    for _ in range(50):
        f = ModPoly.from_dict(
            {(rng.randrange(5), rng.randrange(5)): rng.randrange(p) for _ in range(6)}, p, 2
        )
        r = normal_form(f, G)
        assert normal_form(r, G) == r
        for m, _ in r.terms:
            assert not any(all(a >= b for a, b in zip(m, g.lm)) for g in G)


def test_uni_divrem_examples() -> None:
    assert uni_divrem_modp([2, 10, 1], [12, 1], 13) == ([11, 1], [])
    assert uni_divrem_modp([0, 1], [0, 0, 1], 13) == ([], [0, 1])
    assert uni_divrem_modp([], [3, 1], 13) == ([], [])


@pytest.mark.parametrize("p", [13, BIG_PRIME])
def test_uni_divrem_reconstructs_dividend(p: int) -> None:
    rng = random.Random(p)
    for _ in range(1000):
        a = [rng.randrange(p) for _ in range(rng.randrange(0, 12))]
        b = [rng.randrange(p) for _ in range(rng.randrange(1, 6))] + [rng.randrange(1, p)]
        q, r = uni_divrem_modp(a, b, p)
        assert len(r) < len(b)
        expected = [c % p for c in a]
        while expected and not expected[-1]:
            expected.pop()
        assert uni_add_modp(uni_mul_modp(q, b, p), r, p) == expected


def test_uni_gcd_examples() -> None:
    p = 13
    assert uni_gcd_modp([12, 0, 1], [12, 1], p) == [12, 1]
    assert uni_gcd_modp([0, 0, 1], [0, 2], p) == [0, 1]
    assert uni_gcd_modp([4, 0, 2], [], p) == [2, 0, 1]


def test_uni_gcd_cofactors() -> None:
    p = 101
    rng = random.Random(11)
    for _ in range(100):
        a = [rng.randrange(p) for _ in range(rng.randrange(1, 8))]
        b = [rng.randrange(p) for _ in range(rng.randrange(1, 8))]
        g, u, v = uni_gcd_modp(a, b, p, cofactors=True)
        if g:
            assert uni_add_modp(uni_mul_modp(u, a, p), uni_mul_modp(v, b, p), p) == g
            assert uni_divrem_modp(a, g, p)[1] == []
            assert uni_divrem_modp(b, g, p)[1] == []


def test_uni_int_mul_examples() -> None:
    assert uni_int_mul([1, 1], [-1, 1]) == [-1, 0, 1]
    assert uni_int_mul([-5, 3], [-4, 3]) == [20, -27, 9]
    assert uni_int_mul([1, 2, 3], []) == []


def test_uni_int_mul_matches_schoolbook() -> None:
    rng = random.Random(5)
    for _ in range(30):
        a = [rng.randrange(-(1 << 256), 1 << 256) for _ in range(rng.randrange(1, 66))]
        b = [rng.randrange(-(1 << 256), 1 << 256) for _ in range(rng.randrange(1, 66))]
        assert uni_int_mul(a, b) == uni_int_strip(_schoolbook(a, b))


def test_uni_int_divrem_examples() -> None:
    m = [2, -3, 1]
    assert uni_int_divrem(m, m) == ([1], [], 1)
    a = [20 - 18, -27 + 24, 9 - 8]
    assert uni_int_divrem(a, m) == ([1], [], 1)
    assert uni_int_divrem([0, 1], [0, 2]) == ([1], [], 2)


def test_uni_int_divrem_pseudo_identity() -> None:
    rng = random.Random(9)
    for _ in range(200):
        a = [rng.randrange(-50, 50) for _ in range(rng.randrange(0, 10))]
        b = [rng.randrange(-50, 50) for _ in range(rng.randrange(0, 5))] + [
            rng.choice([-7, -2, 1, 3, 5])
        ]
        q, r, dhat = uni_int_divrem(a, b)
        assert len(r) < len(b)
        lhs = uni_int_strip([dhat * c for c in a])
        assert uni_int_add(uni_int_mul(q, b), r) == lhs


def test_matvec_modp_matches_exact_product() -> None:
    rng = np.random.default_rng(1)
    p = BIG_PRIME
    for dim in (1, 3, 4, 17, 64):
        rows = rng.integers(0, p, size=(dim, dim), dtype=np.int64)
        v = rng.integers(0, p, size=dim, dtype=np.int64)
        expected = [
            sum(int(a) * int(b) for a, b in zip(row, v)) % p for row in rows
        ]
        assert [int(c) for c in matvec_modp(rows, v, p)] == expected
