from __future__ import annotations

import random

import numpy as np
import pytest
from sympy import Matrix, prevprime, symbols

from rurpi.algebra.polyarith import uni_divrem_modp
from rurpi.algebra.quotient import MultMatrix
from rurpi.algebra.seqlinalg import (
    FastHankel,
    HankelSystem,
    berlekamp_massey,
    hankel_solve,
    hankel_solve_fast,
    krylov_sequences,
    random_vector,
)
from rurpi.errors import SingularHankel, UsageError

BIG_PRIME = 1073741789


def dense_matrix(A: list[list[int]], p: int) -> MultMatrix:
    """MultMatrix storing every column densely."""
    d = len(A)
    block = np.array([[A[i][j] % p for i in range(d)] for j in range(d)], dtype=np.int64)
    return MultMatrix(
        d, p, np.full(d, -1, dtype=np.int64), np.arange(d, dtype=np.int64), block
    )


def test_krylov_examples() -> None:
    M = dense_matrix([[0, 2], [1, 0]], 13)
    (seq,) = krylov_sequences(M, [1, 0], [[1, 0]], 4)
    assert seq.s == (1, 0, 2, 0)

    zero = dense_matrix([[0]], 13)
    (seq,) = krylov_sequences(zero, [5], [[1]], 2)
    assert seq.s == (5, 0)

    (seq,) = krylov_sequences(M, [3, 4], [[0, 0]], 4)
    assert seq.s == (0, 0, 0, 0)

    with pytest.raises(UsageError):
        krylov_sequences(M, [1, 0, 0], [[1, 0]], 4)


def test_one_pass_serves_every_target() -> None:
    M = dense_matrix([[1, 2, 0], [0, 1, 3], [4, 0, 1]], 101)
    targets = [[1, 0, 0], [0, 1, 0], [2, 5, 7]]
    together = krylov_sequences(M, [1, 2, 3], targets, 6)
    for t, seq in zip(targets, together):
        (alone,) = krylov_sequences(M, [1, 2, 3], [t], 6)
        assert alone.s == seq.s


def test_random_vector_is_reproducible() -> None:
    a = random_vector(8, BIG_PRIME, seed=4, attempt=1)
    b = random_vector(8, BIG_PRIME, seed=4, attempt=1)
    c = random_vector(8, BIG_PRIME, seed=4, attempt=2)
    assert a.tolist() == b.tolist()
    assert a.tolist() != c.tolist()
    assert all(1 <= x < BIG_PRIME for x in a.tolist())


def test_berlekamp_massey_examples() -> None:
    assert berlekamp_massey([1, 1, 1, 1], 7) == [6, 1]
    assert berlekamp_massey([0, 1, 1, 2, 3, 5, 8, 13], 13) == [12, 12, 1]
    assert berlekamp_massey([1, 0, 2, 0], 13) == [11, 0, 1]
    assert berlekamp_massey([0, 0, 0, 0], 13) == [1]
    with pytest.raises(UsageError):
        berlekamp_massey([1, 2, 3])


def _krylov_minpoly(A: list[list[int]], u: list[int], p: int) -> list[int]:
    """Minimal polynomial of u under A by elimination on the Krylov vectors."""
    d = len(A)
    basis: list[tuple[list[int], list[int], int]] = []  # (reduced vector, combination, pivot)
    w = [c % p for c in u]
    for k in range(d + 1):
        vec = list(w)
        comb = [0] * (d + 1)
        comb[k] = 1
        for b, bc, piv in basis:
            f = vec[piv]
            if f:
                vec = [(x - f * y) % p for x, y in zip(vec, b)]
                comb = [(x - f * y) % p for x, y in zip(comb, bc)]
        nz = [i for i, x in enumerate(vec) if x]
        if not nz:
            poly = comb[: k + 1]
            inv = pow(poly[-1], -1, p)
            return [c * inv % p for c in poly]
        piv = nz[0]
        inv = pow(vec[piv], -1, p)
        basis.append(([x * inv % p for x in vec], [x * inv % p for x in comb], piv))
        w = [sum(A[i][j] * w[j] for j in range(d)) % p for i in range(d)]
    raise AssertionError("Krylov space exceeded the dimension")


def test_berlekamp_massey_against_kernel_oracle() -> None:
    rng = random.Random(21)
    t = symbols("t")
    p = prevprime(1 << 30)
    for case in range(200):
        if case % 20 == 0:
            p = prevprime(p)
        if rng.random() < 0.3:
            # two equal diagonal blocks: the minimal polynomial has degree < d
            half = rng.randrange(1, 7)
            C = [[rng.randrange(p) for _ in range(half)] for _ in range(half)]
            d = 2 * half
            A = [
                [C[i % half][j % half] if i // half == j // half else 0 for j in range(d)]
                for i in range(d)
            ]
        else:
            d = rng.randrange(1, 41 if case < 20 else 13)
            A = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        M = dense_matrix(A, p)
        u = [1] + [0] * (d - 1)
        oracle = _krylov_minpoly(A, u, p)
        found = []
        for attempt in range(2):
            v = random_vector(d, p, seed=case, attempt=attempt)
            (seq,) = krylov_sequences(M, v, [u], 2 * d)
            bm = berlekamp_massey(seq)
            assert uni_divrem_modp(oracle, bm, p)[1] == []
            found.append(bm)
        assert oracle in found
        if d <= 8:
            char = Matrix(A).charpoly(t).all_coeffs()[::-1]
            assert uni_divrem_modp([int(c) % p for c in char], found[0], p)[1] == []


def test_hankel_examples() -> None:
    p = 13
    assert hankel_solve(HankelSystem((1, 0, 1), 2, p), [4, 7]) == [4, 7]
    assert hankel_solve(HankelSystem((1, 2, 3), 2, p), [1, 1]) == [12, 1]
    assert hankel_solve(HankelSystem((5,), 1, p), [10]) == [2]
    assert hankel_solve_fast(HankelSystem((1, 2, 3), 2, p), [1, 1]) == [12, 1]
    with pytest.raises(UsageError):
        HankelSystem((1, 2), 2, p)


@pytest.mark.parametrize("solver", [hankel_solve, hankel_solve_fast])
def test_singular_hankel(solver) -> None:
    with pytest.raises(SingularHankel):
        solver(HankelSystem((1, 1, 1), 2, 13), [1, 2])


def _random_nonsingular(rng: random.Random, d: int, p: int) -> HankelSystem:
    while True:
        sys = HankelSystem(tuple(rng.randrange(p) for _ in range(2 * d)), d, p)
        try:
            FastHankel(sys)
        except SingularHankel:
            continue
        return sys


def _check_equivalence(cases: int, max_dim: int, seed: int) -> None:
    rng = random.Random(seed)
    p = BIG_PRIME
    for _ in range(cases):
        d = rng.randrange(1, max_dim + 1)
        sys = _random_nonsingular(rng, d, p)
        rhs = [rng.randrange(p) for _ in range(d)]
        x = hankel_solve(sys, rhs)
        assert hankel_solve_fast(sys, rhs) == x
        assert sys.apply(x) == rhs


def test_fast_hankel_matches_elimination() -> None:
    _check_equivalence(100, 32, seed=8)


@pytest.mark.slow
def test_fast_hankel_matches_elimination_full() -> None:
    _check_equivalence(500, 128, seed=9)
