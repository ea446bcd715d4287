"""Krylov scalar sequences, Berlekamp-Massey and Hankel solving over Z/pZ."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import InvariantViolation, SingularHankel, UsageError
from .polyarith import (
    UniModPoly,
    matvec_modp,
    uni_divrem_modp,
    uni_gcd_modp,
    uni_mul_modp,
    uni_rem_modp,
    uni_strip,
)
from .quotient import MultMatrix


@dataclass(frozen=True, slots=True)
class ScalarSequence:
    s: tuple[int, ...]
    generator_vector: tuple[int, ...]
    prime: int

    def __len__(self) -> int:
        return len(self.s)


@dataclass(frozen=True, slots=True)
class HankelSystem:
    s: tuple[int, ...]
    dim: int
    prime: int

    def __post_init__(self) -> None:
        if len(self.s) < 2 * self.dim - 1:
            raise UsageError(
                f"Hankel system of dimension {self.dim} needs {2 * self.dim - 1} terms,"
                f" got {len(self.s)}"
            )

    @classmethod
    def from_sequence(cls, seq: ScalarSequence, dim: int) -> HankelSystem:
        return cls(seq.s, dim, seq.prime)

    def matrix(self) -> np.ndarray:
        d = self.dim
        s = np.asarray(self.s[: 2 * d - 1], dtype=np.int64)
        idx = np.add.outer(np.arange(d), np.arange(d))
        return s[idx]

    def apply(self, x: Sequence[int]) -> list[int]:
        return [int(c) for c in matvec_modp(self.matrix(), np.asarray(x, dtype=np.int64), self.prime)]


def random_vector(dim: int, prime: int, seed: int, attempt: int = 0) -> np.ndarray:
    """Uniform vector in [1, p)^d, reproducible from (seed, prime, attempt)."""
    rng = np.random.default_rng([seed, prime, attempt])
    return rng.integers(1, prime, size=dim, dtype=np.int64)


def krylov_sequences(
    M: MultMatrix,
    v: Sequence[int] | np.ndarray,
    targets: Sequence[Sequence[int]],
    count: int,
) -> list[ScalarSequence]:
    """s_j[k] = <(M^T)^k v, targets[j]> for k < count; one pass over M^T serves all targets."""
    p = M.modulus
    w = np.asarray(v, dtype=np.int64) % p
    if len(w) != M.dim or any(len(t) != M.dim for t in targets):
        raise UsageError("Krylov vectors must have the matrix dimension")
    stacked = np.asarray(targets, dtype=np.int64).reshape(len(targets), M.dim) % p
    out = np.zeros((len(targets), count), dtype=np.int64)
    for k in range(count):
        out[:, k] = matvec_modp(stacked, w, p)
        if k + 1 < count:
            w = M.transpose_apply(w)
    gen = tuple(int(c) for c in np.asarray(v, dtype=np.int64) % p)
    return [ScalarSequence(tuple(int(c) for c in row), gen, p) for row in out]


def _check_annihilates(c: UniModPoly, s: Sequence[int], p: int) -> None:
    L = len(c) - 1
    for k in range(len(s) - L):
        acc = 0
        for i, ci in enumerate(c):
            acc += ci * s[k + i]
        if acc % p:
            raise InvariantViolation(
                f"recurrence of degree {L} fails at index {k} mod {p}"
            )


def berlekamp_massey(seq: ScalarSequence | Sequence[int], p: int | None = None) -> UniModPoly:
    """Monic minimal recurrence polynomial, constant term first.

    ``sum_i c_i s_{k+i} = 0`` holds for every window of the sequence; this is
    checked on return.
    """
    if isinstance(seq, ScalarSequence):
        s, p = list(seq.s), seq.prime
    elif p is None:
        raise UsageError("a modulus is required for a raw sequence")
    else:
        s = [c % p for c in seq]

    C, B = [1], [1]
    L, shift, b = 0, 1, 1
    for n, sn in enumerate(s):
        delta = sn
        for i in range(1, L + 1):
            delta += C[i] * s[n - i] if i < len(C) else 0
        delta %= p
        if not delta:
            shift += 1
            continue
        coef = delta * pow(b, -1, p) % p
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C.extend([0] * (need - len(C)))
        for i, bi in enumerate(B):
            C[i + shift] = (C[i + shift] - coef * bi) % p
        if 2 * L <= n:
            L, B, b, shift = n + 1 - L, T, delta, 1
        else:
            shift += 1

    C.extend([0] * (L + 1 - len(C)))
    poly = list(reversed(C[: L + 1]))
    _check_annihilates(poly, s, p)
    return poly


# -- Hankel solving ----------------------------------------------------------


def _eliminate(A: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan on the augmented matrix [H | R]; returns the solved block."""
    d = A.shape[0]
    for col in range(d):
        nz = np.nonzero(A[col:, col])[0]
        if not len(nz):
            raise SingularHankel(f"Hankel matrix singular mod {p} at column {col}")
        piv = col + int(nz[0])
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
        A[col] = A[col] * pow(int(A[col, col]), -1, p) % p
        factors = A[:, col].copy()
        factors[col] = 0
        rows = np.nonzero(factors)[0]
        if len(rows):
            A[rows] = (A[rows] - np.outer(factors[rows], A[col]) % p) % p
    return A[:, d:]


def hankel_solve_many(sys: HankelSystem, rhs: Sequence[Sequence[int]]) -> list[list[int]]:
    d, p = sys.dim, sys.prime
    if any(len(r) != d for r in rhs):
        raise UsageError(f"right-hand sides must have length {d}")
    R = np.asarray(rhs, dtype=np.int64).reshape(len(rhs), d).T % p
    A = np.concatenate([sys.matrix() % p, R], axis=1)
    X = _eliminate(A, p)
    return [[int(c) for c in X[:, j]] for j in range(len(rhs))]


def hankel_solve(sys: HankelSystem, rhs: Sequence[int]) -> list[int]:
    return hankel_solve_many(sys, [rhs])[0]


def _generating_numerator(m: UniModPoly, s: Sequence[int], d: int, p: int) -> UniModPoly:
    # polynomial part of m(t) * sum_k s_k t^(-k-1)
    return uni_strip(
        [sum(m[i + j + 1] * s[j] for j in range(d - i)) % p for i in range(d)]
    )


class FastHankel:
    """Structured Hankel solver through the generating numerator of the sequence.

    With m the degree-d minimal polynomial of s and N = m(t)·S(t) truncated to
    its polynomial part, a right-hand side b corresponds to the numerator A of
    its own generating series and the solution is the coefficient vector of
    A·N⁻¹ mod m. H is nonsingular exactly when gcd(N, m) = 1.
    """

    __slots__ = ("dim", "prime", "minpoly", "_n_inverse")

    def __init__(self, sys: HankelSystem, minpoly: UniModPoly | None = None) -> None:
        d, p = sys.dim, sys.prime
        self.dim, self.prime = d, p
        if minpoly is None:
            s = list(sys.s[: 2 * d])
            s.extend([0] * (2 * d - len(s)))
            minpoly = berlekamp_massey(s, p)
        if len(minpoly) - 1 != d:
            raise SingularHankel(
                f"sequence has linear complexity {len(minpoly) - 1}, not {d}, mod {p}"
            )
        self.minpoly = minpoly
        N = _generating_numerator(minpoly, sys.s, d, p)
        g, u, _ = uni_gcd_modp(N, minpoly, p, cofactors=True)
        if g != [1]:
            raise SingularHankel(f"Hankel matrix singular mod {p}")
        self._n_inverse = uni_rem_modp(u, minpoly, p)

    def solve(self, rhs: Sequence[int]) -> list[int]:
        d, p = self.dim, self.prime
        if len(rhs) != d:
            raise UsageError(f"right-hand side must have length {d}")
        A = _generating_numerator(self.minpoly, [c % p for c in rhs], d, p)
        x = uni_divrem_modp(uni_mul_modp(A, self._n_inverse, p), self.minpoly, p)[1]
        return x + [0] * (d - len(x))


def hankel_solve_fast(
    sys: HankelSystem, rhs: Sequence[int], minpoly: UniModPoly | None = None
) -> list[int]:
    return FastHankel(sys, minpoly).solve(rhs)
