from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod

import numpy as np

from ..errors import NotZeroDimensional, UsageError
from .gbasis import GroebnerBasisModP
from .polyarith import (
    ModPoly,
    Monomial,
    grevlex_key,
    matvec_modp,
    mono_divides,
    mono_mul,
    normal_form,
    pure_power_index,
    unit_monomial,
)

DEFAULT_FORM_BOUND = 1 << 20


@dataclass(frozen=True, slots=True)
class QuotientBasis:
    """Staircase monomials of V = F_p[x]/I, ascending grevlex; index 0 is 1."""

    monomials: tuple[Monomial, ...]
    degree_bounds: tuple[int, ...]
    index: dict[Monomial, int] = field(compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def bound_product(self) -> int:
        return prod(self.degree_bounds)

    def coords(self, f: ModPoly) -> list[int]:
        """Coordinates of an already reduced polynomial."""
        out = [0] * self.dim
        for m, c in f.terms:
            out[self.index[m]] = c
        return out


@dataclass(frozen=True, slots=True)
class SepForm:
    lambdas: tuple[int, ...]

    def __post_init__(self) -> None:
        if not any(self.lambdas):
            raise UsageError("separating form has all-zero coefficients")

    @classmethod
    def variable(cls, nvars: int, index: int) -> SepForm:
        return cls(unit_monomial(nvars, index))

    @property
    def variable_index(self) -> int | None:
        """Index i when the form is exactly x_i."""
        nonzero = [i for i, c in enumerate(self.lambdas) if c]
        if len(nonzero) == 1 and self.lambdas[nonzero[0]] == 1:
            return nonzero[0]
        return None

    def as_modpoly(self, p: int) -> ModPoly:
        return ModPoly.linear_form(self.lambdas, p)


@dataclass(frozen=True, slots=True, eq=False)
class MultMatrix:
    """Multiplication by the form on V in mixed storage.

    ``unit_targets[j]`` is the row of the single 1 in column j, or -1 when the
    column is dense; dense columns are the rows of ``dense_block`` in the order
    of ``dense_columns``.
    """

    dim: int
    modulus: int
    unit_targets: np.ndarray
    dense_columns: np.ndarray
    dense_block: np.ndarray

    def column(self, j: int) -> list[int]:
        target = int(self.unit_targets[j])
        if target >= 0:
            col = [0] * self.dim
            col[target] = 1
            return col
        row = int(np.nonzero(self.dense_columns == j)[0][0])
        return [int(c) for c in self.dense_block[row]]

    def to_dense(self) -> np.ndarray:
        return np.array([self.column(j) for j in range(self.dim)], dtype=np.int64).T

    def transpose_apply(self, v: np.ndarray) -> np.ndarray:
        """Mᵀ·v: column j of M dotted with v, for every j."""
        out = np.zeros(self.dim, dtype=np.int64)
        mask = self.unit_targets >= 0
        out[mask] = v[self.unit_targets[mask]]
        if len(self.dense_columns):
            out[self.dense_columns] = matvec_modp(self.dense_block, v, self.modulus)
        return out


def quotient_basis(G: GroebnerBasisModP) -> QuotientBasis:
    n = G.nvars
    lms = G.leading_monomials
    bounds = [0] * n
    for m in lms:
        i = pure_power_index(m)
        if i is not None and (not bounds[i] or m[i] < bounds[i]):
            bounds[i] = m[i]
    missing = [i for i, b in enumerate(bounds) if not b]
    if missing:
        raise NotZeroDimensional(
            f"no pure-power leading monomial for variable index {missing[0]}"
        )
    # itertools.product walks the mixed-radix digits of 0 <= i < D in order
    kept = [
        m
        for m in product(*(range(b) for b in bounds))
        if not any(mono_divides(lm, m) for lm in lms)
    ]
    kept.sort(key=grevlex_key)
    return QuotientBasis(
        tuple(kept), tuple(bounds), {m: i for i, m in enumerate(kept)}
    )


def variable_coords(G: GroebnerBasisModP, B: QuotientBasis, index: int) -> list[int]:
    x = ModPoly.monomial(unit_monomial(G.nvars, index), G.modulus)
    return B.coords(normal_form(x, G.polys))


def _variable_columns(
    G: GroebnerBasisModP, B: QuotientBasis, var: int
) -> list[int | list[int]]:
    """Per basis index: a unit target row, or the dense coordinate column."""
    step = unit_monomial(G.nvars, var)
    by_lm = {g.lm: g for g in G.polys}
    columns: list[int | list[int]] = [0] * B.dim
    for j, b in enumerate(B.monomials):
        m = mono_mul(b, step)
        if m in B.index:
            columns[j] = B.index[m]
        elif m in by_lm:
            columns[j] = B.coords(by_lm[m].tail().scale(-1))
        else:
            columns[j] = B.coords(normal_form(ModPoly.monomial(m, G.modulus), G.polys))
    return columns


def mult_matrix(G: GroebnerBasisModP, B: QuotientBasis, form: SepForm) -> MultMatrix:
    p = G.modulus
    d = B.dim
    var = form.variable_index
    if var is not None:
        columns = _variable_columns(G, B, var)
        targets = np.full(d, -1, dtype=np.int64)
        dense_idx: list[int] = []
        dense_rows: list[list[int]] = []
        for j, col in enumerate(columns):
            if isinstance(col, int):
                targets[j] = col
            else:
                dense_idx.append(j)
                dense_rows.append(col)
        block = np.array(dense_rows, dtype=np.int64).reshape(len(dense_idx), d)
        return MultMatrix(d, p, targets, np.array(dense_idx, dtype=np.int64), block)

    # general form: M = sum of lambda_i * M_{x_i}, stored densely (rows are columns)
    block = np.zeros((d, d), dtype=np.int64)
    for i, lam in enumerate(form.lambdas):
        lam %= p
        if not lam:
            continue
        for j, col in enumerate(_variable_columns(G, B, i)):
            if isinstance(col, int):
                block[j, col] = (block[j, col] + lam) % p
            else:
                block[j] = (block[j] + lam * np.array(col, dtype=np.int64)) % p
    return MultMatrix(
        d, p, np.full(d, -1, dtype=np.int64), np.arange(d, dtype=np.int64), block
    )
