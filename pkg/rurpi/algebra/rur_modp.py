"""One prime's image of the rational univariate representation.

The pipeline per prime: Groebner basis, quotient basis, separating form and
its minimal polynomial, the radicalization loop while that polynomial has
repeated roots, then the Hankel solves giving the numerators.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import count

import numpy as np

from ..errors import BadPrime, DiscardReason, NoSeparatingForm, SingularHankel
from .gbasis import GroebnerBasisModP, LearnedHints, buchberger_modp
from .polyarith import (
    IntPoly,
    ModPoly,
    Monomial,
    UniModPoly,
    uni_compose_linear,
    uni_derivative_modp,
    uni_divrem_modp,
    uni_gcd_modp,
    uni_monic_modp,
    uni_mul_modp,
    uni_rem_modp,
)
from .quotient import (
    DEFAULT_FORM_BOUND,
    MultMatrix,
    QuotientBasis,
    SepForm,
    mult_matrix,
    quotient_basis,
    variable_coords,
)
from .seqlinalg import (
    FastHankel,
    HankelSystem,
    ScalarSequence,
    berlekamp_massey,
    hankel_solve_many,
    krylov_sequences,
    random_vector,
)

logger = logging.getLogger(__name__)

RADICAL_LOOP_BOUND = 3
DEFAULT_FORM_ATTEMPTS = 20

# (stage count, final signature, dimension) as seen by one prime
Shape = tuple[int, frozenset[Monomial], int]


@dataclass(frozen=True, slots=True)
class RurModP:
    prime: int
    form: SepForm
    m: tuple[int, ...]
    q: tuple[tuple[int, ...], ...]
    dim: int
    signature: frozenset[Monomial]
    radicalized: bool
    stage_forms: tuple[SepForm, ...] = ()
    stage_signatures: tuple[frozenset[Monomial], ...] = ()
    stage_hints: tuple[LearnedHints, ...] = field(default=(), repr=False)

    @property
    def shape(self) -> Shape:
        return (len(self.stage_forms), self.signature, self.dim)

    def vector(self) -> list[int]:
        """m (d+1 coefficients) followed by each Q_i padded to d coefficients."""
        out = list(self.m)
        for qi in self.q:
            out.extend(qi)
            out.extend([0] * (self.dim - len(qi)))
        return out


@dataclass(frozen=True, slots=True)
class SharedSolveState:
    """Written once from the first successful prime; read-only afterwards."""

    stage_forms: tuple[SepForm, ...] = ()
    stage_signatures: tuple[frozenset[Monomial], ...] = ()
    hints: tuple[LearnedHints, ...] = ()
    dim: int = 0
    radicalized: bool = False

    @property
    def is_set(self) -> bool:
        return bool(self.stage_forms)

    @property
    def form(self) -> SepForm | None:
        return self.stage_forms[-1] if self.stage_forms else None

    @property
    def signature(self) -> frozenset[Monomial]:
        return self.stage_signatures[-1] if self.stage_signatures else frozenset()

    @property
    def shape(self) -> Shape:
        return (len(self.stage_forms), self.signature, self.dim)

    @classmethod
    def adopt(cls, r: RurModP) -> SharedSolveState:
        return cls(
            stage_forms=r.stage_forms,
            stage_signatures=r.stage_signatures,
            hints=r.stage_hints,
            dim=r.dim,
            radicalized=r.radicalized,
        )


@dataclass(frozen=True, slots=True)
class RurOptions:
    seed: int = 0
    form_attempts: int = DEFAULT_FORM_ATTEMPTS
    form_bound: int = DEFAULT_FORM_BOUND
    hankel_method: str = "gauss"


@dataclass(frozen=True, slots=True, eq=False)
class FormTrial:
    form: SepForm
    matrix: MultMatrix
    sequence: ScalarSequence
    rhs: tuple[ScalarSequence, ...]
    minpoly: UniModPoly

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def squarefree(self) -> bool:
        p = self.sequence.prime
        return uni_gcd_modp(self.minpoly, uni_derivative_modp(self.minpoly, p), p) == [1]


def squarefree_part(m: UniModPoly, p: int) -> UniModPoly:
    g = uni_gcd_modp(m, uni_derivative_modp(m, p), p)
    if not g:
        return uni_monic_modp(m, p)
    return uni_monic_modp(uni_divrem_modp(m, g, p)[0], p)


class _FormSearch:
    """Tries linear forms on one quotient; every trial draws a fresh v."""

    def __init__(
        self, G: GroebnerBasisModP, B: QuotientBasis, seed: int, stage: int = 0
    ) -> None:
        self.G, self.B = G, B
        self.seed = seed
        self.stage = stage
        self._attempts = count(stage << 16)
        self.targets = [B.coords(ModPoly.monomial(B.monomials[0], G.modulus))] + [
            variable_coords(G, B, i) for i in range(G.nvars)
        ]

    def try_form(self, form: SepForm, retry: bool = True) -> FormTrial:
        d, p = self.B.dim, self.G.modulus
        M = mult_matrix(self.G, self.B, form)
        for _ in range(2 if retry else 1):
            v = random_vector(d, p, self.seed, next(self._attempts))
            seqs = krylov_sequences(M, v, self.targets, 2 * d)
            minpoly = berlekamp_massey(seqs[0])
            if len(minpoly) - 1 == d:
                break
        return FormTrial(form, M, seqs[0], tuple(seqs[1:]), minpoly)

    def candidates(self, attempts: int, bound: int):
        n = self.G.nvars
        for i in reversed(range(n)):
            yield SepForm.variable(n, i)
        d = self.B.dim
        width = max(1, min(d * d, bound))
        rng = np.random.default_rng([self.seed, self.G.modulus, self.stage, 1])
        produced = 0
        while produced < attempts:
            lambdas = tuple(int(c) for c in rng.integers(-width, width + 1, size=n))
            if any(lambdas):
                produced += 1
                yield SepForm(lambdas)

    def search(self, attempts: int, bound: int) -> FormTrial:
        """First trial reaching degree d; a degree-d trial with repeated roots
        is returned as well, since it drives radicalization."""
        fallback: FormTrial | None = None
        for form in self.candidates(attempts, bound):
            trial = self.try_form(form)
            logger.debug(
                "form trial p=%d stage=%d form=%s degree=%d/%d",
                self.G.modulus, self.stage, form.lambdas, trial.degree, self.B.dim,
            )
            if trial.degree == self.B.dim:
                return trial
            if fallback is None and not trial.squarefree:
                fallback = trial
        raise NoSeparatingForm(
            f"no separating form among {self.G.nvars + attempts} candidates"
            f" mod {self.G.modulus}",
            fallback=fallback,
        )


def minimal_poly_of_form(
    G: GroebnerBasisModP, B: QuotientBasis, form: SepForm, attempt_seed: int = 0
) -> UniModPoly:
    return _FormSearch(G, B, attempt_seed).try_form(form).minpoly


def find_separating_form(
    G: GroebnerBasisModP,
    B: QuotientBasis,
    seed: int = 0,
    attempts: int = DEFAULT_FORM_ATTEMPTS,
    bound: int = DEFAULT_FORM_BOUND,
) -> tuple[SepForm, UniModPoly]:
    trial = _FormSearch(G, B, seed).search(attempts, bound)
    if not trial.squarefree:
        raise NoSeparatingForm(
            f"form {trial.form.lambdas} reaches degree {trial.degree} with repeated roots",
            fallback=trial,
        )
    return trial.form, trial.minpoly


def _reduce_generators(gens_int: Sequence[IntPoly], p: int) -> list[ModPoly]:
    out = []
    for g in gens_int:
        r = g.reduce(p)
        if r.is_zero or r.lm != g.leading_monomial:
            raise BadPrime(p, DiscardReason.LEADING_COEFFICIENT)
        out.append(r)
    return out


def _parametrize(trial: FormTrial, search: _FormSearch, method: str) -> list[UniModPoly]:
    """Numerators Q_i = P_i * m' mod m, with H * P_i = first d terms of the i-th rhs sequence."""
    p = search.G.modulus
    d = search.B.dim
    for attempt in range(2):
        system = HankelSystem.from_sequence(trial.sequence, d)
        rhs = [list(seq.s[:d]) for seq in trial.rhs]
        try:
            if method == "fast":
                solver = FastHankel(system, trial.minpoly)
                solutions = [solver.solve(r) for r in rhs]
            else:
                solutions = hankel_solve_many(system, rhs)
            break
        except SingularHankel:
            if attempt:
                raise BadPrime(p, DiscardReason.SINGULAR_HANKEL) from None
            logger.debug("singular Hankel p=%d, drawing a fresh vector", p)
            trial = search.try_form(trial.form, retry=False)
    m = trial.minpoly
    dm = uni_derivative_modp(m, p)
    return [uni_rem_modp(uni_mul_modp(P, dm, p), m, p) for P in solutions]


def rur_modp(
    gens_int: Sequence[IntPoly],
    p: int,
    state: SharedSolveState | None = None,
    options: RurOptions | None = None,
) -> RurModP:
    state = state or SharedSolveState()
    options = options or RurOptions()
    gens = _reduce_generators(gens_int, p)

    forms: list[SepForm] = []
    signatures: list[frozenset[Monomial]] = []
    learned: list[LearnedHints] = []
    for stage in range(RADICAL_LOOP_BOUND + 1):
        hints = state.hints[stage] if stage < len(state.hints) else None
        G, hint_out = buchberger_modp(gens, hints)
        B = quotient_basis(G)
        shape = (stage + 1, G.signature, B.dim)
        search = _FormSearch(G, B, options.seed, stage)

        if state.is_set:
            if stage >= len(state.stage_forms) or G.signature != state.stage_signatures[stage]:
                raise BadPrime(p, DiscardReason.SIGNATURE_MISMATCH, shape)
            trial = search.try_form(state.stage_forms[stage])
            final = stage == len(state.stage_forms) - 1
            if final and trial.degree != B.dim:
                raise BadPrime(p, DiscardReason.FORM_NOT_SEPARATING, shape)
            if final and not trial.squarefree:
                raise BadPrime(p, DiscardReason.FORM_NOT_SEPARATING, shape)
            if not final and trial.squarefree and trial.degree == B.dim:
                raise BadPrime(p, DiscardReason.SIGNATURE_MISMATCH, shape)
        else:
            try:
                trial = search.search(options.form_attempts, options.form_bound)
            except NoSeparatingForm as exc:
                if exc.fallback is None:
                    raise BadPrime(p, DiscardReason.NO_SEPARATING_FORM, shape) from exc
                trial = exc.fallback

        forms.append(trial.form)
        signatures.append(G.signature)
        learned.append(hint_out)
        if trial.degree == B.dim and trial.squarefree:
            q = _parametrize(trial, search, options.hankel_method)
            return RurModP(
                prime=p,
                form=trial.form,
                m=tuple(trial.minpoly),
                q=tuple(tuple(qi) for qi in q),
                dim=B.dim,
                signature=G.signature,
                radicalized=stage > 0,
                stage_forms=tuple(forms),
                stage_signatures=tuple(signatures),
                stage_hints=tuple(learned),
            )

        sqfree = squarefree_part(trial.minpoly, p)
        logger.debug(
            "radicalizing p=%d stage=%d degree=%d sqfree=%d",
            p, stage, trial.degree, len(sqfree) - 1,
        )
        gens = list(G.polys) + [uni_compose_linear(sqfree, trial.form.as_modpoly(p))]

    raise BadPrime(p, DiscardReason.RADICAL_LOOP, (RADICAL_LOOP_BOUND + 1, frozenset(), 0))
