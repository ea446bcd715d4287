from __future__ import annotations

import asyncio
import logging
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, isqrt, lcm

from sympy import prevprime

from ..algebra.gbasis import signatures_compatible
from ..algebra.polyarith import (
    PRIME_HIGH,
    PRIME_LOW,
    IntPoly,
    Monomial,
    uni_int_content,
    uni_int_derivative,
    uni_int_primitive,
    uni_int_strip,
)
from ..algebra.quotient import SepForm
from ..algebra.realroots import isolate_real_roots, solution_boxes
from ..algebra.rur_modp import RurModP, RurOptions, SharedSolveState, Shape, rur_modp
from ..config import Settings, SolveConfig, get_settings
from ..errors import (
    BadPrime,
    DiscardReason,
    EmptyVariety,
    IdealIsUnit,
    IncompatiblePrime,
    NeedMorePrimes,
    NoReconstruction,
    NoSeparatingForm,
    NotZeroDimensional,
    ReconstructionFailed,
    RurError,
    UsageError,
)
from ..executor import get_executor, run_blocking
from ..models.document import RurDocument
from ..models.rur import CertReport, DiscardedPrime, RurCandidate
from ..models.system import PolySystem
from .certify import CertificationService

logger = logging.getLogger(__name__)

PRIME_STREAM_LIMIT = 10**6


def prime_stream(
    generators: Sequence[IntPoly], start: int = PRIME_HIGH, limit: int = PRIME_STREAM_LIMIT
) -> Iterator[int]:
    """Descending primes below ``start``, skipping divisors of leading coefficients."""
    if not generators:
        raise UsageError("empty system")
    leading = [g.leading_coefficient for g in generators if not g.is_zero]
    p = start
    for _ in range(limit):
        p = prevprime(p)
        if p <= PRIME_LOW:
            break
        if any(c % p == 0 for c in leading):
            logger.debug("skipping prime p=%d reason=leading-coefficient", p)
            continue
        yield p
    raise ReconstructionFailed(f"prime stream exhausted after {limit} primes")


# -- CRT and rational reconstruction -----------------------------------------


@dataclass(frozen=True, slots=True)
class CrtState:
    modulus: int = 1
    residues: tuple[int, ...] = ()
    primes: tuple[int, ...] = ()
    discarded: tuple[DiscardedPrime, ...] = ()
    form: SepForm | None = None
    signature: frozenset[Monomial] = frozenset()
    dim: int = 0

    @property
    def count(self) -> int:
        return len(self.primes)

    def discard(self, prime: int, reason: DiscardReason) -> CrtState:
        return replace(self, discarded=self.discarded + (DiscardedPrime(prime, reason),))


def _check_compatible(state: CrtState, r: RurModP) -> None:
    if r.form != state.form:
        raise IncompatiblePrime(f"prime {r.prime} used form {r.form.lambdas}")
    if r.dim != state.dim:
        raise IncompatiblePrime(f"prime {r.prime} has degree {r.dim}, expected {state.dim}")
    if not signatures_compatible(r.signature, state.signature):
        raise IncompatiblePrime(f"prime {r.prime} has a different staircase")


def crt_lift(a: int, P: int, b: int, p: int) -> int:
    """The residue mod P*p that is a mod P and b mod p."""
    return a + P * ((b - a) * pow(P % p, -1, p) % p)


def crt_combine(state: CrtState, r: RurModP) -> CrtState:
    p = r.prime
    values = r.vector()
    if not state.primes:
        return replace(
            state,
            modulus=p,
            residues=tuple(values),
            primes=(p,),
            form=r.form,
            signature=r.signature,
            dim=r.dim,
        )
    if gcd(state.modulus, p) != 1:
        raise UsageError(f"prime {p} is not coprime to the accumulated modulus")
    _check_compatible(state, r)
    if len(values) != len(state.residues):
        raise IncompatiblePrime(f"prime {p} carries {len(values)} coefficients")
    P = state.modulus
    lifted = tuple(crt_lift(a, P, b, p) for a, b in zip(state.residues, values))
    return replace(state, modulus=P * p, residues=lifted, primes=state.primes + (p,))


def farey_bounds(P: int) -> tuple[int, int]:
    """(N, D) with 2*N*D < P: |numerator| <= N, 0 < denominator <= D."""
    N = isqrt(P // 2)
    return N, (P - 1) // (2 * N) if N else 0


def farey(residue: int, P: int) -> Fraction:
    if P < 2:
        raise UsageError("modulus must be at least 2")
    N, D = farey_bounds(P)
    r0, r1 = P, residue % P
    t0, t1 = 0, 1
    while r1 > N:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if not t1 or abs(t1) > D or gcd(r1, t1) != 1:
        raise NoReconstruction(f"no rational for {residue} mod a {P.bit_length()}-bit modulus")
    return Fraction(r1, t1)


def _matches(value: Fraction, residue: int, p: int) -> bool:
    if value.denominator % p == 0:
        return False
    return value.numerator * pow(value.denominator, -1, p) % p == residue


def _spot_check_indices(dim: int) -> list[int]:
    # m_{d-1}, m_0, then the highest and lowest coefficient of the first Q
    return [dim - 1, 0, dim + 1 + dim - 1, dim + 1]


def _normalize(
    form: SepForm, coeffs: Sequence[Fraction], dim: int, nvars: int, prime_count: int,
    radicalized: bool,
) -> RurCandidate:
    m_rat = coeffs[: dim + 1]
    m_int = uni_int_primitive(
        [int(c * lcm(*(x.denominator for x in m_rat))) for c in m_rat]
    )
    numerators, denominators = [], []
    for i in range(nvars):
        chunk = coeffs[dim + 1 + i * dim : dim + 1 + (i + 1) * dim]
        scale = lcm(*(c.denominator for c in chunk))
        Q = uni_int_strip([int(c * scale) for c in chunk])
        g = gcd(uni_int_content(Q), scale)
        numerators.append([c // g for c in Q])
        denominators.append(scale // g)
    dm = uni_int_derivative(m_int)
    lc = m_int[-1]
    g = gcd(uni_int_content(dm), lc)
    return RurCandidate(
        form=form,
        minpoly=m_int,
        numerators=tuple(numerators),
        denominators=tuple(denominators),
        derivative=[c // g for c in dm],
        derivative_den=lc // g,
        prime_count=prime_count,
        radicalized=radicalized,
    )


def try_reconstruct(state: CrtState, fresh: RurModP) -> RurCandidate:
    """Candidate over Q checked against ``fresh``; NeedMorePrimes when unstable."""
    if not state.primes:
        raise NeedMorePrimes("no accumulated primes")
    try:
        _check_compatible(state, fresh)
    except IncompatiblePrime as exc:
        raise NeedMorePrimes(str(exc)) from exc
    values = fresh.vector()
    p = fresh.prime
    try:
        for i in _spot_check_indices(state.dim):
            if i < len(values) and not _matches(farey(state.residues[i], state.modulus), values[i], p):
                raise NeedMorePrimes(f"spot check {i} disagrees mod {p}")
        coeffs = [farey(c, state.modulus) for c in state.residues]
    except NoReconstruction as exc:
        raise NeedMorePrimes(str(exc)) from exc
    if not all(_matches(c, v, p) for c, v in zip(coeffs, values)):
        raise NeedMorePrimes(f"full reconstruction disagrees mod {p}")
    nvars = (len(values) - state.dim - 1) // state.dim
    return _normalize(
        state.form, coeffs, state.dim, nvars, state.count, fresh.radicalized
    )


def candidate_vector(candidate: RurCandidate) -> list[Fraction]:
    """The monic m and the Q_i over Q, laid out like RurModP.vector()."""
    lc = candidate.minpoly[-1]
    out = [Fraction(c, lc) for c in candidate.minpoly]
    d = candidate.dim
    for Q, q in zip(candidate.numerators, candidate.denominators):
        out.extend(Fraction(c, q) for c in Q)
        out.extend([Fraction(0)] * (d - len(Q)))
    return out


def candidate_matches(candidate: RurCandidate, r: RurModP) -> bool:
    if r.form != candidate.form or r.dim != candidate.dim:
        return False
    values = r.vector()
    expected = candidate_vector(candidate)
    return len(values) == len(expected) and all(
        _matches(c, v, r.prime) for c, v in zip(expected, values)
    )


# -- orchestration -----------------------------------------------------------


def _run_prime(
    generators: Sequence[IntPoly], p: int, state: SharedSolveState, options: RurOptions
) -> RurModP:
    return rur_modp(generators, p, state, options)


@dataclass(slots=True)
class _Accumulator:
    config: SolveConfig
    state: SharedSolveState = field(default_factory=SharedSolveState)
    crt: CrtState = field(default_factory=CrtState)
    candidate: RurCandidate | None = None
    held: list[RurModP] = field(default_factory=list)
    confirmations: int = 0
    attempted: int = 0
    successes: int = 0
    unit_witnesses: int = 0
    positive_dim_witnesses: int = 0
    form_failures: int = 0
    rivals: Counter = field(default_factory=Counter)

    def _discard(self, p: int, reason: DiscardReason) -> None:
        logger.warning("discarded prime p=%d reason=%s", p, reason)
        self.crt = self.crt.discard(p, reason)

    def _outvote(self, shape: Shape) -> None:
        logger.warning(
            "accumulated primes outvoted count=%d rival_support=%d",
            self.crt.count, self.rivals[shape],
        )
        outvoted = [r.prime for r in self.held] + list(self.crt.primes)
        self.crt = CrtState(discarded=self.crt.discarded)
        for q in outvoted:
            self.crt = self.crt.discard(q, DiscardReason.OUTVOTED)
        self.state = SharedSolveState()
        self.candidate = None
        self.held.clear()
        self.confirmations = 0
        self.rivals.clear()

    def _bad_prime(self, exc: BadPrime) -> None:
        self._discard(exc.prime, exc.reason)
        if exc.reason is DiscardReason.NO_SEPARATING_FORM and not self.state.is_set:
            self.form_failures += 1
            if self.form_failures >= self.config.form_prime_budget:
                raise NoSeparatingForm(
                    f"no separating form over {self.form_failures} primes"
                )
        if self.state.is_set and exc.shape is not None and exc.shape != self.state.shape:
            self.rivals[exc.shape] += 1
            support = self.crt.count + len(self.held)
            if self.rivals[exc.shape] > support:
                self._outvote(exc.shape)

    def _reject_candidate(self, r: RurModP) -> None:
        logger.warning(
            "candidate rejected p=%d reason=%s", r.prime, DiscardReason.CONFIRMATION
        )
        for h in self.held + [r]:
            self.crt = crt_combine(self.crt, h)
        self.held.clear()
        self.candidate = None
        self.confirmations = 0

    def _accepted(self) -> RurCandidate:
        logger.info(
            "candidate accepted primes=%d confirmations=%d discarded=%d",
            self.candidate.prime_count, self.confirmations, len(self.crt.discarded),
        )
        return replace(self.candidate, discarded=self.crt.discarded)

    def _success(self, r: RurModP) -> RurCandidate | None:
        self.successes += 1
        if not self.state.is_set:
            self.state = SharedSolveState.adopt(r)
            self.crt = crt_combine(self.crt, r)
            logger.info(
                "learned shape p=%d dim=%d stages=%d form=%s",
                r.prime, r.dim, len(r.stage_forms), r.form.lambdas,
            )
            return None
        if self.candidate is None:
            try:
                self.candidate = try_reconstruct(self.crt, r)
            except NeedMorePrimes as exc:
                logger.debug("need more primes count=%d detail=%s", self.crt.count, exc)
                self.crt = crt_combine(self.crt, r)
                return None
            self.held = [r]
        elif candidate_matches(self.candidate, r):
            self.held.append(r)
            self.confirmations += 1
        else:
            self._reject_candidate(r)
            return None
        if self.confirmations >= self.config.confirm_extra:
            return self._accepted()
        return None

    def feed(self, p: int, outcome: RurModP | BaseException) -> RurCandidate | None:
        self.attempted += 1
        if isinstance(outcome, RurModP):
            return self._success(outcome)
        if isinstance(outcome, IdealIsUnit):
            self._discard(p, DiscardReason.UNIT_IDEAL)
            self.unit_witnesses += 1
            if not self.successes and self.unit_witnesses >= self.config.witness_primes:
                raise EmptyVariety(
                    f"the ideal is {{1}} modulo {self.unit_witnesses} primes"
                )
        elif isinstance(outcome, NotZeroDimensional):
            self._discard(p, DiscardReason.NOT_ZERO_DIMENSIONAL)
            self.positive_dim_witnesses += 1
            if not self.successes and self.positive_dim_witnesses >= self.config.witness_primes:
                raise NotZeroDimensional(str(outcome))
        elif isinstance(outcome, BadPrime):
            self._bad_prime(outcome)
        elif isinstance(outcome, IncompatiblePrime):
            self._discard(p, DiscardReason.INCOMPATIBLE)
        else:
            raise outcome
        return None


@dataclass(slots=True)
class SolverService:
    settings: Settings | None = None
    prime_source: Callable[[Sequence[IntPoly]], Iterator[int]] | None = None
    certifier: CertificationService | None = None

    def __post_init__(self) -> None:
        if self.settings is None:
            self.settings = get_settings()
        if self.certifier is None:
            self.certifier = CertificationService()

    async def solve(
        self, system: PolySystem, config: SolveConfig | None = None
    ) -> tuple[RurCandidate, CertReport]:
        config = config or SolveConfig.from_settings(self.settings)
        candidate = await self.reconstruct(system, config)
        report = await self.certifier.certify(
            system, candidate, config.certify_mode, config.cert_threads,
            executor_kind=config.executor,
        )
        return candidate, report

    async def solve_document(
        self, system: PolySystem, config: SolveConfig | None = None, giac: bool = False
    ) -> RurDocument:
        config = config or SolveConfig.from_settings(self.settings)
        candidate, report = await self.solve(system, config)
        boxes = None
        if config.isolate:
            intervals = isolate_real_roots(candidate.minpoly)
            boxes = solution_boxes(candidate, intervals, config.precision)
        return RurDocument.build(
            system, candidate, report, boxes, precision=config.precision, giac=giac
        )

    async def reconstruct(
        self, system: PolySystem, config: SolveConfig | None = None
    ) -> RurCandidate:
        config = config or SolveConfig.from_settings(self.settings)
        if not system.generators:
            raise UsageError("empty system")
        generators = list(system.generators)
        stream = (self.prime_source or prime_stream)(generators)
        executor = get_executor(config.executor, config.threads)
        options = RurOptions(
            seed=config.seed,
            form_attempts=config.form_attempts,
            form_bound=config.form_bound,
            hankel_method=config.hankel_method,
        )
        acc = _Accumulator(config)

        while True:
            width = config.threads if acc.state.is_set else 1
            if acc.attempted + width > config.max_primes:
                width = config.max_primes - acc.attempted
            if width <= 0:
                raise ReconstructionFailed(f"no stable candidate after {acc.attempted} primes")
            try:
                batch = [next(stream) for _ in range(width)]
            except StopIteration:
                raise ReconstructionFailed("prime source exhausted") from None
            batch_state = acc.state
            results = await asyncio.gather(
                *(
                    run_blocking(executor, _run_prime, generators, p, batch_state, options)
                    for p in batch
                ),
                return_exceptions=True,
            )
            for p, outcome in zip(batch, results):
                if acc.state is not batch_state and batch_state.is_set:
                    logger.debug("dropping stale result p=%d", p)
                    continue
                if isinstance(outcome, BaseException) and not isinstance(outcome, RurError):
                    raise outcome
                done = acc.feed(p, outcome)
                if done is not None:
                    return done
