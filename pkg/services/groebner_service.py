# services/groebner_service.py
import heapq
import time
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import structlog
from sympy.polys.monomials import monomial_deg, monomial_div, monomial_divides, monomial_lcm, monomial_mul

from config import get_settings
from middleware.metrics import GB_RUNS, REDUCTION_STEPS
from models.errors import ConfigurationError, EmptyInputError, LayoutError, ResourceLimitError
from models.ideal import GBReport, IdealPresentation, SPairWitness
from models.ring import Coefficient, CoefficientField, Monomial, Polynomial, PolynomialRing, Term, TermOrder
from services.basis_cache import basis_cache

logger = structlog.get_logger()

Terms = Tuple[Term, ...]


def _mask(m: Monomial) -> int:
    bits = 0
    for v, e in enumerate(m):
        if e:
            bits |= 1 << v
    return bits


def _negated(key: tuple) -> tuple:
    return tuple(-e for e in key)


class _Reducer:
    __slots__ = ("lead", "mask", "inv_lc", "tail")

    def __init__(self, terms: Terms, field_: CoefficientField):
        c, m = terms[0]
        self.lead = m
        self.mask = _mask(m)
        self.inv_lc = field_.inv(c)
        self.tail = terms[1:]


class _StepCounter:
    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.limit is not None and self.steps > self.limit:
            raise ResourceLimitError(
                f"Reduction step limit {self.limit} exceeded; raise it with --limit-steps",
                limit="step_limit", value=self.limit,
            )


def _reduce(terms: Iterable[Term], reducers: Sequence[_Reducer], field_: CoefficientField,
            order: TermOrder, counter: _StepCounter) -> List[Term]:
    """Full multivariate division; the remainder comes out in decreasing order"""
    key = order.key
    live: Dict[Monomial, Coefficient] = {}
    heap = []
    for c, m in terms:
        live[m] = c
        heap.append((_negated(key(m)), m))
    heapq.heapify(heap)

    remainder: List[Term] = []
    while heap:
        _, m = heapq.heappop(heap)
        c = live.pop(m, None)
        if c is None:
            continue
        bits = _mask(m)
        for red in reducers:
            if red.mask & ~bits == 0 and monomial_divides(red.lead, m):
                break
        else:
            remainder.append((c, m))
            continue
        q = monomial_div(m, red.lead)
        factor = field_.mul(c, red.inv_lc)
        for tc, tm in red.tail:
            nm = monomial_mul(tm, q)
            old = live.get(nm)
            if old is None:
                live[nm] = field_.neg(field_.mul(factor, tc))
                heapq.heappush(heap, (_negated(key(nm)), nm))
            else:
                new = field_.sub_mul(old, factor, tc)
                if new == 0:
                    del live[nm]
                else:
                    live[nm] = new
        counter.tick()
    return remainder


def _monic(terms: Sequence[Term], field_: CoefficientField) -> Terms:
    inv = field_.inv(terms[0][0])
    return tuple((field_.mul(c, inv), m) for c, m in terms)


def _s_polynomial(f: Terms, g: Terms, lcm: Monomial, field_: CoefficientField) -> List[Term]:
    """S-polynomial of two monic term lists"""
    qf = monomial_div(lcm, f[0][1])
    qg = monomial_div(lcm, g[0][1])
    acc: Dict[Monomial, Coefficient] = {}
    for c, m in f[1:]:
        acc[monomial_mul(m, qf)] = c
    for c, m in g[1:]:
        nm = monomial_mul(m, qg)
        acc[nm] = field_.sub(acc[nm], c) if nm in acc else field_.neg(c)
    return [(c, m) for m, c in acc.items() if c != 0]


def _same_ring(*rings: PolynomialRing) -> PolynomialRing:
    first = rings[0]
    for other in rings[1:]:
        if other.layout != first.layout:
            raise LayoutError("Ideals live on different layouts")
        if other != first:
            raise ConfigurationError("Ideals disagree on field or term order",
                                     left=str(first.field), right=str(other.field))
    return first


def _run_buchberger(ring: PolynomialRing, generators: Sequence[Polynomial], limit: int,
                    chain_criterion: bool) -> Tuple[Tuple[Polynomial, ...], dict]:
    field_, order = ring.field, ring.order
    key = order.key
    counter = _StepCounter(limit)
    basis: List[Terms] = []
    reducers: List[_Reducer] = []
    pairs: list = []
    pending = set()
    stats = {"pairs": 0, "coprime_skipped": 0, "chain_skipped": 0}

    def add(terms: Terms):
        idx = len(basis)
        lead = terms[0][1]
        for i, other in enumerate(basis):
            lcm = monomial_lcm(other[0][1], lead)
            heapq.heappush(pairs, (monomial_deg(lcm), key(lcm), i, idx))
            pending.add((i, idx))
        basis.append(terms)
        reducers.append(_Reducer(terms, field_))

    for g in generators:
        add(_monic(g.terms, field_))

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        stats["pairs"] += 1
        if reducers[i].mask & reducers[j].mask == 0:
            stats["coprime_skipped"] += 1
            continue
        lcm = monomial_lcm(reducers[i].lead, reducers[j].lead)
        if chain_criterion and any(
            k != i and k != j
            and monomial_divides(reducers[k].lead, lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(basis))
        ):
            stats["chain_skipped"] += 1
            continue
        remainder = _reduce(_s_polynomial(basis[i], basis[j], lcm, field_), reducers, field_, order, counter)
        if remainder:
            add(_monic(remainder, field_))

    # Reduced basis: minimal leading monomials, then tail reduction
    leads = [r.lead for r in reducers]
    keep = [
        idx for idx, lead in enumerate(leads)
        if not any(
            j != idx and monomial_divides(leads[j], lead) and (leads[j] != lead or j < idx)
            for j in range(len(leads))
        )
    ]
    kept = [reducers[idx] for idx in keep]
    reduced = []
    for pos, idx in enumerate(keep):
        others = kept[:pos] + kept[pos + 1:]
        tail = _reduce(basis[idx][1:], others, field_, order, counter)
        reduced.append(Polynomial(ring, (basis[idx][0],) + tuple(tail)))
    reduced.sort(key=lambda p: key(p.leading_monomial), reverse=True)
    stats["steps"] = counter.steps
    return tuple(reduced), stats


class GroebnerService:
    """Buchberger engine and ideal-level operations"""

    @staticmethod
    def normal_form(f: Polynomial, G: Sequence[Polynomial], o: Optional[TermOrder] = None) -> Polynomial:
        order = o or f.order
        ring = f.ring.with_order(order)
        for g in G:
            if g.layout != f.layout:
                raise LayoutError("Divisor lives on a different layout")
            if g.field != f.field:
                raise ConfigurationError("Divisor uses a different coefficient field")
            if g.is_zero():
                raise EmptyInputError("Cannot divide by the zero polynomial")
        reducers = [_Reducer(g.with_order(order).terms, f.field) for g in G]
        counter = _StepCounter(get_settings().step_limit)
        remainder = _reduce(f.with_order(order).terms, reducers, f.field, order, counter)
        REDUCTION_STEPS.inc(counter.steps)
        return Polynomial(ring, tuple(remainder))

    @staticmethod
    def buchberger(ideal: IdealPresentation, step_limit: Optional[int] = None,
                   chain_criterion: Optional[bool] = None) -> IdealPresentation:
        if ideal.certified:
            return ideal
        if not ideal.generators:
            raise EmptyInputError("Buchberger needs at least one generator")

        cache_key = (ideal.ring, ideal.generators)
        cached = basis_cache.get(cache_key)
        if cached is not None:
            return ideal.with_basis(cached)

        limit = step_limit or get_settings().step_limit
        chain = get_settings().chain_criterion if chain_criterion is None else chain_criterion
        start_time = time.time()
        try:
            basis, stats = _run_buchberger(ideal.ring, ideal.generators, limit, chain)
        except ResourceLimitError:
            GB_RUNS.labels(outcome="limit").inc()
            logger.warning("⛔ [GB] Step limit reached", generators=len(ideal.generators), limit=limit)
            raise

        duration_ms = (time.time() - start_time) * 1000
        GB_RUNS.labels(outcome="ok").inc()
        REDUCTION_STEPS.inc(stats["steps"])
        logger.info("🧮 [GB] Basis certified", generators=len(ideal.generators), basis=len(basis),
                    duration_ms=round(duration_ms, 2), **stats)
        basis_cache.set(cache_key, basis)
        return ideal.with_basis(basis)

    @staticmethod
    def is_groebner(gens: Sequence[Polynomial], o: Optional[TermOrder] = None) -> GBReport:
        if not gens:
            raise EmptyInputError("is_groebner needs at least one generator")
        order = o or gens[0].order
        polys = [g.with_order(order) for g in gens]
        if any(p.is_zero() for p in polys):
            raise EmptyInputError("Generators must be nonzero")
        ring = _same_ring(*(p.ring for p in polys))
        field_ = ring.field
        monic = [_monic(p.terms, field_) for p in polys]
        reducers = [_Reducer(t, field_) for t in monic]
        counter = _StepCounter(get_settings().step_limit)

        examined = skipped = 0
        for i in range(len(monic)):
            for j in range(i + 1, len(monic)):
                examined += 1
                if reducers[i].mask & reducers[j].mask == 0:
                    skipped += 1
                    continue
                lcm = monomial_lcm(reducers[i].lead, reducers[j].lead)
                remainder = _reduce(_s_polynomial(monic[i], monic[j], lcm, field_), reducers, field_, order, counter)
                if remainder:
                    REDUCTION_STEPS.inc(counter.steps)
                    witness = SPairWitness(i, j, Polynomial(ring, tuple(remainder)))
                    logger.info("🔎 [GB] S-pair does not reduce to zero", pair=[i, j], pairs=examined)
                    return GBReport(False, examined, counter.steps, skipped, witness)
        REDUCTION_STEPS.inc(counter.steps)
        return GBReport(True, examined, counter.steps, skipped)

    @staticmethod
    def ideal_member(f: Polynomial, ideal: IdealPresentation) -> bool:
        ideal = GroebnerService.buchberger(ideal)
        _same_ring(ideal.ring, f.ring)
        return GroebnerService.normal_form(f, ideal.basis).is_zero()

    @staticmethod
    def ideal_contains(big: IdealPresentation, small: IdealPresentation) -> bool:
        """True iff every generator of `small` lies in `big`"""
        _same_ring(big.ring, small.ring)
        big = GroebnerService.buchberger(big)
        return all(GroebnerService.normal_form(g, big.basis).is_zero() for g in small.generators)

    @staticmethod
    def ideal_equal(first: IdealPresentation, second: IdealPresentation) -> bool:
        return GroebnerService.ideal_contains(first, second) and GroebnerService.ideal_contains(second, first)

    @staticmethod
    def ideal_intersect(ideals: Sequence[IdealPresentation]) -> IdealPresentation:
        if len(ideals) < 2:
            raise EmptyInputError("Intersection needs at least two ideals", count=len(ideals))
        _same_ring(*(i.ring for i in ideals))
        return reduce(_intersect_pair, ideals)

    @staticmethod
    def initial_ideal(ideal: IdealPresentation) -> List[Monomial]:
        """Minimal generators of in(I): the leading monomials of the reduced basis"""
        return GroebnerService.buchberger(ideal).leading_monomials()


def _intersect_pair(first: IdealPresentation, second: IdealPresentation) -> IdealPresentation:
    base = first.ring
    extended = base.eliminating(1)
    t = extended.aux_var(0)
    one_minus_t = extended.one() - t
    gens = [t * g.lift(extended) for g in (first.basis or first.generators)]
    gens += [one_minus_t * g.lift(extended) for g in (second.basis or second.generators)]
    eliminated = GroebnerService.buchberger(IdealPresentation.of(gens, extended))
    kept = tuple(g.project(base) for g in eliminated.basis if g.leading_monomial[-1] == 0)
    logger.info("🔗 [GB] Intersection computed", left=len(first.generators), right=len(second.generators),
                result=len(kept))
    return IdealPresentation(base, kept, kept)
