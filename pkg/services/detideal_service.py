# services/detideal_service.py
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from models.complex import BlockComponent, BlockStructure, Interval, SimplicialComplex
from models.decompose import PrimeSequence, sequence_violation
from models.detideal import GeneratorSet, MinorSpec, Provenance, build_generator_set
from models.errors import ArgumentError, SequenceValidationError, StructuralError
from models.ring import CoefficientField, Polynomial, PolynomialRing, TermOrder, VariableLayout
from services.complex_service import ComplexService

logger = structlog.get_logger()


class MinorExpander:
    """Laplace expansion along the first row; subminors are shared within one expander"""

    def __init__(self, ring: PolynomialRing):
        self.ring = ring
        self._memo: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Polynomial] = {}

    def expand(self, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Polynomial:
        key = (rows, cols)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if len(rows) == 1:
            result = self.ring.var(rows[0], cols[0])
        else:
            result = self.ring.zero()
            head, rest = rows[0], rows[1:]
            for idx, c in enumerate(cols):
                term = self.ring.var(head, c) * self.expand(rest, cols[:idx] + cols[idx + 1:])
                result = result + term if idx % 2 == 0 else result - term
        self._memo[key] = result
        return result

    def __call__(self, spec: MinorSpec) -> Polynomial:
        return self.expand(spec.rows, spec.cols)


def _check_rows(ring: PolynomialRing, rows: Sequence[int]) -> Tuple[int, ...]:
    rows = tuple(sorted(set(rows)))
    if not rows or rows[0] < 1 or rows[-1] > ring.layout.rows:
        raise ArgumentError(f"Row set must lie in 1..{ring.layout.rows}", rows=list(rows))
    return rows


def maximal_minors(expander: MinorExpander, rows: Sequence[int], cols: Sequence[int],
                   provenance: Provenance) -> List[Tuple[MinorSpec, Polynomial, Provenance]]:
    rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
    k = min(len(rows), len(cols))
    items = []
    for r in combinations(rows, k):
        for c in combinations(cols, k):
            spec = MinorSpec(r, c)
            items.append((spec, expander(spec), provenance))
    return items


def gb1_condition(S: Sequence[int], B: Sequence[int], S2: Sequence[int], D: Sequence[int]) -> Optional[str]:
    """Which sufficient condition for F and G to be a joint Groebner basis holds: "i", "ii" or None"""
    S, B, S2, D = set(S), set(B), set(S2), set(D)
    if S <= S2 and len(B) <= len(S):
        return "i"
    if S2 <= S and D < B:
        return "ii"
    return None


class DetIdealService:
    """Minors and the determinantal ideals built from them"""

    @staticmethod
    def ring_for(complex_: SimplicialComplex, coefficient_field: Optional[CoefficientField] = None,
                 order: Optional[TermOrder] = None) -> PolynomialRing:
        """m x n generic matrix ring with n the largest vertex label"""
        layout = VariableLayout(complex_.rows, complex_.max_label)
        return PolynomialRing(layout, coefficient_field or CoefficientField(), order)

    @staticmethod
    def minor(spec: MinorSpec, ring: PolynomialRing) -> Polynomial:
        return MinorExpander(ring)(spec)

    @staticmethod
    def facet_ideal(complex_: SimplicialComplex, ring: PolynomialRing,
                    rows: Optional[Sequence[int]] = None) -> GeneratorSet:
        S = _check_rows(ring, rows) if rows is not None else tuple(range(1, ring.layout.rows + 1))
        expander = MinorExpander(ring)
        items = []
        for F in complex_.facets:
            if len(F) > len(S):
                raise StructuralError(f"Facet of size {len(F)} exceeds the {len(S)} available rows",
                                      facet=list(F), rows=list(S))
            for r in combinations(S, len(F)):
                spec = MinorSpec(r, F)
                items.append((spec, expander(spec), Provenance.FACET))
        return build_generator_set(ring, items)

    @staticmethod
    def component_prime_ideal(intervals: Sequence[Interval], component: BlockComponent,
                              ring: PolynomialRing, expander: Optional[MinorExpander] = None) -> GeneratorSet:
        m = ring.layout.rows
        violation = sequence_violation(intervals, component, m)
        if violation:
            condition, message = violation
            raise SequenceValidationError(message, condition, intervals=[list(iv) for iv in intervals],
                                          vertices=list(component.vertices))
        expander = expander or MinorExpander(ring)
        everyrow = tuple(range(1, m + 1))
        items = []
        for interval in intervals:
            items += maximal_minors(expander, everyrow, component.labels(interval), Provenance.INTERVAL)
        for (_, b), (a, _) in zip(intervals, intervals[1:]):
            items += maximal_minors(expander, everyrow, component.labels((a, b)), Provenance.OVERLAP)
        return build_generator_set(ring, items)

    @staticmethod
    def prime_sequence_ideal(sequence: PrimeSequence, structure: BlockStructure,
                             ring: PolynomialRing) -> GeneratorSet:
        if len(sequence.parts) != len(structure.components):
            raise StructuralError("Sequence needs one interval list per component",
                                  parts=len(sequence.parts), components=len(structure.components))
        expander = MinorExpander(ring)
        parts = [DetIdealService.component_prime_ideal(intervals, component, ring, expander)
                 for intervals, component in zip(sequence.parts, structure.components)]
        return GeneratorSet.empty(ring).union(*parts)

    @staticmethod
    def mixed_minor_ideal(S: Sequence[int], B: Sequence[int], S2: Sequence[int], D: Sequence[int],
                          ring: PolynomialRing) -> GeneratorSet:
        S, S2 = _check_rows(ring, S), _check_rows(ring, S2)
        B, D = tuple(sorted(set(B))), tuple(sorted(set(D)))
        if not B or not D:
            raise ArgumentError("Column sets must be nonempty", B=list(B), D=list(D))
        if not len(D) < len(B):
            raise ArgumentError("Need |D| < |B|", B=list(B), D=list(D))
        if len(D) > len(S2):
            raise ArgumentError("Need |D| <= |S'|", S2=list(S2), D=list(D))
        expander = MinorExpander(ring)
        first = build_generator_set(ring, maximal_minors(expander, S, B, Provenance.FACET))
        second = build_generator_set(ring, maximal_minors(expander, S2, D, Provenance.FACET))
        return first.union(second)

    @staticmethod
    def augmented_two_clique_ideal(complex_: SimplicialComplex, ring: PolynomialRing) -> GeneratorSet:
        decomposition = ComplexService.clique_decomposition(complex_)
        if len(decomposition) != 2:
            raise StructuralError("Augmented ideal needs exactly two cliques", cliques=len(decomposition))
        closedness = ComplexService.is_closed(complex_, decomposition)
        if not closedness.closed:
            raise StructuralError("Augmented ideal needs a closed complex",
                                  witness=closedness.witness.to_dict())
        first, second = decomposition.cliques
        shared = first.intersection_facets(second)
        parts = [DetIdealService.facet_ideal(complex_, ring)]
        if shared:
            parts.append(DetIdealService.facet_ideal(
                SimplicialComplex.from_facets(complex_.rows, shared), ring))
        logger.debug("➕ [DETIDEAL] Augmented ideal", shared_facets=len(shared))
        return parts[0].union(*parts[1:])

    @staticmethod
    def leading_terms_coprime(first: GeneratorSet, second: GeneratorSet) -> bool:
        """No variable occurs in a leading monomial of both families"""
        used = set()
        for p in first.polynomials:
            used |= {i for i, e in enumerate(p.leading_monomial) if e}
        return all(not any(p.leading_monomial[i] for i in used) for p in second.polynomials)

