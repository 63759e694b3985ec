# services/decompose_service.py
import time
from dataclasses import replace
from itertools import combinations, product
from random import Random
from typing import List, Optional, Sequence, Tuple

import structlog

from config import get_settings
from middleware.metrics import VERIFY_DURATION
from models.complex import BlockComponent, BlockStructure, SimplicialComplex
from models.decompose import (Candidate, DecompositionReport, IntervalSequence, PrimeSequence,
                              VerificationResult, sequence_violation)
from models.detideal import GeneratorSet
from models.errors import ArgumentError, ResourceLimitError, StructuralError
from models.ideal import IdealPresentation
from models.ring import PolynomialRing, TermOrder
from services.complex_service import ComplexService
from services.detideal_service import DetIdealService
from services.groebner_service import GroebnerService
from services.workers import fan_out

logger = structlog.get_logger()

MODES = ("auto", "block", "union", "forest", "composite")


def _elapsed_ms(start: float) -> float:
    return round((time.time() - start) * 1000, 2)


def _ring(complex_: SimplicialComplex, ring: Optional[PolynomialRing]) -> PolynomialRing:
    return ring or DetIdealService.ring_for(complex_, get_settings().coefficient_field)


def _structure_candidates(structure: BlockStructure) -> List[PrimeSequence]:
    per_component = [DecomposeService.enumerate_prime_sequences(c, structure.rows) for c in structure.components]
    return [PrimeSequence(tuple(parts)) for parts in product(*per_component)]


def _is_full_skeleton(complex_: SimplicialComplex) -> bool:
    m = complex_.rows
    return set(complex_.facets) == set(combinations(complex_.vertices, m))


class DecomposeService:
    """Prime sequences, candidate primes and their certification"""

    @staticmethod
    def enumerate_prime_sequences(component: BlockComponent, rows: int) -> List[IntervalSequence]:
        m, last = rows, component.size
        found: List[IntervalSequence] = []

        def extend(seq: List[Tuple[int, int]]):
            a_prev, b_prev = seq[-1]
            if b_prev == last:
                if sequence_violation(seq, component, m) is None:
                    found.append(tuple(seq))
                return
            for a in range(max(a_prev + 1, b_prev - (m - 2)), b_prev + 1):
                for b in range(b_prev + 1, last + 1):
                    extend(seq + [(a, b)])

        for b in range(1, last + 1):
            extend([(1, b)])
        found.sort(key=lambda s: (len(s), s))
        return found

    @staticmethod
    def decompose_block_adjacent(complex_: SimplicialComplex,
                                 ring: Optional[PolynomialRing] = None) -> DecompositionReport:
        structure = ComplexService.block_structure(complex_)
        if len(structure.components) != 1:
            raise StructuralError("Complex is not block adjacent: it splits into several components",
                                  components=len(structure.components))
        return DecomposeService._from_structures("block", complex_, [structure], _ring(complex_, ring))

    @staticmethod
    def decompose_union(complex_: SimplicialComplex, ring: Optional[PolynomialRing] = None) -> DecompositionReport:
        structure = ComplexService.block_structure(complex_)
        return DecomposeService._from_structures("union", complex_, [structure], _ring(complex_, ring))

    @staticmethod
    def decompose_forest(complex_: SimplicialComplex, ring: Optional[PolynomialRing] = None,
                         composite: bool = False, requested_mode: Optional[str] = None) -> DecompositionReport:
        ring = _ring(complex_, ring)
        groups = ComplexService.forest_components(complex_)
        graph = ComplexService.intersection_graph(groups)
        conditions = ComplexService.check_forest_conditions(complex_, groups)
        notes = []
        mode = "composite" if composite else "forest"
        requested = requested_mode or mode
        if not composite and not graph.is_forest:
            mode = "composite"
            notes.append("intersection graph is not a forest; routed to experimental composite mode")
            log = logger.warning if requested == "forest" else logger.info
            log("🌵 [DECOMPOSE] Intersection graph has cycles; using composite mode",
                requested_mode=requested, edges=[list(e) for e in graph.edges])
        if mode == "forest" and not conditions.passed:
            failed = [name for name, ok in (("a", conditions.cond_a), ("b", conditions.cond_b),
                                            ("c", conditions.cond_c)) if not ok]
            raise StructuralError(f"Forest condition(s) {', '.join(failed)} fail",
                                  conditions=conditions.to_dict())
        if mode == "composite":
            notes.append("composite candidates are experimental; verify them before use")

        structures = []
        for idx, group in enumerate(groups, start=1):
            try:
                structures.append(ComplexService.block_structure(group))
            except StructuralError as e:
                if mode == "forest":
                    raise StructuralError(f"Component {idx} is not a union of block adjacent complexes: {e.message}",
                                          component=idx, **e.details)
                structures.append(group)
                notes.append(f"component {idx} has no block structure ({e.message}); its facet ideal is the only factor")
        return DecomposeService._from_structures(mode, complex_, structures, ring,
                                                 graph=graph.to_dict(), conditions=conditions.to_dict(),
                                                 notes=notes, requested_mode=requested)

    @staticmethod
    def decompose(complex_: SimplicialComplex, mode: str = "auto",
                  ring: Optional[PolynomialRing] = None) -> DecompositionReport:
        if mode not in MODES:
            raise ArgumentError(f"Unknown mode {mode!r}", modes=list(MODES))
        if mode == "block":
            return DecomposeService.decompose_block_adjacent(complex_, ring)
        if mode == "union":
            return DecomposeService.decompose_union(complex_, ring)
        if mode in ("forest", "composite"):
            return DecomposeService.decompose_forest(complex_, ring, composite=mode == "composite")
        try:
            structure = ComplexService.block_structure(complex_)
        except StructuralError:
            return DecomposeService.decompose_forest(complex_, ring, requested_mode="auto")
        chosen = "block" if len(structure.components) == 1 else "union"
        return DecomposeService._from_structures(chosen, complex_, [structure], _ring(complex_, ring),
                                                 requested_mode="auto")

    @staticmethod
    def _from_structures(mode: str, complex_: SimplicialComplex, structures: list, ring: PolynomialRing,
                         graph: Optional[dict] = None, conditions: Optional[dict] = None,
                         notes: Sequence[str] = (), requested_mode: Optional[str] = None) -> DecompositionReport:
        """Cartesian product of per-structure candidate lists; raw complexes contribute their facet ideal"""
        start_time = time.time()
        components: List[BlockComponent] = []
        groups = []
        factors = []
        for structure in structures:
            if isinstance(structure, BlockStructure):
                first = len(components) + 1
                components.extend(structure.components)
                groups.append(tuple(range(first, len(components) + 1)))
                factors.append([
                    (seq, DetIdealService.prime_sequence_ideal(seq, structure, ring))
                    for seq in _structure_candidates(structure)
                ])
            else:
                groups.append(())
                factors.append([(None, DetIdealService.facet_ideal(structure, ring))])

        candidates = []
        for index, choice in enumerate(product(*factors)):
            parts = tuple(p for seq, _ in choice if seq is not None for p in seq.parts)
            generators = GeneratorSet.empty(ring).union(*(g for _, g in choice))
            candidates.append(Candidate(index, generators, PrimeSequence(parts)))

        logger.info("🧩 [DECOMPOSE] Candidates assembled", mode=mode, components=len(components),
                    candidates=len(candidates), duration_ms=_elapsed_ms(start_time))
        return DecompositionReport(
            mode=mode,
            rows=complex_.rows,
            components=tuple(components),
            candidates=tuple(candidates),
            graph=graph,
            forest_conditions=conditions,
            groups=tuple(groups),
            notes=tuple(notes),
            requested_mode=requested_mode or mode,
            timings_ms={"assemble": _elapsed_ms(start_time)},
        )

    @staticmethod
    def with_verification(report: DecompositionReport, complex_: SimplicialComplex,
                          ring: Optional[PolynomialRing] = None,
                          extra: Sequence[GeneratorSet] = ()) -> DecompositionReport:
        """Append extra candidates and certify the whole list against J_Delta"""
        ring = _ring(complex_, ring)
        candidates = list(report.candidates)
        for generators in extra:
            candidates.append(Candidate(len(candidates), generators, origin="extra"))
        J = DetIdealService.facet_ideal(complex_, ring).ideal()
        try:
            result = DecomposeService.verify_decomposition(J, [c.generators for c in candidates])
        except ResourceLimitError as e:
            partial = replace(report, candidates=tuple(candidates)).to_dict()
            partial["verification"] = e.partial
            raise ResourceLimitError(e.message, e.limit, e.value, partial=partial) from e
        return replace(report, candidates=tuple(candidates), verification=result)

    @staticmethod
    def verify_decomposition(J: IdealPresentation, primes: Sequence[GeneratorSet]) -> VerificationResult:
        if not primes:
            raise ArgumentError("Verification needs at least one candidate prime")
        ideals = [p.ideal() for p in primes]
        timings = {}
        stage = "containment"
        containment: list = []
        matrix: list = []
        start_time = time.time()
        try:
            containment = fan_out(GroebnerService.ideal_contains, [(P, J) for P in ideals])
            timings["containment"] = _elapsed_ms(start_time)

            stage = "minimality"
            tick = time.time()
            pairs = [(i, j) for i in range(len(ideals)) for j in range(len(ideals)) if i != j]
            # P_i inside P_j
            flags = fan_out(GroebnerService.ideal_contains, [(ideals[j], ideals[i]) for i, j in pairs])
            matrix = [[i == j for j in range(len(ideals))] for i in range(len(ideals))]
            for (i, j), flag in zip(pairs, flags):
                matrix[i][j] = flag
            pruned = tuple(
                j for j in range(len(ideals))
                if any(containment[i] and matrix[i][j] and (not matrix[j][i] or i < j)
                       for i in range(len(ideals)) if i != j)
            )
            timings["minimality"] = _elapsed_ms(tick)

            stage = "intersection"
            tick = time.time()
            survivors = [GroebnerService.buchberger(ideals[i]) for i in range(len(ideals)) if i not in pruned]
            survivors.sort(key=lambda I: len(I.basis))
            meet = survivors[0] if len(survivors) == 1 else GroebnerService.ideal_intersect(survivors)
            equal = GroebnerService.ideal_equal(meet, J)
            timings["intersection"] = _elapsed_ms(tick)
        except ResourceLimitError as e:
            partial = {"stage": stage, "containment": list(containment),
                       "minimality_matrix": [list(r) for r in matrix], "timings_ms": timings}
            logger.warning("⛔ [VERIFY] Resource limit hit", stage=stage, limit=e.limit)
            raise ResourceLimitError(e.message, e.limit, e.value, partial=partial) from e

        timings["total"] = _elapsed_ms(start_time)
        result = VerificationResult(
            containment=tuple(containment),
            containment_matrix=tuple(tuple(r) for r in matrix),
            pruned=pruned,
            intersection_equal=equal,
            timings_ms=timings,
        )
        verdict = "pass" if result.verdict else "fail"
        VERIFY_DURATION.labels(verdict=verdict).observe(timings["total"] / 1000)
        logger.info("✅ [VERIFY] Decomposition checked" if result.verdict else "❌ [VERIFY] Decomposition rejected",
                    candidates=len(primes), pruned=list(pruned), intersection_equal=equal, **timings)
        return result

    @staticmethod
    def report_prime_by_theorem(complex_: SimplicialComplex) -> dict:
        decomposition = ComplexService.clique_decomposition(complex_)
        cliques = list(decomposition)
        graph = ComplexService.intersection_graph(cliques)
        vertex_sets = [set(c.vertices) for c in cliques]
        hypotheses = {
            "triple_intersections_empty": all(not (a & b & c) for a, b, c in combinations(vertex_sets, 3)),
            "pairwise_intersections_at_most_one": all(len(a & b) <= 1 for a, b in combinations(vertex_sets, 2)),
            "clique_graph_is_tree": graph.is_forest and graph.is_connected,
            "facet_dimensions_above_one": all(len(F) > 2 for F in complex_.facets),
        }
        if len(cliques) == 1:
            prime, theorem = True, "a single clique gives a classical determinantal ideal, which is prime"
        elif all(hypotheses.values()):
            prime, theorem = True, "cliques meet in at most one vertex along a tree: the facet ideal is prime"
        else:
            prime, theorem = None, "not covered by theorem"
        return {
            "prime": prime,
            "covered": prime is not None,
            "theorem": theorem,
            "hypotheses": hypotheses,
            "cliques": decomposition.to_dict(),
            "clique_graph": graph.to_dict(),
            "closed": ComplexService.is_closed(complex_, decomposition).to_dict(),
        }

    @staticmethod
    def universal_gb_probe(complex_: SimplicialComplex, trials: Optional[int] = None, seed: Optional[int] = None,
                           graded: bool = False, ring: Optional[PolynomialRing] = None) -> dict:
        current = get_settings()
        trials = current.trials if trials is None else trials
        seed = current.seed if seed is None else seed
        if trials < 0:
            raise ArgumentError("Trial count must be non-negative", trials=trials)
        ring = _ring(complex_, ring)
        generators = DetIdealService.facet_ideal(complex_, ring)
        rng = Random(seed)
        outcome = {
            "trials": trials,
            "seed": seed,
            "graded": graded,
            "pure": complex_.is_pure,
            "exploratory": not complex_.is_pure,
            "full_skeleton": complex_.is_pure and _is_full_skeleton(complex_),
            "generators": len(generators),
            "no_trials": trials == 0,
            "passed": 0,
            "all_pass": True,
            "failing_order": None,
        }
        if not complex_.is_pure:
            facet_sets = [set(F) for F in complex_.facets]
            outcome["disjoint_simplices"] = all(not (a & b) for a, b in combinations(facet_sets, 2))

        for trial in range(trials):
            order = TermOrder.random(ring.layout, rng, graded=graded)
            report = GroebnerService.is_groebner(generators.polynomials, order)
            if not report.is_gb:
                outcome["all_pass"] = False
                outcome["failing_order"] = {"trial": trial, "order": order.describe(ring.layout),
                                            "graded": graded, "report": report.to_dict()}
                logger.info("🎲 [DECOMPOSE] Order without Groebner property", trial=trial, seed=seed)
                break
            outcome["passed"] += 1
        return outcome
