# services/resolution_service.py
import time
from functools import reduce
from itertools import combinations
from math import comb, prod
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from sympy import Poly, Symbol
from sympy.polys.monomials import monomial_deg, monomial_divides, monomial_lcm, monomial_ldiv

from config import get_settings
from models.complex import Clique, SimplicialComplex
from models.errors import (ArgumentError, LinearQuotientsError, ResourceLimitError, StructuralError,
                           UnsupportedShapeError)
from models.resolution import GradedBettiTable, HilbertSummary, InvariantCheck
from models.ring import CoefficientField, Monomial, PolynomialRing
from services.complex_service import ComplexService
from services.detideal_service import DetIdealService
from services.groebner_service import GroebnerService
from services.workers import fan_out

logger = structlog.get_logger()

T = Symbol("t")


def minimal_generators(monomials: Iterable[Monomial]) -> List[Monomial]:
    kept: List[Monomial] = []
    for m in sorted(set(monomials), key=lambda u: (monomial_deg(u), u)):
        if not any(monomial_divides(k, m) for k in kept):
            kept.append(m)
    return kept


def _support(m: Monomial) -> List[List[int]]:
    return [[i, e] for i, e in enumerate(m) if e]


def _rank(matrix: np.ndarray, field_: CoefficientField) -> int:
    """Row reduction over the coefficient field on an object array"""
    a = matrix.copy()
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, c] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        inv = field_.inv(a[rank, c])
        a[rank] = [field_.mul(inv, v) for v in a[rank]]
        for r in range(rows):
            if r != rank and a[r, c] != 0:
                factor = a[r, c]
                a[r] = [field_.sub_mul(x, factor, y) for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def _strand_homology(by_size: Dict[int, List[Tuple[int, ...]]], field_: CoefficientField) -> Dict[int, int]:
    """Homology ranks of one multidegree strand of the Taylor complex, by subset size"""
    index = {k: {S: i for i, S in enumerate(subsets)} for k, subsets in by_size.items()}
    one, minus_one = field_.element(1), field_.element(-1)
    ranks = {}
    for k, subsets in by_size.items():
        target = index.get(k - 1)
        if k == 1 or not target:
            ranks[k] = 0
            continue
        d = np.full((len(target), len(subsets)), field_.element(0), dtype=object)
        for col, S in enumerate(subsets):
            for r in range(k):
                face = S[:r] + S[r + 1:]
                row = target.get(face)
                if row is not None:
                    d[row, col] = one if r % 2 == 0 else minus_one
        ranks[k] = _rank(d, field_)
    return {k: len(subsets) - ranks[k] - ranks.get(k + 1, 0) for k, subsets in by_size.items()}


def _pairwise_coprime(gens: Sequence[Monomial]) -> bool:
    seen = set()
    for g in gens:
        support = {i for i, e in enumerate(g) if e}
        if seen & support:
            return False
        seen |= support
    return True


def _coefficients(p: Poly) -> Tuple[int, ...]:
    return tuple(int(c) for c in reversed(p.all_coeffs()))


class ResolutionService:
    """Betti tables and Hilbert series of determinantal and monomial ideals"""

    @staticmethod
    def en_betti(m: int, n: int) -> GradedBettiTable:
        if m < 1 or m > n:
            raise ArgumentError("Eagon-Northcott numbers need 1 <= m <= n", m=m, n=n)
        return GradedBettiTable.from_ideal_betti(
            {(i, m + i): comb(n, m + i) * comb(m + i - 1, i) for i in range(n - m + 1)})

    @staticmethod
    def linear_quotients(gens: Sequence[Monomial]) -> List[FrozenSet[int]]:
        """Variable sets of (m_1, ..., m_{i-1}) : m_i in the given order"""
        gens = [tuple(g) for g in gens]
        if len(set(gens)) != len(gens):
            raise ArgumentError("Generators must be distinct")
        sets = []
        for i, u in enumerate(gens):
            colon = minimal_generators(monomial_ldiv(monomial_lcm(g, u), u) for g in gens[:i])
            if any(monomial_deg(q) != 1 for q in colon):
                raise LinearQuotientsError(f"Colon step {i} is not generated by variables", index=i,
                                           colon_generators=[_support(q) for q in colon])
            sets.append(frozenset(q.index(1) for q in colon))
        return sets

    @staticmethod
    def betti_from_linear_quotients(sets: Sequence[FrozenSet[int]], degrees: Sequence[int]) -> GradedBettiTable:
        betti: Dict[Tuple[int, int], int] = {}
        for s, deg in zip(sets, degrees):
            for i in range(len(s) + 1):
                betti[(i, deg + i)] = betti.get((i, deg + i), 0) + comb(len(s), i)
        return GradedBettiTable.from_ideal_betti(betti)

    @staticmethod
    def betti_convolution(tables: Sequence[GradedBettiTable]) -> GradedBettiTable:
        if not tables:
            raise ArgumentError("Convolution needs at least one table")

        def tensor(a: GradedBettiTable, b: GradedBettiTable) -> GradedBettiTable:
            out: Dict[Tuple[int, int], int] = {}
            for (h1, d1), v1 in a.entries.items():
                for (h2, d2), v2 in b.entries.items():
                    key = (h1 + h2, d1 + d2)
                    out[key] = out.get(key, 0) + v1 * v2
            return GradedBettiTable(out)

        return reduce(tensor, tables)

    @staticmethod
    def clique_table(clique: Clique, rows: int) -> GradedBettiTable:
        """Eagon-Northcott table for maximal-minor cliques and single facets"""
        size, n = clique.facet_size, len(clique.vertices)
        if size == rows:
            return ResolutionService.en_betti(rows, n)
        if n == size:
            return ResolutionService.en_betti(size, rows)
        raise UnsupportedShapeError(
            f"Clique on {n} vertices with facets of size {size} < m={rows} has no Eagon-Northcott resolution",
            vertices=list(clique.vertices), dim=clique.dim)

    @staticmethod
    def complex_convolution(complex_: SimplicialComplex) -> GradedBettiTable:
        tables = [ResolutionService.clique_table(c, complex_.rows)
                  for c in ComplexService.clique_decomposition(complex_)]
        return ResolutionService.betti_convolution(tables)

    @staticmethod
    def taylor_strand_betti(monomials: Sequence[Monomial], field_: Optional[CoefficientField] = None,
                            cap: Optional[int] = None) -> GradedBettiTable:
        field_ = field_ or get_settings().coefficient_field
        cap = cap or get_settings().taylor_cap
        gens = minimal_generators(monomials)
        if len(gens) > cap:
            raise ResourceLimitError(f"{len(gens)} generators exceed the Taylor cap {cap}",
                                     limit="taylor_cap", value=cap, generators=len(gens))
        start_time = time.time()
        strands: Dict[Monomial, Dict[int, List[Tuple[int, ...]]]] = {}
        for size in range(1, len(gens) + 1):
            for S in combinations(range(len(gens)), size):
                alpha = reduce(monomial_lcm, (gens[i] for i in S))
                strands.setdefault(alpha, {}).setdefault(size, []).append(S)

        alphas = sorted(strands)
        homology = fan_out(_strand_homology, [(strands[a], field_) for a in alphas])
        entries = {(0, 0): 1}
        multigraded = []
        for alpha, ranks in zip(alphas, homology):
            for h, r in sorted(ranks.items()):
                if r:
                    d = monomial_deg(alpha)
                    entries[(h, d)] = entries.get((h, d), 0) + r
                    multigraded.append((h, alpha, r))
        logger.info("📐 [BETTI] Taylor strands reduced", generators=len(gens), strands=len(alphas),
                    duration_ms=round((time.time() - start_time) * 1000, 2))
        return GradedBettiTable(entries, tuple(multigraded))

    @staticmethod
    def hilbert_series(monomials: Sequence[Monomial], nvars: int) -> HilbertSummary:
        memo: Dict[FrozenSet[Monomial], Poly] = {}

        def numerator(gens: FrozenSet[Monomial]) -> Poly:
            if gens in memo:
                return memo[gens]
            if not gens:
                result = Poly(1, T)
            elif _pairwise_coprime(list(gens)):
                result = prod((Poly(1 - T ** monomial_deg(g), T) for g in gens), start=Poly(1, T))
            else:
                counts = [sum(1 for g in gens if g[i]) for i in range(nvars)]
                x = max(range(nvars), key=lambda i: (counts[i], -i))
                unit_x = tuple(1 if i == x else 0 for i in range(nvars))
                plus = minimal_generators([g for g in gens if not g[x]] + [unit_x])
                colon = minimal_generators(g[:x] + (max(g[x] - 1, 0),) + g[x + 1:] for g in gens)
                result = numerator(frozenset(plus)) + Poly(T, T) * numerator(frozenset(colon))
            memo[gens] = result
            return result

        gens = minimal_generators(tuple(m) for m in monomials)
        if any(len(g) != nvars for g in gens):
            raise ArgumentError("Monomials do not match the variable count", nvars=nvars)
        if any(monomial_deg(g) == 0 for g in gens):
            raise ArgumentError("The unit ideal has no Hilbert series")
        q = numerator(frozenset(gens))
        dimension = nvars
        one_minus_t = Poly(1 - T, T)
        while dimension > 0 and q.eval(1) == 0:
            q = q.quo(one_minus_t)
            dimension -= 1
        logger.debug("📈 [HILBERT] Series computed", generators=len(gens), dim=dimension, states=len(memo))
        return HilbertSummary(_coefficients(q), dimension, nvars)

    @staticmethod
    def binomial_identity_check(n_max: int, a_max: int) -> dict:
        if n_max < 0 or a_max < 0:
            raise ArgumentError("Bounds must be non-negative", n_max=n_max, a_max=a_max)
        checked = 0
        for n in range(n_max + 1):
            for i in range(n + 1):
                for a in range(a_max + 1):
                    lhs = sum(comb(k, i) * comb(k + a, a) for k in range(n + 1))
                    rhs = comb(n + a + 1, i + a + 1) * comb(i + a, i)
                    checked += 1
                    if lhs != rhs:
                        return {"holds": False, "checked": checked,
                                "counterexample": {"n": n, "i": i, "a": a, "lhs": lhs, "rhs": rhs}}
        return {"holds": True, "checked": checked, "counterexample": None}

    @staticmethod
    def invariants_report(complex_: SimplicialComplex, ring: Optional[PolynomialRing] = None) -> dict:
        decomposition = ComplexService.clique_decomposition(complex_)
        closedness = ComplexService.is_closed(complex_, decomposition)
        if not closedness.closed:
            raise StructuralError("Invariant formulas need a closed complex", witness=closedness.witness.to_dict())
        ring = ring or DetIdealService.ring_for(complex_, get_settings().coefficient_field)
        N = ring.layout.matrix_vars

        initial = GroebnerService.initial_ideal(DetIdealService.facet_ideal(complex_, ring).ideal())
        total = ResolutionService.hilbert_series(initial, N)

        per_clique = []
        numerators = []
        for clique in decomposition:
            sub = SimplicialComplex.from_facets(complex_.rows, clique.facets())
            sub_initial = GroebnerService.initial_ideal(DetIdealService.facet_ideal(sub, ring).ideal())
            summary = ResolutionService.hilbert_series(sub_initial, N)
            n_l, t_l = len(clique.vertices), clique.dim
            numerators.append(Poly(list(reversed(summary.numerator)), T))
            per_clique.append({
                "vertices": list(clique.vertices),
                "dim": t_l,
                "height_formula": n_l - t_l,
                "height": summary.height,
                "e_formula": comb(n_l, t_l),
                "e": summary.multiplicity,
                "numerator": list(summary.numerator),
                "agree": summary.height == n_l - t_l and summary.multiplicity == comb(n_l, t_l),
            })

        checks = [
            InvariantCheck("height", sum(c["height_formula"] for c in per_clique), total.height),
            InvariantCheck("height_additive", sum(c["height"] for c in per_clique), total.height),
            InvariantCheck("hilbert_product", list(_coefficients(prod(numerators, start=Poly(1, T)))),
                           list(total.numerator)),
            InvariantCheck("multiplicity", prod(c["e_formula"] for c in per_clique), total.multiplicity),
        ]
        try:
            formula = ResolutionService.complex_convolution(complex_).to_json()
            oracle = ResolutionService.taylor_strand_betti(initial, ring.field).to_json()
            checks.append(InvariantCheck("betti", formula, oracle))
        except (UnsupportedShapeError, ResourceLimitError) as e:
            checks.append(InvariantCheck("betti", None, None, error=e.message))

        disagreements = [c.name for c in checks if c.agree is False]
        if disagreements:
            logger.info("⚖️ [HILBERT] Formula disagreements", items=disagreements)
        return {
            "hilbert": total.to_dict(),
            "cliques": per_clique,
            "checks": [c.to_dict() for c in checks],
            "disagreements": disagreements,
        }
