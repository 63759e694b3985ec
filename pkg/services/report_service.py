# services/report_service.py
import re
import time
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import structlog
from pydantic import ValidationError

from config import Settings, get_settings, using
from models.complex import SimplicialComplex
from models.detideal import GeneratorSet, MinorSpec, Provenance, build_generator_set
from models.documents import ComplexDocument, OrderSpec, parse_order
from models.errors import (ArgumentError, ConfigurationError, LinearQuotientsError,
                           ResourceLimitError, StructuralError, UnsupportedShapeError)
from models.resolution import GradedBettiTable
from models.ring import PolynomialRing
from services.complex_service import ComplexService
from services.decompose_service import DecomposeService
from services.detideal_service import DetIdealService, MinorExpander
from services.groebner_service import GroebnerService
from services.resolution_service import ResolutionService

logger = structlog.get_logger()

BETTI_METHODS = ("formula", "linquot", "taylor", "convolution")
_BRACKETS = re.compile(r"\[[^\]]*\]")


@dataclass(frozen=True)
class Invocation:
    """One document with its effective settings and ring"""

    document: ComplexDocument
    settings: Settings
    complex_: SimplicialComplex
    ring: PolynomialRing


def prepare(document: ComplexDocument, field: Optional[str] = None, order: Optional[OrderSpec] = None,
            limit_steps: Optional[int] = None, limit_perm: Optional[int] = None, seed: Optional[int] = None,
            trials: Optional[int] = None, taylor_cap: Optional[int] = None) -> Invocation:
    """Document options first, explicit arguments on top"""
    try:
        effective = get_settings().override(**document.settings_overrides()).override(
            field=field, step_limit=limit_steps, perm_limit=limit_perm, seed=seed, trials=trials,
            taylor_cap=taylor_cap)
    except ValidationError as e:
        raise ConfigurationError("Invalid option values",
                                 problems=[{"loc": [str(p) for p in err["loc"]], "msg": err["msg"]}
                                           for err in e.errors()])
    complex_ = document.to_complex()
    ring = DetIdealService.ring_for(complex_, effective.coefficient_field)
    term_order = parse_order(order if order is not None else document.options.order, ring.layout)
    if term_order is not None:
        ring = ring.with_order(term_order)
    return Invocation(document, effective, complex_, ring)


def parse_candidate(text: str, ring: PolynomialRing) -> GeneratorSet:
    """Bracket minors such as "[12|56],[13|56],[1|6]" as one generator set"""
    brackets = _BRACKETS.findall(text)
    if not brackets:
        raise ArgumentError("Candidate lists no bracket minors", candidate=text)
    expander = MinorExpander(ring)
    items = []
    for bracket in brackets:
        spec = MinorSpec.parse(bracket)
        items.append((spec, expander(spec), Provenance.MIXED))
    return build_generator_set(ring, items)


class ReportService:
    """JSON reports shared by the command line and the HTTP routers"""

    @staticmethod
    def analyze(inv: Invocation) -> dict:
        with using(inv.settings):
            start_time = time.time()
            complex_ = inv.complex_
            decomposition = ComplexService.clique_decomposition(complex_)
            closedness = ComplexService.is_closed(complex_, decomposition)
            report = {
                "complex": {**complex_.to_dict(), "vertices": list(complex_.vertices), "pure": complex_.is_pure},
                "cliques": decomposition.to_dict(),
                "clique_count": len(decomposition),
                "closed": closedness.closed,
                "witness": closedness.witness.to_dict() if closedness.witness else None,
                "closed_labeling": None,
            }
            if not closedness.closed:
                try:
                    mapping = ComplexService.find_closed_labeling(complex_)
                    report["closed_labeling"] = {
                        "found": mapping is not None,
                        "mapping": {str(v): w for v, w in mapping.items()} if mapping else None,
                    }
                except ResourceLimitError as e:
                    report["closed_labeling"] = {"found": None, "skipped": e.message}

            report["clique_graph"] = ComplexService.intersection_graph(list(decomposition)).to_dict()
            try:
                report["block_structure"] = ComplexService.block_structure(complex_).to_dict()
            except StructuralError as e:
                report["block_structure"] = {"error": e.message, **e.details}

            groups = ComplexService.forest_components(complex_)
            report["forest"] = {
                "groups": [list(g.vertices) for g in groups],
                "intersection_graph": ComplexService.intersection_graph(groups).to_dict(),
                "conditions": ComplexService.check_forest_conditions(complex_, groups).to_dict(),
            }
            theorem = DecomposeService.report_prime_by_theorem(complex_)
            report["prime_by_theorem"] = {k: theorem[k] for k in ("prime", "covered", "theorem", "hypotheses")}
            logger.info("🔺 [CLI] Complex analyzed", cliques=len(decomposition), closed=closedness.closed,
                        duration_ms=round((time.time() - start_time) * 1000, 2))
            return report

    @staticmethod
    def decompose(inv: Invocation, mode: str = "auto", verify: bool = False,
                  candidates: Sequence[str] = ()) -> Tuple[dict, Optional[bool]]:
        if candidates and not verify:
            raise ArgumentError("Extra candidates are only checked together with verification")
        with using(inv.settings):
            report = DecomposeService.decompose(inv.complex_, mode, inv.ring)
            if verify:
                extra = [parse_candidate(text, inv.ring) for text in candidates]
                report = DecomposeService.with_verification(report, inv.complex_, inv.ring, extra)
            payload = report.to_dict()
            payload["field"] = str(inv.ring.field)
            payload["order"] = inv.ring.order.describe(inv.ring.layout)
            return payload, report.passed

    @staticmethod
    def _initial_by_order(inv: Invocation) -> list:
        initial = GroebnerService.initial_ideal(DetIdealService.facet_ideal(inv.complex_, inv.ring).ideal())
        return sorted(initial, key=inv.ring.order.key, reverse=True)

    @staticmethod
    def betti_table(inv: Invocation, method: str) -> GradedBettiTable:
        if method == "formula":
            cliques = list(ComplexService.clique_decomposition(inv.complex_))
            if len(cliques) != 1:
                raise UnsupportedShapeError("The closed formula covers a single clique; use convolution",
                                            cliques=len(cliques))
            return ResolutionService.clique_table(cliques[0], inv.complex_.rows)
        if method == "convolution":
            return ResolutionService.complex_convolution(inv.complex_)
        if method == "linquot":
            initial = ReportService._initial_by_order(inv)
            sets = ResolutionService.linear_quotients(initial)
            return ResolutionService.betti_from_linear_quotients(sets, [sum(m) for m in initial])
        if method == "taylor":
            return ResolutionService.taylor_strand_betti(ReportService._initial_by_order(inv), inv.ring.field)
        raise ArgumentError(f"Unknown Betti method {method!r}", methods=[*BETTI_METHODS, "all"])

    @staticmethod
    def betti(inv: Invocation, method: str = "all") -> Tuple[dict, Dict[str, GradedBettiTable]]:
        if method not in (*BETTI_METHODS, "all"):
            raise ArgumentError(f"Unknown Betti method {method!r}", methods=[*BETTI_METHODS, "all"])
        methods = BETTI_METHODS if method == "all" else (method,)
        tables: Dict[str, GradedBettiTable] = {}
        errors: Dict[str, dict] = {}
        with using(inv.settings):
            for name in methods:
                try:
                    tables[name] = ReportService.betti_table(inv, name)
                except (UnsupportedShapeError, LinearQuotientsError, ResourceLimitError, StructuralError) as e:
                    if method != "all":
                        raise
                    errors[name] = e.to_dict()
                    logger.info("📐 [BETTI] Method skipped", method=name, error=type(e).__name__)
        payload = {
            "method": method,
            "tables": {name: t.to_dict() for name, t in tables.items()},
            "errors": errors,
        }
        if method == "all":
            payload["agreement"] = {a: {b: tables[a] == tables[b] for b in tables} for a in tables}
        return payload, tables

    @staticmethod
    def gb(inv: Invocation) -> dict:
        with using(inv.settings):
            generators = DetIdealService.facet_ideal(inv.complex_, inv.ring)
            report = GroebnerService.is_groebner(generators.polynomials, inv.ring.order)
            reduced = GroebnerService.buchberger(generators.ideal())
            return {
                "field": str(inv.ring.field),
                "order": inv.ring.order.describe(inv.ring.layout),
                "generators": generators.to_dict(),
                "closed": ComplexService.is_closed(inv.complex_).to_dict(),
                "is_gb": report.to_dict(),
                "reduced_basis": {
                    "size": len(reduced.basis),
                    "leading_monomials": [str(inv.ring.monomial(m)) for m in reduced.leading_monomials()],
                },
            }

    @staticmethod
    def hilbert(inv: Invocation) -> dict:
        with using(inv.settings):
            initial = ReportService._initial_by_order(inv)
            summary = ResolutionService.hilbert_series(initial, inv.ring.layout.nvars)
            payload = {"hilbert": summary.to_dict(), "invariants": None, "notes": []}
            if ComplexService.is_closed(inv.complex_).closed:
                payload["invariants"] = ResolutionService.invariants_report(inv.complex_, inv.ring)
            else:
                payload["notes"].append("complex is not closed under the given labeling; "
                                        "clique formulas were not compared")
            return payload

    @staticmethod
    def probe(inv: Invocation, trials: Optional[int] = None, seed: Optional[int] = None,
              graded: bool = False) -> dict:
        with using(inv.settings):
            return DecomposeService.universal_gb_probe(inv.complex_, trials, seed, graded,
                                                       inv.ring)
