# routers/analysis.py
import time
from typing import Optional

import structlog
from fastapi import APIRouter, Depends, Query

from models.documents import ComplexDocument
from routers.options import RunOptions
from services.report_service import ReportService

router = APIRouter()
logger = structlog.get_logger()


def _elapsed_ms(start_time: float) -> float:
    return round((time.time() - start_time) * 1000, 2)


@router.post("/analyze")
def analyze_complex(document: ComplexDocument, options: RunOptions = Depends()):
    """Cliques, closedness, block structure and intersection graphs"""
    start_time = time.time()
    report = ReportService.analyze(options.prepare(document))
    logger.info("🔺 [HTTP] Complex analyzed", facets=len(document.facets), duration_ms=_elapsed_ms(start_time))
    return report


@router.post("/gb")
def groebner_check(document: ComplexDocument, options: RunOptions = Depends()):
    start_time = time.time()
    report = ReportService.gb(options.prepare(document))
    logger.info("🧮 [HTTP] Groebner check", is_gb=report["is_gb"]["is_gb"], duration_ms=_elapsed_ms(start_time))
    return report


@router.post("/hilbert")
def hilbert_series(document: ComplexDocument, options: RunOptions = Depends()):
    start_time = time.time()
    report = ReportService.hilbert(options.prepare(document))
    logger.info("📈 [HTTP] Hilbert series", duration_ms=_elapsed_ms(start_time))
    return report


@router.post("/probe")
def probe_universal(
    document: ComplexDocument,
    trials: Optional[int] = Query(None, ge=0),
    seed: Optional[int] = Query(None),
    graded: bool = Query(False),
    options: RunOptions = Depends(),
):
    """Groebner property of the facet minors under seeded random orders"""
    start_time = time.time()
    report = ReportService.probe(options.prepare(document, trials=trials, seed=seed), trials, seed, graded)
    logger.info("🎲 [HTTP] Universal probe", passed=report["passed"], all_pass=report["all_pass"],
                duration_ms=_elapsed_ms(start_time))
    return report
