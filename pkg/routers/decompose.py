# routers/decompose.py
import time
from typing import List, Optional

import structlog
from fastapi import APIRouter, Depends, Query

from models.documents import ComplexDocument
from routers.options import RunOptions
from services.decompose_service import MODES
from services.report_service import ReportService

router = APIRouter()
logger = structlog.get_logger()


@router.post("/decompose")
def decompose_complex(
    document: ComplexDocument,
    mode: str = Query("auto", description=" | ".join(MODES)),
    verify: bool = Query(False),
    candidate: Optional[List[str]] = Query(None, description='bracket minors, e.g. "[12|56],[1|6]"'),
    options: RunOptions = Depends(),
):
    """Candidate minimal primes; a failed verification is reported in the body, not as an error"""
    start_time = time.time()
    report, passed = ReportService.decompose(options.prepare(document), mode, verify, candidate or ())
    logger.info("🧩 [HTTP] Decomposition", mode=report["mode"], candidates=report["candidate_count"],
                verdict=passed, duration_ms=round((time.time() - start_time) * 1000, 2))
    return report
