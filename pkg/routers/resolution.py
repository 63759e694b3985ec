# routers/resolution.py
import time

import structlog
from fastapi import APIRouter, Depends, Query

from models.documents import ComplexDocument
from routers.options import RunOptions
from services.report_service import BETTI_METHODS, ReportService

router = APIRouter()
logger = structlog.get_logger()


@router.post("/betti")
def betti_tables(
    document: ComplexDocument,
    method: str = Query("all", description=" | ".join([*BETTI_METHODS, "all"])),
    options: RunOptions = Depends(),
):
    start_time = time.time()
    report, tables = ReportService.betti(options.prepare(document), method)
    logger.info("📐 [HTTP] Betti tables", methods=list(tables), skipped=list(report["errors"]),
                duration_ms=round((time.time() - start_time) * 1000, 2))
    return report
