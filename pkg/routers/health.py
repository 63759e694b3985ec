# routers/health.py
import time

import structlog
from fastapi import APIRouter

from config import settings
from services.basis_cache import basis_cache

router = APIRouter()
logger = structlog.get_logger()


@router.get("/health")
async def health_check():
    """Liveness plus basis cache statistics"""
    start_time = time.time()
    result = {
        "status": "healthy",
        "field": settings.field,
        "basis_cache": {**basis_cache.get_stats(), "max_entries": basis_cache.max_entries},
        "response_time_ms": round((time.time() - start_time) * 1000, 2),
        "timestamp": time.time(),
    }
    logger.debug("🏥 [HTTP] Health check completed", **result["basis_cache"])
    return result
