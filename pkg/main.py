# main.py
import time
import uuid
from contextlib import asynccontextmanager

import structlog
import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import ORJSONResponse
from prometheus_client import CONTENT_TYPE_LATEST, generate_latest
from starlette.responses import Response

from config import settings
from middleware.logging import setup_logging
from middleware.metrics import REQUEST_COUNT, REQUEST_DURATION
from models.errors import DetFacetError
from routers import analysis, decompose, health, resolution

setup_logging(settings.log_level)
logger = structlog.get_logger()


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info("🚀 [HTTP] Determinantal facet API starting up", field=settings.field,
                step_limit=settings.step_limit, workers=settings.workers)
    yield
    logger.info("🛑 [HTTP] Determinantal facet API shutting down")


app = FastAPI(
    title="Determinantal Facet Ideals",
    description="Groebner bases, prime decompositions and Betti tables of determinantal facet ideals",
    version="1.0.0",
    docs_url="/api/docs",
    redoc_url="/api/redoc",
    lifespan=lifespan,
    default_response_class=ORJSONResponse,
)


@app.middleware("http")
async def logging_and_metrics_middleware(request: Request, call_next):
    start_time = time.time()
    request_id = str(uuid.uuid4())
    request.state.request_id = request_id
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(request_id=request_id)
    try:
        response = await call_next(request)
    except Exception as e:
        logger.error("❌ [HTTP] Request failed", method=request.method, url=str(request.url), error=str(e),
                     duration_ms=round((time.time() - start_time) * 1000, 2), request_id=request_id)
        raise

    duration = time.time() - start_time
    endpoint = request.url.path
    REQUEST_COUNT.labels(method=request.method, endpoint=endpoint, status=response.status_code).inc()
    REQUEST_DURATION.labels(method=request.method, endpoint=endpoint).observe(duration)
    response.headers["X-Request-ID"] = request_id
    response.headers["X-Response-Time"] = f"{duration * 1000:.2f}ms"
    return response


app.include_router(analysis.router, prefix="/api/v1/complex", tags=["Complex"])
app.include_router(decompose.router, prefix="/api/v1", tags=["Decomposition"])
app.include_router(resolution.router, prefix="/api/v1", tags=["Resolution"])
app.include_router(health.router, tags=["Health & Monitoring"])


@app.get("/metrics")
async def prometheus_metrics():
    return Response(generate_latest(), media_type=CONTENT_TYPE_LATEST)


@app.get("/")
async def root():
    return {
        "service": "Determinantal Facet Ideals",
        "version": "1.0.0",
        "field": settings.field,
        "endpoints": {
            "docs": "/api/docs",
            "health": "/health",
            "metrics": "/metrics",
            "analyze": "/api/v1/complex/analyze",
            "gb": "/api/v1/complex/gb",
            "hilbert": "/api/v1/complex/hilbert",
            "probe": "/api/v1/complex/probe",
            "decompose": "/api/v1/decompose",
            "betti": "/api/v1/betti",
        },
        "timestamp": time.time(),
    }


@app.exception_handler(DetFacetError)
async def detfacet_exception_handler(request: Request, exc: DetFacetError):
    logger.info("⚠️ [HTTP] Request rejected", path=request.url.path, error=type(exc).__name__)
    return ORJSONResponse(status_code=exc.http_status, content=exc.to_dict())


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    return ORJSONResponse(status_code=500, content={"error": "Internal server error"})


if __name__ == "__main__":
    uvicorn.run("main:app", host=settings.api_host, port=settings.api_port, log_level="error", access_log=False)
