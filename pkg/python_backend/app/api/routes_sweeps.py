from __future__ import annotations

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from ..config.env import config
from ..models.config import SweepConfig
from ..models.errors import ShockLensError
from ..services.sweep_runner import sweep_runner
from ..utils.logger import get_logger
from .routes_profiles import error_status


router = APIRouter()
logger = get_logger()


@router.post("/sweeps")
async def create_sweep(request: SweepConfig):
    """執行 ν 掃描並回傳誤差表與收斂率"""
    try:
        result = await run_in_threadpool(sweep_runner.run, request, config.resolve_threads())
    except ShockLensError as e:
        logger.error("sweep_failed", code=e.code, error=e.message)
        raise HTTPException(status_code=error_status(e), detail=e.to_detail())

    logger.info("sweep_served", rows=len(result.rows), success=True)
    return {
        "success": True,
        "data": {
            "datum": result.datum,
            "columns": result.header,
            "rows": result.rows,
            "report": result.report.model_dump(),
        },
    }
