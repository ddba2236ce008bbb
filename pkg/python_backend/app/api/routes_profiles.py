from __future__ import annotations

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from ..config.env import config
from ..models.config import ProfilesConfig
from ..models.errors import ShockLensError
from ..services.data import BUILTIN_DATA, load_datum
from ..services.sweep_runner import PROFILE_HEADER, sweep_runner
from ..utils.logger import get_logger


router = APIRouter()
logger = get_logger()


def error_status(e: ShockLensError) -> int:
    # 設定錯誤 400，數值錯誤 422
    return 400 if e.exit_code == 2 else 422


@router.get("/data")
async def list_data():
    """列出內建初始資料與其規範化常數"""
    try:
        items = [load_datum(name).summary() for name in sorted(BUILTIN_DATA)]
    except ShockLensError as e:
        logger.error("data_list_failed", error=str(e))
        raise HTTPException(status_code=error_status(e), detail=e.to_detail())
    return {"success": True, "data": items}


@router.post("/profiles")
async def create_profiles(request: ProfilesConfig):
    """在網格上計算指定欄位"""
    try:
        rows = await run_in_threadpool(sweep_runner.profiles, request, config.resolve_threads())
    except ShockLensError as e:
        logger.error("profiles_failed", code=e.code, error=e.message)
        raise HTTPException(status_code=error_status(e), detail=e.to_detail())

    logger.info("profiles_served", rows=len(rows), success=True)
    return {
        "success": True,
        "data": {"columns": list(PROFILE_HEADER), "rows": rows},
    }
