from fastapi import FastAPI
from contextlib import asynccontextmanager
import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.config.env import config
from app.utils.logger import configure_logging, get_logger
from app.api.routes_profiles import router as profiles_router
from app.api.routes_sweeps import router as sweeps_router
from app.services.data import BUILTIN_DATA, load_datum


@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging()
    logger = get_logger()
    logger.info("service_start", success=True, **config.summary())

    # 預先規範化內建資料
    for name in sorted(BUILTIN_DATA):
        try:
            load_datum(name)
        except Exception as e:
            logger.error("datum_preload_failed", datum=name, error=str(e))

    try:
        yield
    finally:
        logger.info("service_stop", success=True)


app = FastAPI(title="ShockLens", lifespan=lifespan)

@app.get("/health")
async def health():
    return {"success": True, "data": {"status": "ok"}}


@app.get("/api/config/status")
async def config_status():
    """檢查系統配置狀態"""
    return {"success": True, "data": {"system": config.summary()}}


app.include_router(profiles_router, prefix="/api")
app.include_router(sweeps_router, prefix="/api")


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("app.main:app", host="0.0.0.0", port=int(os.getenv("PORT", "8000")), reload=config.DEBUG)
