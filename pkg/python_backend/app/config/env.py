"""
環境變數配置模組
處理 .env 檔案載入和環境變數管理
"""

import os
from typing import Optional
from dotenv import load_dotenv
from pathlib import Path

# 載入 .env 檔案
env_path = Path(__file__).parent.parent.parent.parent / ".env"
load_dotenv(env_path)


class EnvConfig:
    """環境變數配置類別"""

    @property
    def DEBUG(self) -> bool:
        return os.getenv("DEBUG", "false").lower() == "true"

    @property
    def LOG_LEVEL(self) -> str:
        return os.getenv("LOG_LEVEL", "INFO")

    @property
    def SHOCKLENS_THREADS(self) -> Optional[int]:
        raw = os.getenv("SHOCKLENS_THREADS")
        if raw is None or raw.strip() == "":
            return None
        try:
            value = int(raw)
        except ValueError:
            return None
        return value if value > 0 else None

    @property
    def SHOCKLENS_OUTPUT_DIR(self) -> Path:
        return Path(os.getenv("SHOCKLENS_OUTPUT_DIR", "results"))

    def resolve_threads(self, cli_threads: Optional[int] = None) -> int:
        """決定工作執行緒數：環境變數 > CLI 參數 > 邏輯核心數"""
        if self.SHOCKLENS_THREADS is not None:
            return self.SHOCKLENS_THREADS
        if cli_threads is not None and cli_threads > 0:
            return cli_threads
        return os.cpu_count() or 1

    def summary(self) -> dict:
        """取得目前生效的系統設定"""
        return {
            "debug": self.DEBUG,
            "log_level": self.LOG_LEVEL,
            "threads": self.resolve_threads(),
            "output_dir": str(self.SHOCKLENS_OUTPUT_DIR),
        }


# 創建全域配置實例
config = EnvConfig()
