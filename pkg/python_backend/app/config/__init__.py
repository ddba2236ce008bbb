"""
ShockLens 系統設定：.env 讀取與執行緒數解析
"""

from .env import EnvConfig, config

__all__ = ["EnvConfig", "config"]
