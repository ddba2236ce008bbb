from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field


@dataclass
class FieldSample:
    """時空網格上的場值，values[i, j] 對應 (t[i], x[j])"""

    field: str
    t: np.ndarray
    x: np.ndarray
    values: np.ndarray
    nu: Optional[float] = None
    K: Optional[int] = None

    def __post_init__(self) -> None:
        self.t = np.atleast_1d(np.asarray(self.t, dtype=float))
        self.x = np.atleast_1d(np.asarray(self.x, dtype=float))
        self.values = np.asarray(self.values, dtype=float).reshape(self.t.size, self.x.size)

    def __sub__(self, other: "FieldSample") -> "FieldSample":
        return FieldSample(
            field=f"{self.field}-{other.field}",
            t=self.t,
            x=self.x,
            values=self.values - other.values,
            nu=self.nu,
            K=self.K,
        )


class RateFit(BaseModel):
    """log e = p·log ν + b 的最小平方擬合"""

    exponent: float = Field(description="擬合指數 p")
    intercept: float = Field(description="截距 b")
    r_squared: float = Field(description="決定係數")
    max_log_residual: float = Field(description="對數殘差最大值")
    max_relative_residual: float = Field(description="相對殘差最大值")
    table: List[List[float]] = Field(default_factory=list, description="(ν, e) 資料")


class LogCorrectedFit(BaseModel):
    """e ≈ A·ν·ln(1/ν) 與純冪律的比較"""

    amplitude: float = Field(description="係數 A")
    max_relative_residual: float = Field(description="對數修正模型的相對殘差")
    power_law_relative_residual: float = Field(description="純冪律的相對殘差")
    preferred: bool = Field(description="對數修正模型是否較佳")


class Trend(BaseModel):
    """量測值沿 ν 遞減方向的變化"""

    first: float = Field(description="最大 ν 的值")
    last: float = Field(description="最小 ν 的值")
    ratio: float = Field(description="last / first")
    min_step_ratio: float = Field(description="相鄰 ν 間比值的最小者")
    max_step_ratio: float = Field(description="相鄰 ν 間比值的最大者，< 1 即單調遞減")


class RateReport(BaseModel):
    """rates.json 內容"""

    rates: Dict[str, RateFit] = Field(default_factory=dict)
    log_corrected: Dict[str, LogCorrectedFit] = Field(default_factory=dict)
    alpha_scan: Dict[str, Dict[str, RateFit]] = Field(default_factory=dict)
    trends: Dict[str, Trend] = Field(default_factory=dict)
