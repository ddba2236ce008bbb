from __future__ import annotations

from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Zone(str, Enum):
    INNER = "I"
    MATCHING = "M"
    OUTER = "O"


class ApproxConfig(BaseModel):
    """複合近似的參數"""

    model_config = ConfigDict(frozen=True)

    nu: float = Field(gt=0, description="黏性 ν")
    K: Literal[0, 1] = Field(default=0, description="外部展開階數")
    alpha: float = Field(default=0.2, gt=0, lt=1, description="截斷指數 α")
    eps_t: float = Field(default=1e-6, gt=0, description="時間上限 −ε_t")
    quad_tol: float = Field(default=1e-10, ge=1e-14, le=1e-6, description="求積相對容差")


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x_halfwidth: float = Field(default=1.0, gt=0, description="空間半寬")
    x_points: int = Field(default=401, ge=3, description="均勻空間點數")
    t_slices: int = Field(default=12, ge=1, description="時間階梯層數")
    cluster: bool = Field(default=True, description="在 ν^{3/4} 尺度加密")
    cluster_per_octave: int = Field(default=8, ge=1, le=64, description="加密點每倍頻點數")
    inner_times: List[float] = Field(
        default_factory=lambda: [-(2.0 ** (k / 2.0)) for k in range(12, -5, -1)],
        description="內層時間 T，實際時間 t = T·ν^{1/2}",
    )

    @field_validator("inner_times")
    @classmethod
    def _negative_times(cls, times: List[float]) -> List[float]:
        if any(t >= 0 for t in times):
            raise ValueError("inner_times must be negative")
        return times


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quad_tol: float = Field(default=1e-10, ge=1e-14, le=1e-6)
    eps_t: float = Field(default=1e-6, gt=0)


class SweepConfig(BaseModel):
    """sweep 指令的設定檔"""

    model_config = ConfigDict(extra="forbid")

    datum: str = Field(default="gaussian-odd", description="內建資料名稱")
    datum_table: Optional[str] = Field(default=None, description="表格資料路徑，優先於 datum")
    K: Literal[0, 1] = 0
    alpha: float = Field(default=0.2, gt=0, lt=1)
    alphas: Optional[List[float]] = Field(default=None, description="α 掃描")
    nus: List[float] = Field(min_length=1, description="黏性列表")
    norms: List[Literal["linf", "l1", "l2", "holder"]] = Field(default_factory=lambda: ["linf"])
    targets: List[Literal["u0", "app", "u_nu"]] = Field(default_factory=lambda: ["u0", "app"])
    holder_gamma: float = Field(default=0.5, gt=0, le=1)
    grid: GridSpec = Field(default_factory=GridSpec)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    seed_irrelevant: bool = Field(default=True, description="沒有隨機性，僅供文件標示")

    @field_validator("nus")
    @classmethod
    def _positive_nus(cls, nus: List[float]) -> List[float]:
        if any(not nu > 0 for nu in nus):
            raise ValueError("every viscosity must be positive")
        return nus

    @field_validator("alphas")
    @classmethod
    def _alphas_in_range(cls, alphas: Optional[List[float]]) -> Optional[List[float]]:
        if alphas is not None and any(not 0 < a < 1 for a in alphas):
            raise ValueError("alphas must lie in (0, 1)")
        return alphas

    def alpha_values(self) -> List[float]:
        return list(self.alphas) if self.alphas else [self.alpha]

    def approx_config(self, nu: float, alpha: float) -> ApproxConfig:
        return ApproxConfig(
            nu=nu,
            K=self.K,
            alpha=alpha,
            eps_t=self.tolerances.eps_t,
            quad_tol=self.tolerances.quad_tol,
        )


ProfileField = Literal["u0", "u_nu", "u_app", "U0", "theta", "E", "u1", "u10"]


class ProfileGrid(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t_values: List[float] = Field(min_length=1, description="時間切片")
    x_values: Optional[List[float]] = Field(default=None, description="明確的空間點")
    x_halfwidth: float = Field(default=1.0, gt=0)
    x_points: int = Field(default=101, ge=1)

    def xs(self) -> List[float]:
        if self.x_values is not None:
            return list(self.x_values)
        if self.x_points == 1:
            return [0.0]
        step = 2.0 * self.x_halfwidth / (self.x_points - 1)
        return [-self.x_halfwidth + i * step for i in range(self.x_points)]


class ProfilesConfig(BaseModel):
    """profiles 指令的設定檔；U0 欄位的 (t, x) 解讀為內部座標 (T, X)"""

    model_config = ConfigDict(extra="forbid")

    datum: str = "gaussian-odd"
    datum_table: Optional[str] = None
    nu: float = Field(default=1e-3, gt=0)
    K: Literal[0, 1] = 0
    alpha: float = Field(default=0.2, gt=0, lt=1)
    fields: List[ProfileField] = Field(min_length=1)
    grid: ProfileGrid
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @model_validator(mode="after")
    def _unique_fields(self) -> "ProfilesConfig":
        if len(set(self.fields)) != len(self.fields):
            raise ValueError("fields must not repeat")
        return self

    def approx_config(self) -> ApproxConfig:
        return ApproxConfig(
            nu=self.nu,
            K=self.K,
            alpha=self.alpha,
            eps_t=self.tolerances.eps_t,
            quad_tol=self.tolerances.quad_tol,
        )
