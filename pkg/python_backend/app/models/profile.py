from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

Scalar = Union[float, np.ndarray]


class ProfileParams(BaseModel):
    """三次剖面的形狀常數"""

    model_config = ConfigDict(frozen=True)

    beta3: float = Field(gt=0, description="三次係數 β₃")
    beta4: float = Field(default=0.0, description="下一個 Taylor 係數 β₄")

    @field_validator("beta3", "beta4")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("must be finite")
        return value


@dataclass(frozen=True)
class ProfilePoint:
    """𝔲、𝔪、𝔡 在 (t, x) 的取值；欄位可為純量或同形陣列"""

    t: Scalar
    x: Scalar
    u: Scalar
    m: Scalar
    d: Scalar
