"""
錯誤型別
每個錯誤帶有穩定的 code，CLI 依家族決定結束碼，API 轉成 HTTPException detail
"""

from __future__ import annotations

from typing import Any, Dict


class ShockLensError(Exception):
    code = "SHOCKLENS_ERROR"
    exit_code = 1

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def to_detail(self) -> Dict[str, Any]:
        detail: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.context:
            detail["context"] = {k: _jsonable(v) for k, v in self.context.items()}
        return detail


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


# -------- 設定錯誤（結束碼 2） --------
class ConfigError(ShockLensError):
    code = "CONFIG_ERROR"
    exit_code = 2


# -------- 數值錯誤（結束碼 3） --------
class NumericalError(ShockLensError):
    code = "NUMERICAL_ERROR"
    exit_code = 3


class InvalidInput(NumericalError):
    code = "INVALID_INPUT"


class UnsupportedOrder(NumericalError):
    code = "UNSUPPORTED_ORDER"


class NoShock(NumericalError):
    code = "NO_SHOCK"


class DegenerateShock(NumericalError):
    code = "DEGENERATE_SHOCK"


class NonUniqueMin(NumericalError):
    code = "NON_UNIQUE_MIN"


class OutOfWindow(NumericalError):
    code = "OUT_OF_WINDOW"


class CharacteristicsCrossed(NumericalError):
    code = "CHARACTERISTICS_CROSSED"


class WindowRequired(NumericalError):
    code = "WINDOW_REQUIRED"


class ToleranceNotMet(NumericalError):
    code = "TOLERANCE_NOT_MET"


class NuTooSmall(NumericalError):
    code = "NU_TOO_SMALL"


class UnstableParameters(NumericalError):
    code = "UNSTABLE_PARAMETERS"


class EmptyGrid(NumericalError):
    code = "EMPTY_GRID"


class DegenerateInput(NumericalError):
    code = "DEGENERATE_INPUT"


# -------- 驗收門檻（結束碼 4） --------
class GateFailure(ShockLensError):
    code = "GATE_FAILURE"
    exit_code = 4
