"""
驗收門檻
語法：`rates.linf.exponent in [0.22, 0.28]` 或 `rates.app_linf.exponent >= 0.35`
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from typing import Any, Dict, Mapping

from ..models.errors import ConfigError

_RANGE = re.compile(r"^\s*(?P<path>[\w.]+)\s+in\s+\[\s*(?P<lo>[^,\]]+)\s*,\s*(?P<hi>[^\]]+)\]\s*$")
_COMPARE = re.compile(r"^\s*(?P<path>[\w.]+)\s*(?P<op>>=|<=|>|<)\s*(?P<value>\S+)\s*$")

_OPS = {">=": operator.ge, "<=": operator.le, ">": operator.gt, "<": operator.lt}


@dataclass(frozen=True)
class GateResult:
    expression: str
    measured: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"gate": self.expression, "measured": self.measured, "passed": self.passed}


def _number(text: str, expression: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError("gate bound is not a number", gate=expression, bound=text)


def _resolve(payload: Mapping[str, Any], path: str, expression: str) -> float:
    node: Any = payload
    for part in path.split("."):
        if not isinstance(node, Mapping) or part not in node:
            raise ConfigError("gate path not found in the report", gate=expression, missing=part)
        node = node[part]
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ConfigError("gate path does not point to a number", gate=expression)
    return float(node)


def evaluate_gate(payload: Mapping[str, Any], expression: str) -> GateResult:
    """對 rates.json 內容求值"""
    match = _RANGE.match(expression)
    if match:
        measured = _resolve(payload, match["path"], expression)
        lo, hi = _number(match["lo"], expression), _number(match["hi"], expression)
        return GateResult(expression, measured, lo <= measured <= hi)
    match = _COMPARE.match(expression)
    if match:
        measured = _resolve(payload, match["path"], expression)
        bound = _number(match["value"], expression)
        return GateResult(expression, measured, _OPS[match["op"]](measured, bound))
    raise ConfigError("cannot parse gate expression", gate=expression)

