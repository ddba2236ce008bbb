"""
自我檢查
以內建資料跑一組快速不變量；full 模式另加有限體積交叉驗證與 ν^{1/4} 收斂率
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np
from scipy.special import gamma

from ..models.config import SweepConfig
from ..models.profile import ProfileParams
from ..utils.logger import get_logger
from .data import beta3_from_third_derivative, inverse_on_window, load_datum
from .inner import QuarticLaplaceIntegrand, U0, quartic_laplace, tanh_deviation
from .inviscid import characteristic_state
from .profile import eval_profile
from .sweep_runner import sweep_runner
from .viscous import colehopf_cell_averages, fv_edges, reference_colehopf, reference_fv

logger = get_logger()


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    bound: float
    passed: bool

    def to_dict(self) -> Dict[str, object]:
        return {"check": self.name, "measured": self.measured, "bound": self.bound, "passed": self.passed}


def _cubic_residual() -> float:
    params = ProfileParams(beta3=1.0)
    t, x = np.meshgrid(-np.logspace(-6, 1, 15), np.linspace(-5.0, 5.0, 41))
    p = eval_profile(params, t, x)
    scale = np.abs(t * p.u) + params.beta3 * np.abs(p.u) ** 3 + np.abs(x) + 1e-300
    return float(np.max(np.abs(t * p.u - params.beta3 * p.u**3 - x) / scale))


def _gauge() -> float:
    d = load_datum("gaussian-odd")
    return max(abs(d.t0 + 1.0), abs(d.beta3 - 1.0), abs(d.beta3 - beta3_from_third_derivative(d)))


def _window_roundtrip() -> float:
    d = load_datum("gaussian-skew")
    ys = np.linspace(-0.9 * d.eps0, 0.9 * d.eps0, 41)
    return float(np.max(np.abs(d.value(inverse_on_window(d, ys)) - ys)))


def _gamma_identity() -> float:
    beta3 = 1.0
    value = quartic_laplace(QuarticLaplaceIntegrand(0.0, 0.0, beta3), tol=1e-13)
    a = beta3 / 8.0
    return abs(value / (gamma(0.25) / (2.0 * a**0.25)) - 1.0)


def _inner_monotone() -> float:
    params = ProfileParams(beta3=1.0)
    values = np.asarray(U0(params, np.full(201, 2.0), np.linspace(-6.0, 6.0, 201), 1e-12))
    return float(max(np.max(np.diff(values)), abs(float(U0(params, 0.0, 0.0)))))


def _tanh_limit() -> float:
    return tanh_deviation(ProfileParams(beta3=1.0), 25.0, np.linspace(-5.0, 5.0, 21))


def _initial_trace() -> float:
    d = load_datum("gaussian-odd")
    xs = np.linspace(-2.0, 2.0, 21)
    return float(np.max(np.abs(reference_colehopf(d, 1e-3, d.t0 + 1e-8, xs) - d.value(xs))))


def _jacobian_positive() -> float:
    d = load_datum("gaussian-skew")
    st = characteristic_state(d, -1e-3, np.linspace(-3.0, 3.0, 601))
    return float(-np.min(st.jacobian))


def _fv_crosscheck() -> float:
    d = load_datum("gaussian-odd")
    sample = reference_fv(d, 0.05, -0.1, 4096, 9.0)
    exact = colehopf_cell_averages(d, 0.05, -0.1, fv_edges(sample))
    return float(np.max(np.abs(sample.values[0] - exact)))


def _inviscid_rate() -> float:
    cfg = SweepConfig(datum="gaussian-odd", nus=[1e-2, 3e-3, 1e-3, 3e-4, 1e-4], targets=["u0"], norms=["linf"])
    result = sweep_runner.run(cfg)
    return result.report.rates["linf"].exponent


QUICK_CHECKS: List[tuple] = [
    ("cubic_profile_residual", _cubic_residual, 1e-12),
    ("gauge_normalization", _gauge, 1e-8),
    ("window_inverse_roundtrip", _window_roundtrip, 1e-11),
    ("quartic_gamma_identity", _gamma_identity, 1e-12),
    ("inner_profile_monotone", _inner_monotone, 1e-12),
    ("tanh_limit_T25", _tanh_limit, 1e-2),
    ("colehopf_initial_trace", _initial_trace, 1e-6),
    ("characteristics_not_crossed", _jacobian_positive, 0.0),
]

FULL_CHECKS: List[tuple] = [
    ("fv_vs_colehopf", _fv_crosscheck, 1e-5),
]


def _run(name: str, fn: Callable[[], float], bound: float) -> CheckResult:
    try:
        measured = float(fn())
    except Exception as e:
        logger.error("selftest_check_failed", check=name, error=str(e), error_type=type(e).__name__)
        return CheckResult(name, math.nan, bound, False)
    return CheckResult(name, measured, bound, bool(measured <= bound))


def run_selftest(full: bool = False) -> List[CheckResult]:
    checks = QUICK_CHECKS + (FULL_CHECKS if full else [])
    results = [_run(name, fn, bound) for name, fn, bound in checks]
    if full:
        try:
            exponent = _inviscid_rate()
            results.append(CheckResult("inviscid_linf_rate", exponent, 0.28, 0.22 <= exponent <= 0.28))
        except Exception as e:
            logger.error("selftest_check_failed", check="inviscid_linf_rate", error=str(e), error_type=type(e).__name__)
            results.append(CheckResult("inviscid_linf_rate", math.nan, 0.28, False))
    logger.info("selftest_done", checks=len(results), failed=sum(not r.passed for r in results))
    return results
