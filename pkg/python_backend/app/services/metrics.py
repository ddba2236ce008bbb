"""
誤差度量模組
網格範數、Hölder 半範數、收斂率擬合與取樣網格
"""

from __future__ import annotations

import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import linregress

from ..models.errors import DegenerateInput, EmptyGrid, InvalidInput
from ..models.field import FieldSample, LogCorrectedFit, RateFit, Trend

NORMS = ("linf", "l1", "l2")


def grid_norm(f: FieldSample, kind: str, x_range: Optional[Tuple[float, float]] = None) -> float:
    """對每個時間切片取空間範數，再取時間上確界"""
    if kind not in NORMS:
        raise InvalidInput("unknown norm", kind=kind)
    x = f.x
    values = f.values
    if x_range is not None:
        keep = (x >= x_range[0]) & (x <= x_range[1])
        x, values = x[keep], values[:, keep]
    if values.size == 0:
        raise EmptyGrid("no grid points in the norm domain", field=f.field)

    if kind == "linf":
        return float(np.max(np.abs(values)))
    if x.size < 2:
        raise EmptyGrid("integral norms need at least two spatial points", field=f.field)
    if kind == "l1":
        per_slice = trapezoid(np.abs(values), x, axis=1)
    else:
        per_slice = np.sqrt(trapezoid(values * values, x, axis=1))
    return float(np.max(per_slice))


HOLDER_BLOCK = 256


def _slice_holder(x: np.ndarray, rows: np.ndarray, gamma: float, max_span: float) -> np.ndarray:
    """每列的 sup_{i<j, x_j − x_i ≤ max_span} |v_j − v_i|/(x_j − x_i)^γ，逐塊窮舉所有點對"""
    n = x.size
    best = np.zeros(rows.shape[0])
    for start in range(0, n - 1, HOLDER_BLOCK):
        i = np.arange(start, min(start + HOLDER_BLOCK, n - 1))
        dx = x[None, :] - x[i, None]
        keep = (dx > 0) & (dx <= max_span)
        if not np.any(keep):
            continue
        weight = np.where(keep, dx, np.inf) ** -gamma
        jump = np.abs(rows[:, None, :] - rows[:, i, None])
        best = np.maximum(best, np.max(jump * weight[None, :, :], axis=(1, 2)))
    return best


def holder_seminorm(f: FieldSample, gamma: float, max_span: float = 1.0) -> float:
    """sup_t sup_{0<|x−y|≤max_span} |f(x) − f(y)|/|x − y|^γ，網格加密時單調不減"""
    if not 0.0 < gamma <= 1.0:
        raise InvalidInput("holder exponent must lie in (0, 1]", gamma=gamma)
    if f.x.size < 2:
        raise EmptyGrid("holder seminorm needs at least two points", field=f.field)
    order = np.argsort(f.x)
    return float(np.max(_slice_holder(f.x[order], f.values[:, order], gamma, max_span)))


def _clean_table(table: Iterable[Tuple[float, float]]) -> Tuple[np.ndarray, np.ndarray]:
    rows = sorted(((float(nu), float(e)) for nu, e in table), key=lambda r: -r[0])
    if len(rows) < 3:
        raise DegenerateInput("rate fit needs at least three viscosities", count=len(rows))
    nus = np.array([r[0] for r in rows])
    errs = np.array([r[1] for r in rows])
    if np.any(nus <= 0) or np.any(errs <= 0) or not np.all(np.isfinite(errs)):
        raise DegenerateInput("rate fit needs positive finite values")
    if np.ptp(np.log(nus)) == 0.0:
        raise DegenerateInput("all viscosities are equal")
    return nus, errs


def fit_rate(table: Sequence[Tuple[float, float]]) -> RateFit:
    """log e = p·log ν + b 的最小平方"""
    nus, errs = _clean_table(table)
    lx, ly = np.log(nus), np.log(errs)
    fit = linregress(lx, ly)
    residual = ly - (fit.slope * lx + fit.intercept)
    model = np.exp(fit.intercept) * nus**fit.slope
    return RateFit(
        exponent=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        max_log_residual=float(np.max(np.abs(residual))),
        max_relative_residual=float(np.max(np.abs(errs / model - 1.0))),
        table=[[float(a), float(b)] for a, b in zip(nus, errs)],
    )


def fit_log_corrected(table: Sequence[Tuple[float, float]]) -> LogCorrectedFit:
    """e ≈ A·ν·ln(1/ν)，在對數空間擬合 A 並與純冪律比較"""
    nus, errs = _clean_table(table)
    if np.any(nus >= 1.0):
        raise DegenerateInput("log-corrected model needs nu < 1")
    shape = nus * np.log(1.0 / nus)
    amplitude = float(np.exp(np.mean(np.log(errs) - np.log(shape))))
    log_residual = float(np.max(np.abs(errs / (amplitude * shape) - 1.0)))
    power = fit_rate(table)
    return LogCorrectedFit(
        amplitude=amplitude,
        max_relative_residual=log_residual,
        power_law_relative_residual=power.max_relative_residual,
        preferred=log_residual < power.max_relative_residual,
    )


def value_trend(table: Sequence[Tuple[float, float]]) -> Trend:
    """依 ν 由大到小排列後的首末比值與相鄰比值範圍"""
    _, values = _clean_table(table)
    steps = values[1:] / values[:-1]
    return Trend(
        first=float(values[0]),
        last=float(values[-1]),
        ratio=float(values[-1] / values[0]),
        min_step_ratio=float(np.min(steps)),
        max_step_ratio=float(np.max(steps)),
    )


# -------- 取樣網格 --------
def time_ladder(t0: float, eps_t: float, levels: int, inner: Sequence[float] = ()) -> List[float]:
    """{t₀} ∪ {−|t₀|·2^{−j}}，最後一層截在 −ε_t；inner 為額外的時間點（落在 (t₀, −ε_t) 外者捨去）"""
    if not t0 < -eps_t < 0.0:
        raise InvalidInput("need t0 < -eps_t < 0", t0=t0, eps_t=eps_t)
    if levels < 1:
        raise EmptyGrid("need at least one time level", levels=levels)
    times = [t0]
    for j in range(1, levels + 1):
        t = -abs(t0) * 2.0**-j
        if t >= -eps_t:
            break
        times.append(t)
    times.append(-eps_t)
    extra = [float(t) for t in inner if t0 < t < -eps_t]
    return sorted(set(times).union(extra))


def inner_times(nu: float, scaled: Sequence[float]) -> List[float]:
    """內層時間 t = T·ν^{1/2}"""
    return [float(T) * math.sqrt(nu) for T in scaled]


def spatial_grid(nu: float, half_width: float, points: int, cluster: bool = True, per_octave: int = 4) -> np.ndarray:
    """均勻網格加上 ±ν^{3/4}·2^{k/p} 的幾何加密點，由 ν^{3/4}/4 起每倍頻 p 點"""
    if points < 3:
        raise EmptyGrid("need at least three spatial points", points=points)
    if per_octave < 1:
        raise InvalidInput("per_octave must be positive", per_octave=per_octave)
    xs = [np.linspace(-half_width, half_width, points)]
    if cluster:
        inner = nu**0.75
        k_max = int(math.floor(per_octave * math.log2(half_width / inner))) if half_width > inner else 0
        ladder = inner * 2.0 ** (np.arange(-2 * per_octave, k_max + 1) / per_octave)
        ladder = ladder[ladder <= half_width]
        xs.extend([ladder, -ladder, np.array([0.0])])
    return np.unique(np.concatenate(xs))
