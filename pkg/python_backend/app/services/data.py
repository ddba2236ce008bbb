"""
初始資料模組
假設 (H1)–(H5) 驗證、Galilean 規範化、窗口內反函數 ω̊ 與 Taylor 係數 β_m
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar
from scipy.special import erf

from ..models.errors import (
    ConfigError,
    DegenerateShock,
    InvalidInput,
    NonUniqueMin,
    NoShock,
    OutOfWindow,
)
from ..models.profile import ProfileParams
from ..utils.logger import get_logger
from ..utils.numerics import EPS, bracketed_newton, diff1

logger = get_logger()

MAX_DERIVATIVE = 6
MAX_TAYLOR_ORDER = 6
DEGENERACY_TOL = 1e-10
UNIQUE_MIN_TOL = 1e-9
SUPPORT_THRESHOLD = 1e-16
SAMPLE_STEP = 1e-3
VALUE_RANGE_PAD = 1e-10


# -------- 原始資料（規範化前） --------
class RawDatum:
    """原始初始資料：值、導數（至 6 階）與原函數 ∫₀ˣ"""

    name: str = "raw"
    far_value: float = 0.0
    search_range: Tuple[float, float] = (-4.0, 4.0)

    def derivative(self, x, n: int = 0):
        raise NotImplementedError

    def primitive(self, x):
        raise NotImplementedError

    def support_radius(self) -> Tuple[float, float]:
        """回傳 (中心, 半徑)：半徑外 |ů − c̊| < 1e-16"""
        raise NotImplementedError


class GaussianPolyDatum(RawDatum):
    """ů(x) = c + p(x − a)·exp(−(x − a)²)，導數與原函數皆為解析式"""

    def __init__(self, name: str, coeffs, center: float = 0.0, offset: float = 0.0) -> None:
        self.name = name
        self.center = float(center)
        self.far_value = float(offset)
        self.search_range = (self.center - 4.0, self.center + 4.0)
        self._poly = Polynomial(coeffs)
        # (p e^{-z²})' = (p' − 2zp) e^{-z²}
        z = Polynomial([0.0, 1.0])
        polys = [self._poly]
        for _ in range(MAX_DERIVATIVE):
            polys.append(polys[-1].deriv() - 2.0 * z * polys[-1])
        self._derivative_polys = polys

    def derivative(self, x, n: int = 0):
        if not 0 <= n <= MAX_DERIVATIVE:
            raise InvalidInput("derivative order out of range", n=n)
        z = np.asarray(x, dtype=float) - self.center
        value = self._derivative_polys[n](z) * np.exp(-z * z)
        return value + self.far_value if n == 0 else value

    def _gauss_moment_primitive(self, z: np.ndarray) -> np.ndarray:
        # I_k(z) = ∫₀ᶻ s^k e^{-s²} ds，遞迴 I_k = −z^{k−1}e^{−z²}/2 + (k−1)/2 · I_{k−2}
        e = np.exp(-z * z)
        moments = [0.5 * math.sqrt(math.pi) * erf(z), 0.5 * (1.0 - e)]
        total = np.zeros_like(z)
        for k, coeff in enumerate(self._poly.coef):
            while len(moments) <= k:
                j = len(moments)
                moments.append(-0.5 * z ** (j - 1) * e + 0.5 * (j - 1) * moments[j - 2])
            total = total + coeff * moments[k]
        return total

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        z = x - self.center
        z0 = np.full_like(z, -self.center)
        return self._gauss_moment_primitive(z) - self._gauss_moment_primitive(z0) + self.far_value * x

    def support_radius(self) -> Tuple[float, float]:
        r = np.arange(0.0, 40.0, 0.01)
        tail = np.maximum(np.abs(self._poly(r)), np.abs(self._poly(-r))) * np.exp(-r * r)
        above = np.nonzero(tail >= SUPPORT_THRESHOLD)[0]
        radius = float(r[above[-1]] + 0.01) if above.size else 0.0
        return self.center, radius


class PolynomialBumpDatum(RawDatum):
    """ů(x) = −x(1 − x²/R²)^k 於 |x| < R，其外為 0；C^{k−1} 且嚴格緊支撐"""

    def __init__(self, name: str, radius: float = 2.0, power: int = 8) -> None:
        if power <= MAX_DERIVATIVE:
            raise InvalidInput("bump power must exceed the derivative order used", power=power)
        self.name = name
        self.radius = float(radius)
        self.far_value = 0.0
        self.search_range = (-self.radius, self.radius)
        bump = Polynomial([1.0, 0.0, -1.0 / self.radius**2]) ** power
        self._poly = -Polynomial([0.0, 1.0]) * bump
        self._derivative_polys = [self._poly.deriv(n) if n else self._poly for n in range(MAX_DERIVATIVE + 1)]
        self._antiderivative = self._poly.integ()

    def derivative(self, x, n: int = 0):
        if not 0 <= n <= MAX_DERIVATIVE:
            raise InvalidInput("derivative order out of range", n=n)
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) < self.radius, self._derivative_polys[n](x), 0.0)

    def primitive(self, x):
        x = np.clip(np.asarray(x, dtype=float), -self.radius, self.radius)
        return self._antiderivative(x) - self._antiderivative(0.0)

    def support_radius(self) -> Tuple[float, float]:
        return 0.0, self.radius


class TabulatedDatum(RawDatum):
    """使用者表格資料 (x, ů(x))：三次樣條重建，三階以上導數以 5 點差分串接（精度有損）"""

    FD_STEP = 1e-3

    def __init__(self, name: str, xs, values) -> None:
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=float)
        if xs.ndim != 1 or xs.size < 8 or xs.shape != values.shape:
            raise ConfigError("tabulated datum needs at least 8 (x, value) rows", rows=int(xs.size))
        order = np.argsort(xs)
        xs, values = xs[order], values[order]
        if np.any(np.diff(xs) <= 0):
            raise ConfigError("tabulated datum has repeated x values")
        self.name = name
        self.xs = xs
        self.far_value = float(0.5 * (values[0] + values[-1]))
        self.search_range = (float(xs[0]), float(xs[-1]))
        self._spline = CubicSpline(xs, values, bc_type="clamped", extrapolate=False)
        self._antiderivative = self._spline.antiderivative()
        self._left, self._right = float(values[0]), float(values[-1])

    def _spline_eval(self, x: np.ndarray, n: int) -> np.ndarray:
        inside = (x >= self.xs[0]) & (x <= self.xs[-1])
        value = self._spline(np.clip(x, self.xs[0], self.xs[-1]), n)
        if n == 0:
            outside = np.where(x < self.xs[0], self._left, self._right)
            return np.where(inside, value, outside)
        return np.where(inside, value, 0.0)

    def derivative(self, x, n: int = 0):
        if not 0 <= n <= MAX_DERIVATIVE:
            raise InvalidInput("derivative order out of range", n=n)
        x = np.asarray(x, dtype=float)
        if n <= 2:
            return self._spline_eval(x, n)
        return diff1(lambda s: self.derivative(s, n - 1), x, self.FD_STEP)

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        clipped = np.clip(x, self.xs[0], self.xs[-1])
        base = self._antiderivative(clipped) - self._antiderivative(np.clip(0.0, self.xs[0], self.xs[-1]))
        base = base + np.where(x < self.xs[0], self._left * (x - self.xs[0]), 0.0)
        return base + np.where(x > self.xs[-1], self._right * (x - self.xs[-1]), 0.0)

    def support_radius(self) -> Tuple[float, float]:
        center = 0.5 * (self.xs[0] + self.xs[-1])
        return float(center), float(0.5 * (self.xs[-1] - self.xs[0]))


# -------- 規範化後的初始資料 --------
@dataclass(frozen=True)
class InitialDatum:
    """規範化後 x̊ = 0、ů(0) = 0 的初始資料"""

    raw: RawDatum
    x_crit_raw: float
    u_shift: float
    t0: float
    c_far: float
    L_support: float
    eps0: float
    window_xi: Tuple[float, float]
    beta_table: Dict[int, float] = field(default_factory=dict)
    x_crit: float = 0.0

    @property
    def name(self) -> str:
        return self.raw.name

    @property
    def beta3(self) -> float:
        return self.beta_table[3]

    @property
    def beta4(self) -> float:
        return self.beta_table.get(4, 0.0)

    def profile_params(self) -> ProfileParams:
        return ProfileParams(beta3=self.beta3, beta4=self.beta4)

    def value(self, x):
        return self.raw.derivative(np.asarray(x, dtype=float) + self.x_crit_raw, 0) - self.u_shift

    def derivative(self, x, n: int = 1):
        if n == 0:
            return self.value(x)
        return self.raw.derivative(np.asarray(x, dtype=float) + self.x_crit_raw, n)

    def primitive(self, x):
        """∫₀ˣ ů"""
        x = np.asarray(x, dtype=float)
        shifted = self.raw.primitive(x + self.x_crit_raw) - self.raw.primitive(self.x_crit_raw)
        return shifted - self.u_shift * x

    def value_range(self) -> Tuple[float, float]:
        """ů 值域的外包區間，作為特徵線腳點的括號"""
        return self._value_bounds

    @cached_property
    def _value_bounds(self) -> Tuple[float, float]:
        xs = np.linspace(-self.L_support, self.L_support, 8001)
        values = np.asarray(self.value(xs), dtype=float)
        extrema = []
        for sign, i in ((1.0, int(np.argmin(values))), (-1.0, int(np.argmax(values)))):
            best = float(values[i])
            a, b = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
            if b > a:
                res = minimize_scalar(
                    lambda z: sign * float(self.value(z)), bounds=(a, b), method="bounded", options={"xatol": 1e-13}
                )
                best = min(sign * best, float(res.fun)) * sign
            extrema.append(best)
        # 取樣極值只會偏向內側，兩端再放寬
        pad = VALUE_RANGE_PAD * (1.0 + max(abs(extrema[0]), abs(extrema[1])))
        return extrema[0] - pad, extrema[1] + pad

    def to_raw_frame(self, t, x, u=None):
        """把規範化座標的 (t, x, u) 映回原始座標"""
        t = np.asarray(t, dtype=float)
        x_raw = np.asarray(x, dtype=float) + self.x_crit_raw + self.u_shift * (t - self.t0)
        if u is None:
            return x_raw
        return x_raw, np.asarray(u, dtype=float) + self.u_shift

    def summary(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "t0": self.t0,
            "x_crit_raw": self.x_crit_raw,
            "u_shift": self.u_shift,
            "c_far": self.c_far,
            "L_support": self.L_support,
            "eps0": self.eps0,
            "beta": {str(k): v for k, v in sorted(self.beta_table.items())},
        }


def _series_inverse(a: np.ndarray, order: int) -> np.ndarray:
    """形式冪級數反演：y = Σ a_n xⁿ (a_0 = 0) → x = Σ b_n yⁿ"""
    b = np.zeros(order + 1)
    b[1] = 1.0 / a[1]
    for n in range(2, order + 1):
        power = np.zeros(order + 1)
        power[0] = 1.0
        composed = np.zeros(order + 1)
        for k in range(1, order + 1):
            power = np.convolve(power, b)[: order + 1]
            composed += a[k] * power
        b[n] = -composed[n] / a[1]
    return b


def _taylor_coefficients(raw: RawDatum, x0: float, order: int) -> np.ndarray:
    a = np.zeros(order + 1)
    for n in range(1, order + 1):
        a[n] = float(raw.derivative(x0, n)) / math.factorial(n)
    return a


def _locate_critical_point(raw: RawDatum) -> float:
    lo, hi = raw.search_range
    xs = np.arange(lo, hi + SAMPLE_STEP / 2, SAMPLE_STEP)
    slopes = np.asarray(raw.derivative(xs, 1), dtype=float)
    i = int(np.argmin(slopes))
    s_min = float(slopes[i])
    if s_min >= 0.0:
        raise NoShock("initial slope is never negative", datum=raw.name, min_slope=s_min)

    # 平坦但單一的極小值是連續的一段；分離的多段才算不唯一
    index = np.nonzero(slopes <= s_min + UNIQUE_MIN_TOL)[0]
    if index[-1] - index[0] + 1 != index.size:
        raise NonUniqueMin(
            "steepest point is not unique",
            datum=raw.name,
            first=float(xs[index[0]]),
            last=float(xs[index[-1]]),
        )

    a, b = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
    fa, fb = float(raw.derivative(a, 2)), float(raw.derivative(b, 2))
    if fa < 0.0 < fb:
        return float(brentq(lambda s: float(raw.derivative(s, 2)), a, b, xtol=1e-15, rtol=4.0 * EPS))
    res = minimize_scalar(lambda s: float(raw.derivative(s, 1)), bounds=(a, b), method="bounded", options={"xatol": 1e-12})
    return float(res.x)


def _window(raw: RawDatum, x_crit: float, u_shift: float, t0: float, reach: float) -> Tuple[float, float, float]:
    """最大 ε 使得 t = 0 時 −∂ₓu⁰ ≥ 1 於前像；等價於 ů′(ξ) ≤ −1/(1 + |t₀|)"""
    threshold = -1.0 / (1.0 + abs(t0))

    def g(xi: float) -> float:
        return float(raw.derivative(xi + x_crit, 1)) - threshold

    def edge(direction: float) -> float:
        prev = 0.0
        step = SAMPLE_STEP
        xi = direction * step
        while abs(xi) <= reach:
            if g(xi) > 0.0:
                return float(brentq(g, min(prev, xi), max(prev, xi), xtol=1e-14))
            prev = xi
            xi += direction * step
        return direction * reach

    def value(xi: float) -> float:
        return float(raw.derivative(xi + x_crit, 0)) - u_shift

    xi_minus, xi_plus = edge(-1.0), edge(1.0)
    eps0 = min(value(xi_minus), -value(xi_plus))

    # 對側端點縮回到 |ů| = ε₀
    if value(xi_minus) > eps0:
        xi_minus = float(brentq(lambda s: value(s) - eps0, xi_minus, 0.0, xtol=1e-15))
    if -value(xi_plus) > eps0:
        xi_plus = float(brentq(lambda s: value(s) + eps0, 0.0, xi_plus, xtol=1e-15))
    return eps0, xi_minus, xi_plus


def normalize_gauge(raw: RawDatum) -> InitialDatum:
    """驗證 (H3)(H4)，平移到 x̊ = ů(x̊) = 0 的規範，並計算 t₀、ε₀、β 表"""
    x_crit = _locate_critical_point(raw)
    min_slope = float(raw.derivative(x_crit, 1))
    third = float(raw.derivative(x_crit, 3))
    if third <= DEGENERACY_TOL:
        raise DegenerateShock("third derivative at the steepest point is not positive", datum=raw.name, third=third)

    t0 = 1.0 / min_slope
    u_shift = float(raw.derivative(x_crit, 0))
    center, radius = raw.support_radius()
    L_support = abs(center - x_crit) + radius

    eps0, xi_minus, xi_plus = _window(raw, x_crit, u_shift, t0, reach=max(L_support, 1.0))

    a = _taylor_coefficients(raw, x_crit, MAX_TAYLOR_ORDER)
    b = _series_inverse(a, MAX_TAYLOR_ORDER)
    beta_table = {3: float(-b[3])}
    beta_table.update({m: float(b[m]) for m in range(4, MAX_TAYLOR_ORDER + 1)})

    datum = InitialDatum(
        raw=raw,
        x_crit_raw=x_crit,
        u_shift=u_shift,
        t0=t0,
        c_far=raw.far_value - u_shift,
        L_support=L_support,
        eps0=eps0,
        window_xi=(xi_minus, xi_plus),
        beta_table=beta_table,
    )
    logger.info(
        "datum_normalized",
        datum=raw.name,
        t0=t0,
        x_crit_raw=x_crit,
        beta3=beta_table[3],
        beta4=beta_table[4],
        eps0=eps0,
        L_support=L_support,
    )
    return datum


def inverse_on_window(d: InitialDatum, y):
    """ω̊(y)：ů 在窗口內的反函數，|y| < ε₀"""
    y_arr = np.asarray(y, dtype=float)
    if np.any(np.abs(y_arr) >= d.eps0):
        raise OutOfWindow("value outside the hodograph window", eps0=d.eps0, y_max=float(np.max(np.abs(y_arr))))
    lo, hi = d.window_xi
    xi = bracketed_newton(
        lambda s: d.value(s) - y_arr,
        lambda s: d.derivative(s, 1),
        np.full(y_arr.shape, lo),
        np.full(y_arr.shape, hi),
        x0=d.t0 * y_arr,
    )
    return float(xi) if np.ndim(xi) == 0 else xi


def taylor_of_inverse(d: InitialDatum, order: int) -> Tuple[float, ...]:
    """(β₃, …, β_M)，符號約定 ω̊(y) = t₀y − β₃y³ + Σ β_m y^m"""
    if not 3 <= order <= MAX_TAYLOR_ORDER:
        raise InvalidInput("taylor order out of range", order=order)
    a = _taylor_coefficients(d.raw, d.x_crit_raw, order)
    b = _series_inverse(a, order)
    return (float(-b[3]),) + tuple(float(b[m]) for m in range(4, order + 1))


def beta3_from_third_derivative(d: InitialDatum) -> float:
    """β₃ = (1/6) t₀⁴ ∂ₓ³ů(0)，與級數反演互相核對"""
    return d.t0**4 * float(d.derivative(0.0, 3)) / 6.0


# -------- 內建資料登錄 --------
BUILTIN_DATA = {
    "gaussian-odd": lambda: GaussianPolyDatum("gaussian-odd", [0.0, -1.0]),
    "gaussian-skew": lambda: GaussianPolyDatum("gaussian-skew", [0.0, -1.0, 0.2]),
    "compact": lambda: PolynomialBumpDatum("compact", radius=2.0, power=8),
}


@lru_cache(maxsize=None)
def load_datum(name: str) -> InitialDatum:
    """依名稱載入內建資料並規範化"""
    factory = BUILTIN_DATA.get(name)
    if factory is None:
        raise ConfigError("unknown datum", datum=name, known=",".join(sorted(BUILTIN_DATA)))
    return normalize_gauge(factory())


def load_tabulated(path: Path, name: Optional[str] = None) -> InitialDatum:
    """讀取 (x, ů(x)) 表格檔（CSV，可含標題列）"""
    try:
        table = np.genfromtxt(path, delimiter=",", comments="#", dtype=float)
    except OSError as e:
        raise ConfigError("cannot read datum table", path=str(path), error=str(e))
    table = table[~np.any(np.isnan(np.atleast_2d(table)), axis=1)] if table.ndim == 2 else table
    if table.ndim != 2 or table.shape[1] < 2:
        raise ConfigError("datum table needs two columns x,value", path=str(path))
    return normalize_gauge(TabulatedDatum(name or Path(path).stem, table[:, 0], table[:, 1]))
