"""
無黏熵解模組
[t₀, 0] 上以特徵線／hodograph 變換求 u⁰，並提供原點附近的同質展開
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..models.errors import CharacteristicsCrossed, InvalidInput, OutOfWindow
from ..models.profile import ProfileParams, Scalar
from ..utils.numerics import bracketed_newton
from .data import InitialDatum, inverse_on_window
from .profile import eval_profile

BRACKET_SLACK = 1e-12


def _as_output(a) -> Scalar:
    return float(a) if np.ndim(a) == 0 else a


@dataclass(frozen=True)
class CharacteristicState:
    """(t, x) 所在特徵線：腳點 ξ、值 u = ů(ξ)、Jacobian J = 1 + (t − t₀)ů′(ξ)"""

    t: np.ndarray
    x: np.ndarray
    xi: np.ndarray
    u: np.ndarray
    jacobian: np.ndarray
    far: np.ndarray
    elapsed: np.ndarray


def _check_time(d: InitialDatum, t: np.ndarray) -> None:
    if np.any(t < d.t0 - 1e-14):
        raise InvalidInput("time before the initial time", t_min=float(np.min(t)), t0=d.t0)
    if np.any(t > 0.0):
        raise CharacteristicsCrossed("characteristics cross after the shock time", t_max=float(np.max(t)))


def window_image(d: InitialDatum, t: float) -> Tuple[float, float]:
    """窗口 𝔅 在時間 t 的前像 𝒜_t 端點 (ω(t, ε₀), ω(t, −ε₀))"""
    s = t - d.t0
    xi_minus, xi_plus = d.window_xi
    return xi_minus + s * d.eps0, xi_plus - s * d.eps0


def characteristic_state(d: InitialDatum, t, x) -> CharacteristicState:
    """逐點解 ξ + (t − t₀)ů(ξ) = x"""
    t_arr, x_arr = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    t_arr, x_arr = t_arr.astype(float), x_arr.astype(float)
    if not (np.all(np.isfinite(t_arr)) and np.all(np.isfinite(x_arr))):
        raise InvalidInput("inputs must be finite")
    _check_time(d, t_arr)

    s = t_arr - d.t0
    far = np.abs(x_arr - d.c_far * s) >= d.L_support
    u_min, u_max = d.value_range()

    # 一般括號：ů 的值域決定腳點範圍，外放捨入量級
    slack = BRACKET_SLACK * (1.0 + np.abs(x_arr))
    lo = x_arr - s * u_max - slack
    hi = x_arr - s * u_min + slack

    # 落在 hodograph 窗口前像內的點，括號縮到窗口
    xi_minus, xi_plus = d.window_xi
    a_lo = xi_minus + s * d.eps0
    a_hi = xi_plus - s * d.eps0
    inside = (x_arr > a_lo) & (x_arr < a_hi) & ~far
    lo = np.where(inside, np.maximum(lo, xi_minus), lo)
    hi = np.where(inside, np.minimum(hi, xi_plus), hi)

    seed = x_arr - d.c_far * s
    xi = np.array(seed, copy=True)
    active = ~far
    if np.any(active):
        sa = s[active]
        xa = x_arr[active]
        xi[active] = bracketed_newton(
            lambda z: z + sa * d.value(z) - xa,
            lambda z: 1.0 + sa * d.derivative(z, 1),
            lo[active],
            hi[active],
            x0=np.clip(seed[active], lo[active], hi[active]),
            xtol=1e-15,
        )

    jac = 1.0 + s * d.derivative(xi, 1)
    if np.any(jac[active] < 0.0):
        raise CharacteristicsCrossed("characteristic map is not monotone", jac_min=float(np.min(jac)))
    u = np.where(far, d.c_far, d.value(xi))
    return CharacteristicState(t=t_arr, x=x_arr, xi=xi, u=u, jacobian=jac, far=far, elapsed=s)


def omega(d: InitialDatum, t: float, y):
    """hodograph 變換 ω(t, y) = ω̊(y) + (t − t₀)y"""
    if not d.t0 <= t <= 0.0:
        raise InvalidInput("omega is defined on [t0, 0]", t=t)
    y_arr = np.asarray(y, dtype=float)
    if np.any(np.abs(y_arr) >= d.eps0):
        raise OutOfWindow("value outside the hodograph window", eps0=d.eps0)
    return _as_output(np.asarray(inverse_on_window(d, y_arr)) + (t - d.t0) * y_arr)


def entropy_solution(d: InitialDatum, t, x) -> Scalar:
    """熵解 u⁰(t, x)，t ∈ [t₀, 0]"""
    return _as_output(characteristic_state(d, t, x).u)


def entropy_slope(d: InitialDatum, t, x) -> Scalar:
    """∂ₓu⁰ = ů′(ξ)/J"""
    st = characteristic_state(d, t, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(st.far, 0.0, d.derivative(st.xi, 1) / st.jacobian)
    return _as_output(slope)


def entropy_curvature(d: InitialDatum, t, x) -> Scalar:
    """∂ₓ²u⁰ = ů″(ξ)/J³，即 −∂_y²ω/(∂_yω)³"""
    st = characteristic_state(d, t, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        curv = np.where(st.far, 0.0, d.derivative(st.xi, 2) / st.jacobian**3)
    return _as_output(curv)


def max_slope(d: InitialDatum, t: float) -> float:
    """‖∂ₓu⁰(t, ·)‖∞，沿腳點 ξ 最大化 |ů′(ξ)|/J(ξ)"""
    if not d.t0 <= t < 0.0:
        raise InvalidInput("max_slope needs t in [t0, 0)", t=t)
    s = t - d.t0

    def neg(xi):
        return -np.abs(d.derivative(xi, 1)) / (1.0 + s * d.derivative(xi, 1))

    grid = np.linspace(-d.L_support, d.L_support, 20001)
    values = neg(grid)
    i = int(np.argmin(values))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(lambda z: float(neg(z)), bounds=(a, b), method="bounded", options={"xatol": 1e-13})
    return float(max(-res.fun, -values[i]))


def u0_homog_components(params: ProfileParams, t, x) -> Tuple[Scalar, Scalar]:
    """u_{0,0} = 𝔲 與 u_{0,1} = β₄𝔲⁴𝔪"""
    if np.any(np.asarray(t) >= 0.0):
        raise InvalidInput("homogeneous components need t < 0")
    p = eval_profile(params, t, x)
    u = np.asarray(p.u)
    return _as_output(u), _as_output(params.beta4 * u**4 * np.asarray(p.m))
