"""
外部展開模組
u^out_[K] = u⁰ + [K = 1]·ν·u⁽¹⁾
"""

from __future__ import annotations

import numpy as np

from ..models.errors import InvalidInput, WindowRequired
from ..models.profile import ProfileParams, Scalar
from .data import InitialDatum
from .inviscid import characteristic_state
from .profile import eval_profile


def _as_output(a) -> Scalar:
    return float(a) if np.ndim(a) == 0 else a


def u1_exact(d: InitialDatum, t, x, strict_window: bool = False) -> Scalar:
    """
    第一修正項 u⁽¹⁾ = −∂ₓ²u⁰/∂ₓu⁰ + f(u⁰)·∂ₓu⁰，f = (ů″/ů′²)∘ω̊

    窗口內以 hodograph 形式計算；窗口外沿特徵線傳遞，
    兩者相等於 (t − t₀)ů″(ξ)/J²
    """
    st = characteristic_state(d, t, x)
    if np.any(st.t >= 0.0):
        raise InvalidInput("first corrector needs t < 0")

    slope0 = d.derivative(st.xi, 1)
    curv0 = d.derivative(st.xi, 2)
    xi_minus, xi_plus = d.window_xi
    in_window = (st.xi > xi_minus) & (st.xi < xi_plus) & ~st.far
    if strict_window and np.any(~in_window & ~st.far):
        raise WindowRequired("point lies outside the hodograph window", eps0=d.eps0)

    with np.errstate(divide="ignore", invalid="ignore"):
        # hodograph：ω_y = 1/ů′ + s，ω_yy = −ů″/ů′³
        w_y = 1.0 / slope0 + st.elapsed
        w_yy = -curv0 / slope0**3
        u_x = 1.0 / w_y
        u_xx = -w_yy / w_y**3
        f = curv0 / slope0**2
        hodograph = -u_xx / u_x + f * u_x

    transported = st.elapsed * curv0 / st.jacobian**2
    u1 = np.where(in_window & np.isfinite(hodograph), hodograph, transported)
    return _as_output(np.where(st.far, 0.0, u1))


def u10_closed_form(params: ProfileParams, t, x) -> Scalar:
    """純三次資料的 u_{1,0} = −6β₃𝔲𝔪²"""
    p = eval_profile(params, t, x)
    return _as_output(-6.0 * params.beta3 * np.asarray(p.u) * np.asarray(p.m) ** 2)


def outer_sum(d: InitialDatum, K: int, nu: float, t, x) -> Scalar:
    """外部部分和 u^out_[K]"""
    if K not in (0, 1):
        raise InvalidInput("outer order must be 0 or 1", K=K)
    if not nu > 0.0:
        raise InvalidInput("viscosity must be positive", nu=nu)
    u0 = np.asarray(characteristic_state(d, t, x).u)
    if K == 1:
        u0 = u0 + nu * np.asarray(u1_exact(d, t, x))
    return _as_output(u0)
