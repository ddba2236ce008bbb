"""
複合近似模組
u^app = θ·u^in + (1 − θ)·u^out，θ = ϑ(𝔡·ν^{−α})
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..models.config import ApproxConfig, Zone
from ..models.errors import InvalidInput
from ..models.profile import ProfileParams, Scalar
from ..utils.numerics import diff1, diff2
from .data import InitialDatum
from .inner import inner_term_physical
from .inviscid import entropy_curvature, entropy_solution
from .outer import outer_sum
from .profile import eval_profile

FD_FLOOR = 1e-5
FD_FRACTION = 1e-3


def _as_output(a) -> Scalar:
    return float(a) if np.ndim(a) == 0 else a


def _bump(s: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(s > 0.0, np.exp(-1.0 / np.where(s > 0.0, s, 1.0)), 0.0)


def smooth_step(s) -> Scalar:
    """ϑ(s)：s ≤ 1 為 1，s ≥ 2 為 0，中間 C^∞ 單調遞減"""
    s = np.asarray(s, dtype=float)
    a = _bump(2.0 - s)
    b = _bump(s - 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        mid = a / (a + b)
    value = np.where(s <= 1.0, 1.0, np.where(s >= 2.0, 0.0, mid))
    return _as_output(value)


def cutoff_theta(cfg: ApproxConfig, params: ProfileParams, t, x) -> Scalar:
    p = eval_profile(params, t, x)
    return smooth_step(np.asarray(p.d) * cfg.nu ** (-cfg.alpha))


def classify_zone(cfg: ApproxConfig, params: ProfileParams, t: float, x: float) -> Zone:
    """與 cutoff_theta 同一比例 s = 𝔡ν^{−α}：θ = 1 即 I，θ = 0 即 O"""
    s = float(eval_profile(params, t, x).d) * cfg.nu ** (-cfg.alpha)
    if s <= 1.0:
        return Zone.INNER
    if s >= 2.0:
        return Zone.OUTER
    return Zone.MATCHING


def _composite(cfg: ApproxConfig, d: InitialDatum, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    params = d.profile_params()
    theta = np.asarray(cutoff_theta(cfg, params, t, x), dtype=float)
    out = np.zeros(theta.shape)

    need_outer = theta < 1.0
    if np.any(need_outer):
        out[need_outer] = (1.0 - theta[need_outer]) * np.asarray(
            outer_sum(d, cfg.K, cfg.nu, t[need_outer], x[need_outer])
        )
    need_inner = theta > 0.0
    if np.any(need_inner):
        out[need_inner] += theta[need_inner] * np.asarray(
            inner_term_physical(params, cfg.nu, t[need_inner], x[need_inner], cfg.quad_tol)
        )
    return out


def u_app(cfg: ApproxConfig, d: InitialDatum, t, x) -> Scalar:
    """複合近似；內部只取 U₀ 項，外部取到 cfg.K 階"""
    t_arr, x_arr = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    t_arr = np.atleast_1d(t_arr).astype(float)
    x_arr = np.atleast_1d(x_arr).astype(float)
    if np.any(t_arr < d.t0) or np.any(t_arr > -cfg.eps_t):
        raise InvalidInput("composite approximation is evaluated on [t0, -eps_t]", t0=d.t0, eps_t=cfg.eps_t)
    out = _composite(cfg, d, t_arr, x_arr)
    return float(out[0]) if np.ndim(t) == 0 and np.ndim(x) == 0 else out.reshape(np.broadcast(np.asarray(t), np.asarray(x)).shape)


def _steps(cfg: ApproxConfig, d: InitialDatum, t: float, x: float):
    dd = float(eval_profile(d.profile_params(), t, x).d)
    h_x = max(FD_FLOOR, FD_FRACTION * dd**3)
    h_t = max(FD_FLOOR, FD_FRACTION * dd**2)
    h_t = min(h_t, abs(t) / 4.0, (t - d.t0) / 4.0)
    return h_x, h_t


def residual_E(cfg: ApproxConfig, d: InitialDatum, t: float, x: float) -> float:
    """E = −(∂ₜu^app + u^app·∂ₓu^app − ν∂ₓ²u^app)，五點差分；只支援 K = 0"""
    if cfg.K != 0:
        raise InvalidInput("residual is only defined for K = 0", K=cfg.K)
    if not d.t0 < t < 0.0:
        raise InvalidInput("residual needs t in (t0, 0)", t=t)
    h_x, h_t = _steps(cfg, d, t, x)

    def at(ts, xs) -> float:
        return float(_composite(cfg, d, np.atleast_1d(np.asarray(ts, dtype=float)), np.atleast_1d(np.asarray(xs, dtype=float)))[0])

    u = at(t, x)
    u_t = diff1(lambda s: at(s, x), t, h_t)
    u_x = diff1(lambda s: at(t, s), x, h_x)
    u_xx = diff2(lambda s: at(t, s), x, h_x)
    return -(u_t + u * u_x - cfg.nu * u_xx)


def residual_E_closed_form(cfg: ApproxConfig, d: InitialDatum, t: float, x: float) -> Optional[float]:
    """I 區為 0、O 區為 ν∂ₓ²u⁰；M 區沒有封閉形式"""
    zone = classify_zone(cfg, d.profile_params(), t, x)
    if zone is Zone.INNER:
        return 0.0
    if zone is Zone.OUTER:
        return cfg.nu * float(entropy_curvature(d, t, x))
    return None


def mismatch(cfg: ApproxConfig, d: InitialDatum, t, x) -> Scalar:
    """|u^in_0 − u⁰|"""
    inner = np.asarray(inner_term_physical(d.profile_params(), cfg.nu, t, x, cfg.quad_tol))
    outer = np.asarray(entropy_solution(d, t, x))
    return _as_output(np.abs(inner - outer))

