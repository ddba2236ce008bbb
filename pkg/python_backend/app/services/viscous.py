"""
黏性參考解模組
Cole–Hopf 求積（主要參考）與 MUSCL 有限體積法（交叉驗證）
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from numba import njit
from scipy.integrate import quad

from ..models.errors import InvalidInput, NuTooSmall, ToleranceNotMet, UnstableParameters
from ..models.field import FieldSample
from ..utils.logger import get_logger
from .data import InitialDatum
from .inviscid import characteristic_state

logger = get_logger()

MIN_NU = 1e-7
TAIL_MARGIN = 40.0
QUAD_LIMIT = 500
MAX_CFL = 0.4
MIN_EPSREL = 50.0 * np.finfo(float).eps


# -------- Cole–Hopf --------
def _check_nu(nu: float) -> None:
    if not nu > 0.0:
        raise InvalidInput("viscosity must be positive", nu=nu)
    if nu < MIN_NU:
        raise NuTooSmall("viscosity below the quadrature floor", nu=nu, floor=MIN_NU)


def _quad(fn, a: float, b: float, center: float, epsabs: float, epsrel: float) -> float:
    result = quad(fn, a, b, points=[center], epsabs=epsabs, epsrel=epsrel, limit=QUAD_LIMIT, full_output=1)
    if len(result) > 3:
        raise ToleranceNotMet("cole-hopf quadrature did not converge", detail=str(result[3]))
    return float(result[0])


def _colehopf_point(d: InitialDatum, nu: float, s: float, x: float, z_star: float, tol: float) -> Tuple[float, float]:
    """回傳 (u, Φ)，Φ = −2ν ln ∫ exp(−G/(2ν))，G(z) = (x − z)²/(2s) + P(z)"""

    def G(z):
        return (x - z) ** 2 / (2.0 * s) + float(d.primitive(z))

    g_star = G(z_star)
    level = 2.0 * nu * (math.log(1.0 / tol) + TAIL_MARGIN)

    # G 在 t ≤ 0 為凸函數，兩側倍增直到超過截斷門檻
    def reach(direction: float) -> float:
        w = math.sqrt(2.0 * s * level) + 1e-12
        for _ in range(80):
            if G(z_star + direction * w) - g_star >= level:
                return w
            w *= 2.0
        raise ToleranceNotMet("cole-hopf truncation did not close", x=x, s=s)

    left, right = reach(-1.0), reach(1.0)
    a, b = z_star - left, z_star + right
    epsrel = max(tol, MIN_EPSREL)

    def weight(z: float) -> float:
        return math.exp(-(G(z) - g_star) / (2.0 * nu))

    m0 = _quad(weight, a, b, z_star, 0.0, epsrel)
    m1 = _quad(lambda z: (z - z_star) * weight(z), a, b, z_star, tol * m0 * max(left, right), epsrel)
    u = (x - z_star - m1 / m0) / s
    potential = g_star - 2.0 * nu * math.log(m0)
    return u, potential


def _colehopf(d: InitialDatum, nu: float, t: float, x, tol: float, want_potential: bool):
    _check_nu(nu)
    if not d.t0 <= t <= 0.0:
        raise InvalidInput("cole-hopf reference is evaluated on [t0, 0]", t=t)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    s = t - d.t0
    if s == 0.0:
        if want_potential:
            return np.asarray(d.primitive(x_arr), dtype=float)
        return np.asarray(d.value(x_arr), dtype=float)

    feet = characteristic_state(d, t, x_arr).xi
    out = np.empty(x_arr.shape)
    for i, (xi_, foot) in enumerate(zip(x_arr, feet)):
        u, potential = _colehopf_point(d, nu, s, float(xi_), float(foot), tol)
        out[i] = potential if want_potential else u
    return out


def reference_colehopf(d: InitialDatum, nu: float, t: float, x, tol: float = 1e-12):
    """u^ν(t, x) 的 Cole–Hopf 求積"""
    out = _colehopf(d, nu, t, x, tol, want_potential=False)
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def colehopf_potential(d: InitialDatum, nu: float, t: float, x, tol: float = 1e-12) -> np.ndarray:
    """Φ(t, x) = −2ν ln φ，∂ₓΦ = u^ν；只有差值有意義"""
    return _colehopf(d, nu, t, x, tol, want_potential=True)


def colehopf_cell_averages(d: InitialDatum, nu: float, t: float, edges, tol: float = 1e-12) -> np.ndarray:
    """以 Φ 的差分得到精確網格平均"""
    edges = np.asarray(edges, dtype=float)
    phi = colehopf_potential(d, nu, t, edges, tol)
    return np.diff(phi) / np.diff(edges)


# -------- 有限體積 --------
@njit(cache=True)
def _mc_slope(dm: float, dp: float) -> float:
    if dm * dp <= 0.0:
        return 0.0
    c = 0.5 * (dm + dp)
    sign = 1.0 if c > 0.0 else -1.0
    return sign * min(abs(c), 2.0 * abs(dm), 2.0 * abs(dp))


@njit(cache=True)
def _rhs(u, c_far, dx, nu, out):
    n = u.size
    ext = np.empty(n + 4)
    ext[0] = c_far
    ext[1] = c_far
    ext[n + 2] = c_far
    ext[n + 3] = c_far
    ext[2 : n + 2] = u

    slope = np.zeros(n + 4)
    for i in range(1, n + 3):
        slope[i] = _mc_slope(ext[i] - ext[i - 1], ext[i + 1] - ext[i])

    # 介面 i+1/2 位於 ext[i] 與 ext[i+1] 之間
    flux = np.empty(n + 1)
    for k in range(n + 1):
        i = k + 1
        ul = ext[i] + 0.5 * slope[i]
        ur = ext[i + 1] - 0.5 * slope[i + 1]
        a = max(abs(ul), abs(ur))
        convective = 0.25 * (ul * ul + ur * ur) - 0.5 * a * (ur - ul)
        viscous = -nu * (ext[i + 1] - ext[i]) / dx
        flux[k] = convective + viscous

    for j in range(n):
        out[j] = -(flux[j + 1] - flux[j]) / dx


@njit(cache=True)
def _advance(u, c_far, dx, nu, dt, steps):
    k = np.empty(u.size)
    for _ in range(steps):
        _rhs(u, c_far, dx, nu, k)
        u1 = u + dt * k
        _rhs(u1, c_far, dx, nu, k)
        u2 = 0.75 * u + 0.25 * (u1 + dt * k)
        _rhs(u2, c_far, dx, nu, k)
        u = u / 3.0 + 2.0 / 3.0 * (u2 + dt * k)
    return u


def reference_fv(
    d: InitialDatum,
    nu: float,
    t_end: float,
    cells: int,
    half_width: float,
    cfl: float = 0.3,
) -> FieldSample:
    """MUSCL（MC 限制器）+ 局部 Lax–Friedrichs + 中央差分黏性，SSP-RK3 推進到 t_end"""
    if not nu > 0.0:
        raise InvalidInput("viscosity must be positive", nu=nu)
    if cells < 8:
        raise InvalidInput("need at least 8 cells", cells=cells)
    if not t_end > d.t0:
        raise InvalidInput("t_end must be after the initial time", t_end=t_end, t0=d.t0)
    if not 0.0 < cfl <= MAX_CFL:
        raise UnstableParameters("cfl number outside (0, 0.4]", cfl=cfl)
    elapsed = t_end - d.t0
    needed = d.L_support + abs(d.c_far) * elapsed + 10.0 * math.sqrt(nu * abs(d.t0))
    if half_width < needed:
        raise UnstableParameters("domain too small for the boundary data", half_width=half_width, needed=needed)

    edges = np.linspace(-half_width, half_width, cells + 1)
    dx = float(edges[1] - edges[0])
    centers = 0.5 * (edges[:-1] + edges[1:])
    u = np.diff(np.asarray(d.primitive(edges), dtype=float)) / dx

    u_min, u_max = d.value_range()
    speed = max(abs(u_min), abs(u_max), 1e-12)
    dt_max = cfl * min(dx / speed, dx * dx / (2.0 * nu))
    steps = int(math.ceil(elapsed / dt_max))
    dt = elapsed / steps

    logger.info("fv_start", datum=d.name, nu=nu, cells=cells, steps=steps, dt=dt)
    u = _advance(u, d.c_far, dx, nu, dt, steps)
    logger.info("fv_done", datum=d.name, nu=nu, cells=cells)
    return FieldSample(field="u_nu_fv", t=np.array([t_end]), x=centers, values=u[np.newaxis, :], nu=nu)


def fv_edges(sample: FieldSample) -> np.ndarray:
    """由網格中心還原等距網格邊界"""
    x = sample.x
    dx = float(x[1] - x[0])
    return np.concatenate([x - 0.5 * dx, [x[-1] + 0.5 * dx]])
