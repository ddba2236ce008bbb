"""
內部展開模組
U₀(T, X) = −M₁/M₀，M_k = ∫ ζᵏ exp(Xζ/2 + Tζ²/4 − β₃ζ⁴/8) dζ
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.integrate import quad

from ..models.errors import InvalidInput, ToleranceNotMet
from ..models.profile import ProfileParams, Scalar

# 截斷時額外保留的指數餘裕
TAIL_MARGIN = 40.0
QUAD_LIMIT = 500
MIN_EPSREL = 50.0 * np.finfo(float).eps


@dataclass(frozen=True)
class QuarticLaplaceIntegrand:
    """ζᵏ exp(Xζ/2 + Tζ²/4 − β₃ζ⁴/8)"""

    T: float
    X: float
    beta3: float
    moment: int = 0

    def exponent(self, z):
        return 0.5 * self.X * z + 0.25 * self.T * z * z - 0.125 * self.beta3 * z**4

    def critical_points(self) -> np.ndarray:
        """β₃ζ³ − Tζ − X = 0 的實根"""
        roots = np.roots([self.beta3, 0.0, -self.T, -self.X])
        scale = max(1.0, float(np.max(np.abs(roots))))
        real = roots[np.abs(roots.imag) <= 1e-6 * scale].real
        return np.sort(real)

    def peak(self) -> Tuple[np.ndarray, float]:
        crit = self.critical_points()
        g = self.exponent(crit)
        return crit, float(np.max(g))

    def truncation(self, tol: float) -> float:
        """|ζ| 超過此值後指數已低於峰值 ln(1/tol) + 40"""
        level = math.log(1.0 / tol) + TAIL_MARGIN
        roots = np.roots([0.125 * self.beta3, 0.0, -0.25 * abs(self.T), -0.5 * abs(self.X), -level])
        real = roots[np.abs(roots.imag) <= 1e-9 * max(1.0, float(np.max(np.abs(roots))))].real
        return float(np.max(real[real > 0]))


def _validate(beta3: float, T: float, X: float, tol: float) -> None:
    if not (np.isfinite(T) and np.isfinite(X)):
        raise InvalidInput("inner coordinates must be finite", T=T, X=X)
    if not beta3 > 0:
        raise InvalidInput("beta3 must be positive", beta3=beta3)
    if not 0.0 < tol < 1.0:
        raise InvalidInput("tolerance must lie in (0, 1)", tol=tol)


def _shifted_moments(q: QuarticLaplaceIntegrand, orders: Tuple[int, ...], tol: float) -> Tuple[Tuple[float, ...], float]:
    """回傳 exp(−g_max)·M_k 與 g_max"""
    _validate(q.beta3, q.T, q.X, tol)
    crit, g_max = q.peak()
    bound = q.truncation(tol)
    points = []
    for c in crit:
        if -bound < c < bound and all(abs(c - p) > 1e-9 for p in points):
            points.append(float(c))
    epsrel = max(tol, MIN_EPSREL)

    def integrate(k: int, epsabs: float) -> float:
        def integrand(z: float) -> float:
            return z**k * math.exp(q.exponent(z) - g_max)

        result = quad(
            integrand,
            -bound,
            bound,
            points=points or None,
            epsabs=epsabs,
            epsrel=epsrel,
            limit=QUAD_LIMIT,
            full_output=1,
        )
        if len(result) > 3:
            raise ToleranceNotMet(
                "quadrature did not reach the requested tolerance",
                T=q.T,
                X=q.X,
                moment=k,
                detail=str(result[3]),
            )
        return float(result[0])

    m0 = integrate(0, 0.0)
    reach = max(1.0, float(np.max(np.abs(crit))))
    values = []
    for k in orders:
        values.append(m0 if k == 0 else integrate(k, tol * m0 * reach**k))
    return tuple(values), g_max


def quartic_laplace(q: QuarticLaplaceIntegrand, tol: float = 1e-12) -> float:
    """M_k 本身（未平移）"""
    (value,), g_max = _shifted_moments(q, (q.moment,), tol)
    return value * math.exp(g_max)


def _U0_scalar(beta3: float, T: float, X: float, tol: float) -> float:
    (m0, m1), _ = _shifted_moments(QuarticLaplaceIntegrand(T, X, beta3), (0, 1), tol)
    return -m1 / m0


def _U0_dX_scalar(beta3: float, T: float, X: float, tol: float) -> float:
    (m0, m1, m2), _ = _shifted_moments(QuarticLaplaceIntegrand(T, X, beta3), (0, 1, 2), tol)
    mean = m1 / m0
    return -0.5 * (m2 / m0 - mean * mean)


def _vectorized(fn, params: ProfileParams, T, X, tol: float) -> Scalar:
    T_arr, X_arr = np.broadcast_arrays(np.asarray(T, dtype=float), np.asarray(X, dtype=float))
    if T_arr.ndim == 0:
        return fn(params.beta3, float(T_arr), float(X_arr), tol)
    out = np.empty(T_arr.shape)
    for idx in np.ndindex(T_arr.shape):
        out[idx] = fn(params.beta3, float(T_arr[idx]), float(X_arr[idx]), tol)
    return out


def U0(params: ProfileParams, T, X, tol: float = 1e-12) -> Scalar:
    """首階內部剖面 U₀(T, X) = −M₁/M₀"""
    return _vectorized(_U0_scalar, params, T, X, tol)


def U0_dX(params: ProfileParams, T, X, tol: float = 1e-12) -> Scalar:
    """∂_X U₀ = −(M₂/M₀ − (M₁/M₀)²)/2，恆為負"""
    return _vectorized(_U0_dX_scalar, params, T, X, tol)


def inner_term_physical(params: ProfileParams, nu: float, t, x, tol: float = 1e-12) -> Scalar:
    """u^in_0(t, x) = ν^{1/4}·U₀(ν^{-1/2}t, ν^{-3/4}x)"""
    if not nu > 0.0:
        raise InvalidInput("viscosity must be positive", nu=nu)
    T = np.asarray(t, dtype=float) / math.sqrt(nu)
    X = np.asarray(x, dtype=float) / nu**0.75
    value = U0(params, T, X, tol)
    return nu**0.25 * value


def shock_half_strength(beta3: float, t: float) -> float:
    """t ≥ 0 時激波兩側跳躍的一半 √(t/β₃)"""
    if t < 0.0:
        raise InvalidInput("shock strength is defined for t >= 0", t=t)
    return math.sqrt(t / beta3)


def tanh_profile(params: ProfileParams, T: float, xi) -> Scalar:
    """T → +∞ 的黏性激波剖面 −√(T/β₃)·tanh(ξ/(2√β₃))"""
    if not T > 0.0:
        raise InvalidInput("tanh profile needs T > 0", T=T)
    xi = np.asarray(xi, dtype=float)
    value = -math.sqrt(T / params.beta3) * np.tanh(xi / (2.0 * math.sqrt(params.beta3)))
    return float(value) if value.ndim == 0 else value


def tanh_deviation(params: ProfileParams, T: float, xis, tol: float = 1e-12) -> float:
    """max |U₀(T, T^{-1/2}ξ)/tanh 剖面 − 1|，略過 ξ = 0"""
    xis = np.asarray(xis, dtype=float)
    xis = xis[np.abs(xis) > 1e-8]
    if xis.size == 0:
        raise InvalidInput("need at least one nonzero xi")
    ref = np.asarray(tanh_profile(params, T, xis))
    actual = np.asarray(U0(params, np.full(xis.shape, T), xis / math.sqrt(T), tol))
    return float(np.max(np.abs(actual / ref - 1.0)))
