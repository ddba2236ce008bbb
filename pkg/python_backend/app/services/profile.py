"""
三次剖面模組
𝔲 為 t𝔲 − β₃𝔲³ = x 的唯一實根，𝔪 = (|t| + 3β₃𝔲²)⁻¹，𝔡 = 𝔪^{-1/2}
導數以 (𝔲, 𝔪) 單項式表展開，係數為有理數乘上 β₃ 的冪次
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from ..models.errors import InvalidInput, UnsupportedOrder
from ..models.profile import ProfileParams, ProfilePoint, Scalar

# (a, b, k) -> 係數，代表 coeff · 𝔲^a 𝔪^b β₃^k
Monomials = Dict[Tuple[int, int, int], Fraction]

MAX_SPATIAL_ORDER = 3
MAX_TEMPORAL_ORDER = 1

_ORIGIN_RADIUS = 1e-300


def _as_output(a: np.ndarray) -> Scalar:
    return float(a) if np.ndim(a) == 0 else a


def _cubic_root(beta3: float, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """t ≤ 0 時 β₃u³ − tu + x = 0 只有一個實根；用 sinh 形式避開 Cardano 的相消"""
    p = -t / beta3
    q = x / beta3
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        s = np.sqrt(p / 3.0)
        u = -2.0 * s * np.sinh(np.arcsinh(q / (2.0 * s**3)) / 3.0)
    degenerate = (p == 0.0) | ~np.isfinite(u)
    u = np.where(degenerate, -np.cbrt(q), u)

    # 一步牛頓修正
    g = t * u - beta3 * u**3 - x
    gp = t - 3.0 * beta3 * u**2
    with np.errstate(divide="ignore", invalid="ignore"):
        polished = u - g / gp
    u = np.where((gp != 0.0) & np.isfinite(polished), polished, u)

    return np.where(np.abs(t) + np.abs(x) < _ORIGIN_RADIUS, 0.0, u)


def eval_profile(params: ProfileParams, t, x) -> ProfilePoint:
    """計算 (t, x) 上的 𝔲、𝔪、𝔡；t 必須 ≤ 0"""
    t_arr, x_arr = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    if not (np.all(np.isfinite(t_arr)) and np.all(np.isfinite(x_arr))):
        raise InvalidInput("profile inputs must be finite")
    if np.any(t_arr > 0.0):
        raise InvalidInput("profile is only defined for t <= 0", t_max=float(np.max(t_arr)))

    u = _cubic_root(params.beta3, t_arr, x_arr)
    denom = np.abs(t_arr) + 3.0 * params.beta3 * u**2
    with np.errstate(divide="ignore"):
        m = 1.0 / denom
    d = np.sqrt(denom)
    return ProfilePoint(
        t=_as_output(t_arr),
        x=_as_output(x_arr),
        u=_as_output(u),
        m=_as_output(m),
        d=_as_output(d),
    )


def _add(poly: Monomials, key: Tuple[int, int, int], coeff: Fraction) -> None:
    value = poly.get(key, Fraction(0)) + coeff
    if value == 0:
        poly.pop(key, None)
    else:
        poly[key] = value


def _dx(poly: Monomials) -> Monomials:
    # ∂ₓ𝔲 = −𝔪, ∂ₓ𝔪 = 6β₃𝔲𝔪³
    out: Monomials = {}
    for (a, b, k), c in poly.items():
        if a:
            _add(out, (a - 1, b + 1, k), -a * c)
        if b:
            _add(out, (a + 1, b + 2, k + 1), 6 * b * c)
    return out


def _dt(poly: Monomials) -> Monomials:
    # ∂ₜ𝔲 = 𝔲𝔪, ∂ₜ𝔪 = 𝔪²(1 − 6β₃𝔲²𝔪)
    out: Monomials = {}
    for (a, b, k), c in poly.items():
        if a + b:
            _add(out, (a, b + 1, k), (a + b) * c)
        if b:
            _add(out, (a + 2, b + 2, k + 1), -6 * b * c)
    return out


def _build_tables() -> Dict[Tuple[int, int], Monomials]:
    tables: Dict[Tuple[int, int], Monomials] = {}
    spatial: Monomials = {(1, 0, 0): Fraction(1)}
    for i in range(MAX_SPATIAL_ORDER + 1):
        tables[(i, 0)] = spatial
        temporal = spatial
        for j in range(1, MAX_TEMPORAL_ORDER + 1):
            temporal = _dt(temporal)
            tables[(i, j)] = temporal
        spatial = _dx(spatial)
    return tables


DERIVATIVE_TABLES = _build_tables()


def evaluate_monomials(poly: Monomials, beta3: float, u: Scalar, m: Scalar) -> Scalar:
    total = np.zeros(np.broadcast(np.asarray(u), np.asarray(m)).shape)
    for (a, b, k), c in poly.items():
        total = total + float(c) * beta3**k * np.asarray(u) ** a * np.asarray(m) ** b
    return _as_output(total)


def profile_derivatives(params: ProfileParams, p: ProfilePoint, i: int, j: int) -> Scalar:
    """∂ₜʲ∂ₓⁱ𝔲，i ≤ 3、j ≤ 1"""
    table = DERIVATIVE_TABLES.get((i, j))
    if table is None:
        raise UnsupportedOrder("unsupported derivative order", i=i, j=j)
    return evaluate_monomials(table, params.beta3, p.u, p.m)


def envelope(a: int, b: int, p: ProfilePoint) -> Scalar:
    """同質包絡 𝔢(a, b)"""
    if b < 0:
        raise InvalidInput("envelope requires b >= 0", b=b)
    u = np.asarray(p.u, dtype=float)
    m = np.asarray(p.m, dtype=float)
    if a >= 0:
        return _as_output(np.abs(u) ** a * m**b)
    return _as_output(m ** (b + abs(a) / 2.0))
