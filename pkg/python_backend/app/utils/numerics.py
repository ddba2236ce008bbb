"""
共用數值工具
有界牛頓法（向量化，二分法回退）與五點中央差分
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..models.errors import InvalidInput, ToleranceNotMet

ArrayFn = Callable[[np.ndarray], np.ndarray]

EPS = np.finfo(float).eps


def bracketed_newton(
    f: ArrayFn,
    fprime: ArrayFn,
    lo,
    hi,
    x0=None,
    xtol: float = 0.0,
    rtol: float = 4.0 * EPS,
    maxiter: int = 200,
) -> np.ndarray:
    """逐點求 f(x) = 0，x 限制在 [lo, hi]；牛頓步跳出區間時改用中點"""
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    flo = np.asarray(f(lo), dtype=float)
    fhi = np.asarray(f(hi), dtype=float)
    if np.any(np.sign(flo) * np.sign(fhi) > 0):
        raise InvalidInput("root is not bracketed", count=int(np.sum(np.sign(flo) * np.sign(fhi) > 0)))

    x = 0.5 * (lo + hi) if x0 is None else np.array(np.broadcast_to(x0, lo.shape), dtype=float)
    x = np.clip(x, np.minimum(lo, hi), np.maximum(lo, hi))

    for _ in range(maxiter):
        fx = np.asarray(f(x), dtype=float)
        exact = fx == 0.0
        same = np.sign(fx) == np.sign(flo)
        lo = np.where(same, x, lo)
        flo = np.where(same, fx, flo)
        hi = np.where(same, hi, x)

        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - fx / np.asarray(fprime(x), dtype=float)
        left, right = np.minimum(lo, hi), np.maximum(lo, hi)
        bad = ~np.isfinite(xn) | (xn < left) | (xn > right)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        xn = np.where(exact, x, xn)

        width = np.abs(hi - lo)
        step = np.abs(xn - x)
        tol = xtol + rtol * np.abs(xn)
        x = xn
        if np.all(exact | (step <= tol) | (width <= tol)):
            return x

    raise ToleranceNotMet("bracketed newton did not converge", maxiter=maxiter)


def diff1(f: Callable[[float], float], x: float, h: float) -> float:
    """五點中央差分一階導數，誤差 O(h^4)"""
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h)


def diff2(f: Callable[[float], float], x: float, h: float) -> float:
    """五點中央差分二階導數，誤差 O(h^4)"""
    return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h * h)
