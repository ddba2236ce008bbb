import math

import numpy as np
import pytest
from scipy.stats import linregress

from app.models.errors import InvalidInput
from app.models.profile import ProfileParams
from app.services.inner import (
    QuarticLaplaceIntegrand,
    U0,
    U0_dX,
    inner_term_physical,
    quartic_laplace,
    shock_half_strength,
    tanh_deviation,
    tanh_profile,
)
from app.services.outer import u10_closed_form
from app.services.profile import eval_profile
from app.utils.numerics import diff1


@pytest.mark.parametrize("beta3", [1.0, 2.5])
def test_zero_moment_at_origin(beta3):
    expected = math.gamma(0.25) / (2.0 * (beta3 / 8.0) ** 0.25)
    assert quartic_laplace(QuarticLaplaceIntegrand(0.0, 0.0, beta3)) == pytest.approx(expected, rel=1e-10)


def test_first_moment_at_origin_vanishes():
    assert abs(quartic_laplace(QuarticLaplaceIntegrand(0.0, 0.0, 1.0, moment=1))) <= 1e-12


def test_critical_points():
    crit = QuarticLaplaceIntegrand(T=4.0, X=0.0, beta3=1.0).critical_points()
    np.testing.assert_allclose(crit, [-2.0, 0.0, 2.0], atol=1e-12)
    assert QuarticLaplaceIntegrand(T=-1.0, X=2.0, beta3=1.0).critical_points().size == 1


def test_profile_at_origin_and_oddness(params):
    assert U0(params, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)
    for T in (-3.0, 0.0, 3.0):
        for X in (0.5, 2.0):
            assert U0(params, T, -X) == pytest.approx(-U0(params, T, X), abs=1e-10)


def test_decreasing_in_X(params):
    T, X = np.meshgrid([-5.0, 0.0, 5.0], np.linspace(-5.0, 5.0, 11))
    assert np.all(U0_dX(params, T, X) < 0.0)
    values = U0(params, T, X)
    assert np.all(np.diff(values, axis=0) < 0.0)


@pytest.mark.parametrize("T,X", [(-2.0, 0.7), (0.0, -1.3), (6.0, 0.2)])
def test_dX_matches_differences(params, T, X):
    fd = diff1(lambda s: U0(params, T, s), X, 1e-2)
    assert U0_dX(params, T, X) == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_matches_outer_profile_along_ray(params):
    # U₀ − 𝔲 ≈ u_{1,0}，沿 (−λ², λ³) 以 λ⁻³ 衰減
    def gap(lam):
        T, X = -(lam**2), lam**3
        return U0(params, T, X) - eval_profile(params, T, X).u

    ratio = gap(4.0) / gap(16.0)
    assert 50.0 <= ratio <= 80.0
    lam = 8.0
    assert gap(lam) / u10_closed_form(params, -(lam**2), lam**3) == pytest.approx(1.0, abs=5e-2)


def test_tanh_limit(params):
    xis = np.linspace(-4.0, 4.0, 17)
    assert tanh_deviation(params, 25.0, xis) <= 1e-2
    slope = math.log(tanh_deviation(params, 40.0, xis) / tanh_deviation(params, 10.0, xis)) / math.log(4.0)
    assert -2.5 <= slope <= -1.5


def test_tanh_profile_shape():
    params = ProfileParams(beta3=4.0)
    assert tanh_profile(params, 16.0, 100.0) == pytest.approx(-2.0, rel=1e-12)
    assert tanh_profile(params, 16.0, 0.0) == 0.0
    with pytest.raises(InvalidInput):
        tanh_profile(params, 0.0, 1.0)
    with pytest.raises(InvalidInput):
        tanh_deviation(params, 10.0, [0.0])


def test_shock_half_strength():
    assert shock_half_strength(1.0, 4.0) == pytest.approx(2.0)
    assert shock_half_strength(2.0, 0.0) == 0.0
    assert tanh_profile(ProfileParams(beta3=2.0), 8.0, 50.0) == pytest.approx(-shock_half_strength(2.0, 8.0))
    with pytest.raises(InvalidInput):
        shock_half_strength(1.0, -1.0)


def test_physical_scaling(params):
    nu, t, x = 1e-4, -0.02, 0.003
    expected = nu**0.25 * U0(params, t / math.sqrt(nu), x / nu**0.75)
    assert inner_term_physical(params, nu, t, x) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(InvalidInput):
        inner_term_physical(params, 0.0, t, x)


def test_invalid_inputs(params):
    with pytest.raises(InvalidInput):
        U0(params, np.inf, 0.0)
    with pytest.raises(InvalidInput):
        U0(params, 0.0, 0.0, tol=0.0)


def test_matching_envelope_over_annulus(params):
    # 𝔇³|U₀ − 𝔘| 在 𝔇 ∈ [2, 50]、T < 0 上有界且不隨 𝔇 增長
    sups = []
    for D in np.geomspace(2.0, 50.0, 9):
        scaled = []
        for phi in (1.0, 0.75, 0.5, 0.25, 0.05):
            T = -phi * D**2
            u = np.sqrt((1.0 - phi) / (3.0 * params.beta3)) * D
            for sign in (-1.0, 1.0):
                X = T * sign * u - params.beta3 * (sign * u) ** 3
                gap = U0(params, T, X) - eval_profile(params, T, X).u
                scaled.append(D**3 * abs(gap))
        sups.append(max(scaled))
    assert np.all(np.isfinite(sups))
    assert max(sups) / min(sups) < 10.0


def test_tanh_limit_rate(params):
    # 偏差以 T⁻² 衰減
    xis = np.linspace(-5.0, 5.0, 21)
    Ts = np.array([10.0, 16.0, 25.0, 40.0])
    deviations = np.array([tanh_deviation(params, T, xis) for T in Ts])
    fit = linregress(np.log(Ts), np.log(deviations))
    assert -2.3 <= fit.slope <= -1.7
