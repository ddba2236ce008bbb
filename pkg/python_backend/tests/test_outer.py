import numpy as np
import pytest

from app.models.errors import InvalidInput, WindowRequired
from app.services.inviscid import characteristic_state, entropy_curvature, entropy_solution
from app.services.outer import outer_sum, u10_closed_form, u1_exact
from app.services.profile import eval_profile
from app.utils.numerics import diff1, diff2


def test_hodograph_matches_transport(gaussian_skew):
    d = gaussian_skew
    t = 0.5 * d.t0
    x = np.linspace(-0.05, 0.05, 11)
    st = characteristic_state(d, t, x)
    transported = st.elapsed * d.derivative(st.xi, 2) / st.jacobian**2
    np.testing.assert_allclose(u1_exact(d, t, x, strict_window=True), transported, rtol=1e-10, atol=1e-13)


def test_vanishes_at_initial_time(gaussian_skew, xs):
    np.testing.assert_allclose(u1_exact(gaussian_skew, gaussian_skew.t0, xs), 0.0, rtol=0, atol=1e-13)


@pytest.mark.parametrize("x", [-0.8, 0.02, 0.3, 2.5])
def test_solves_linearized_equation(gaussian_skew, x):
    # ∂ₜu⁽¹⁾ + ∂ₓ(u⁰u⁽¹⁾) = ∂ₓ²u⁰
    d = gaussian_skew
    t = 0.5 * d.t0
    h = 1e-3
    u1_t = diff1(lambda s: u1_exact(d, s, x), t, h)
    flux_x = diff1(lambda s: entropy_solution(d, t, s) * u1_exact(d, t, s), x, h)
    rhs = entropy_curvature(d, t, x)
    assert u1_t + flux_x == pytest.approx(rhs, rel=1e-6, abs=1e-9)


def test_matches_homogeneous_term_near_origin(gaussian_odd):
    d = gaussian_odd
    params = d.profile_params()
    lam = 0.05
    t, x = -(lam**2), 0.3 * lam**3
    assert u1_exact(d, t, x) / u10_closed_form(params, t, x) == pytest.approx(1.0, abs=2e-2)


def test_closed_form_homogeneity(params):
    t, x = -0.7, 0.25
    for lam in (0.2, 5.0):
        scaled = u10_closed_form(params, lam**2 * t, lam**3 * x)
        assert scaled == pytest.approx(lam**-3 * u10_closed_form(params, t, x), rel=1e-11)


def test_strict_window(gaussian_odd):
    with pytest.raises(WindowRequired):
        u1_exact(gaussian_odd, -0.5, 3.0, strict_window=True)
    assert np.isfinite(u1_exact(gaussian_odd, -0.5, 3.0))


def test_far_field_is_zero(gaussian_odd):
    assert u1_exact(gaussian_odd, -0.5, 50.0) == 0.0


def test_outer_sum(gaussian_skew, xs):
    d = gaussian_skew
    t, nu = 0.5 * d.t0, 1e-3
    u0 = entropy_solution(d, t, xs)
    np.testing.assert_array_equal(outer_sum(d, 0, nu, t, xs), u0)
    np.testing.assert_allclose(outer_sum(d, 1, nu, t, xs), u0 + nu * u1_exact(d, t, xs), rtol=0, atol=1e-15)
    with pytest.raises(InvalidInput):
        outer_sum(d, 2, nu, t, xs)
    with pytest.raises(InvalidInput):
        outer_sum(d, 1, 0.0, t, xs)


def test_shock_time_rejected(gaussian_odd):
    with pytest.raises(InvalidInput):
        u1_exact(gaussian_odd, 0.0, 0.1)


@pytest.mark.parametrize("t,x", [(-0.5, -0.3), (-0.5, 0.1), (-0.2, 0.4), (-1.3, 0.05)])
def test_closed_form_solves_homogeneous_equation(params, t, x):
    # ∂ₜu_{1,0} + ∂ₓ(𝔲u_{1,0}) = ∂ₓ²𝔲
    h = 1e-3
    u10_t = diff1(lambda s: u10_closed_form(params, s, x), t, h)
    flux_x = diff1(lambda s: eval_profile(params, t, s).u * u10_closed_form(params, t, s), x, h)
    rhs = diff2(lambda s: eval_profile(params, t, s).u, x, h)
    assert u10_t + flux_x == pytest.approx(rhs, rel=1e-6, abs=1e-8)
