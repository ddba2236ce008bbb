import numpy as np
import pytest

from app.models.errors import InvalidInput, NuTooSmall, UnstableParameters
from app.services.inviscid import entropy_solution
from app.services.outer import outer_sum
from app.services.viscous import (
    colehopf_cell_averages,
    colehopf_potential,
    fv_edges,
    reference_colehopf,
    reference_fv,
)


def test_constant_datum_stays_constant(flat_datum, xs):
    u = reference_colehopf(flat_datum, 0.01, -0.5, xs)
    np.testing.assert_allclose(u, 0.3, rtol=0, atol=1e-10)
    sample = reference_fv(flat_datum, 0.01, -0.5, cells=64, half_width=2.0)
    np.testing.assert_allclose(sample.values[0], 0.3, rtol=0, atol=1e-12)


def test_initial_trace(gaussian_skew, xs):
    d = gaussian_skew
    np.testing.assert_array_equal(reference_colehopf(d, 0.01, d.t0, xs), d.value(xs))
    assert reference_colehopf(d, 0.01, d.t0, 0.4) == pytest.approx(float(d.value(0.4)))


def test_viscosity_floor(gaussian_odd):
    with pytest.raises(NuTooSmall):
        reference_colehopf(gaussian_odd, 1e-8, -0.5, 0.0)
    with pytest.raises(InvalidInput):
        reference_colehopf(gaussian_odd, 0.0, -0.5, 0.0)
    with pytest.raises(InvalidInput):
        reference_colehopf(gaussian_odd, 0.01, 0.5, 0.0)


def test_maximum_principle(gaussian_skew):
    d = gaussian_skew
    u_min, u_max = d.value_range()
    u = reference_colehopf(d, 0.05, 0.5 * d.t0, np.linspace(-5.0, 5.0, 41))
    assert np.all(u >= u_min - 1e-5)
    assert np.all(u <= u_max + 1e-5)


def test_odd_datum_gives_odd_solution(gaussian_odd):
    x = np.array([0.2, 0.7, 1.5])
    u_plus = reference_colehopf(gaussian_odd, 0.02, -0.3, x)
    u_minus = reference_colehopf(gaussian_odd, 0.02, -0.3, -x)
    np.testing.assert_allclose(u_plus, -u_minus, rtol=0, atol=1e-10)


def test_first_corrector_improves_outer_accuracy(gaussian_odd):
    d, nu, t = gaussian_odd, 1e-4, -0.8
    x = np.linspace(-1.0, 1.0, 21)
    reference = reference_colehopf(d, nu, t, x)
    bare = np.max(np.abs(entropy_solution(d, t, x) - reference))
    corrected = np.max(np.abs(outer_sum(d, 1, nu, t, x) - reference))
    assert bare > 1e-5
    assert corrected <= 0.1 * bare


def test_cell_averages_from_potential(gaussian_skew):
    d, nu, t = gaussian_skew, 0.02, 0.5 * gaussian_skew.t0
    edges = np.linspace(-1.0, 1.0, 201)
    averages = colehopf_cell_averages(d, nu, t, edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    np.testing.assert_allclose(averages, reference_colehopf(d, nu, t, centers), rtol=0, atol=1e-4)
    phi = colehopf_potential(d, nu, t, [edges[0], edges[-1]])
    assert np.sum(averages * np.diff(edges)) == pytest.approx(phi[1] - phi[0], abs=1e-12)


def test_finite_volume_converges_to_colehopf(gaussian_odd):
    d, nu, t = gaussian_odd, 0.05, -0.5

    def l1_error(cells):
        sample = reference_fv(d, nu, t, cells=cells, half_width=9.0)
        edges = fv_edges(sample)
        exact = colehopf_cell_averages(d, nu, t, edges)
        return float(np.sum(np.abs(sample.values[0] - exact)) * (edges[1] - edges[0]))

    coarse, fine = l1_error(512), l1_error(2048)
    assert fine < 1e-3
    assert coarse / fine >= 6.0


def test_finite_volume_grid(gaussian_odd):
    sample = reference_fv(gaussian_odd, 0.05, -0.9, cells=100, half_width=9.0)
    assert sample.field == "u_nu_fv"
    assert sample.values.shape == (1, 100)
    np.testing.assert_allclose(fv_edges(sample), np.linspace(-9.0, 9.0, 101), rtol=0, atol=1e-12)


def test_finite_volume_rejects_bad_parameters(gaussian_odd):
    with pytest.raises(UnstableParameters):
        reference_fv(gaussian_odd, 0.05, -0.5, cells=256, half_width=9.0, cfl=0.5)
    with pytest.raises(UnstableParameters):
        reference_fv(gaussian_odd, 0.05, -0.5, cells=256, half_width=2.0)
    with pytest.raises(InvalidInput):
        reference_fv(gaussian_odd, 0.05, -0.5, cells=4, half_width=9.0)
    with pytest.raises(InvalidInput):
        reference_fv(gaussian_odd, 0.05, -1.0, cells=256, half_width=9.0)


@pytest.mark.parametrize("fraction", [0.5, 1e-3])
def test_mass_in_window_is_conserved(gaussian_skew, fraction):
    # 兩端皆為 c̊，Φ(t, L) − Φ(t, −L) 等於初始質量
    d, nu, L = gaussian_skew, 0.02, 12.0
    phi = colehopf_potential(d, nu, fraction * d.t0, [-L, L])
    initial = float(d.primitive(L) - d.primitive(-L))
    assert phi[1] - phi[0] == pytest.approx(initial, abs=1e-10)


@pytest.mark.slow
def test_finite_volume_matches_colehopf_before_shock(gaussian_odd):
    d, nu, t = gaussian_odd, 0.05, -0.1
    sample = reference_fv(d, nu, t, cells=4096, half_width=9.0)
    exact = colehopf_cell_averages(d, nu, t, fv_edges(sample))
    assert np.max(np.abs(sample.values[0] - exact)) <= 1e-5
