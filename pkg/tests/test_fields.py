import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from exceptions import InvalidConfig, UndefinedRatio
from fields import (
    BeltramiMode,
    BeltramiSpec,
    Domain,
    SampledField,
    abc_flow,
    ball_mask,
    beltrami_field,
    beltrami_residual,
    curl,
    curl_eigenfield,
    divergence,
    fd_derivative,
    gradient_of_scalar,
    gradient_tensor,
    grid_axis,
    grid_coordinates,
    helicity_density_residual,
    lamb_residual,
    lamb_vector,
    lattice_modes,
    lq_norm,
    padded_size,
    poloidal_field,
    random_beltrami_spec,
    random_solenoidal_field,
    von_wahl_ratio,
)


def test_sampled_field_validates_shape():
    with pytest.raises(InvalidConfig):
        SampledField(Domain.TORUS, np.zeros((3, 8, 8)))
    with pytest.raises(InvalidConfig):
        SampledField(Domain.TORUS, np.zeros((2, 8, 8, 8)))


def test_sampled_field_is_read_only(abc16):
    with pytest.raises(ValueError):
        abc16.values[0, 0, 0, 0] = 1.0


def test_ball_fields_vanish_outside(rotation32):
    outside = ~ball_mask(32)
    assert np.all(rotation32.values[:, outside] == 0.0)


def test_grid_axes():
    assert grid_axis(Domain.TORUS, 8)[0] == 0.0
    ball = grid_axis(Domain.BALL, 8)
    assert ball[0] == pytest.approx(-0.875)
    assert ball[-1] == pytest.approx(0.875)


def test_grid_coordinates():
    X = grid_coordinates(Domain.BALL, 8)
    assert X.shape == (3, 8, 8, 8)
    np.testing.assert_array_equal(X[0, :, 0, 0], grid_axis(Domain.BALL, 8))
    np.testing.assert_array_equal(X[2, 0, 0, :], grid_axis(Domain.BALL, 8))


def test_padded_size():
    assert padded_size(32) == 48


def test_abc_is_beltrami(abc16):
    assert beltrami_residual(abc16, 1.0) <= 1e-12
    assert lamb_residual(abc16) <= 1e-8
    assert helicity_density_residual(abc16) <= 1e-12


def test_abc_with_unequal_coefficients():
    f = abc_flow(1.0, 0.5, 0.25, 16)
    assert beltrami_residual(f, 1.0) <= 1e-12


@pytest.mark.parametrize("k, lambda_", [((1, 1, 0), np.sqrt(2)), ((1, 1, 1), np.sqrt(3)), ((0, 2, 0), 2.0)])
def test_curl_eigenfield(k, lambda_):
    f = curl_eigenfield(k, 0.3, 16)
    assert beltrami_residual(f, lambda_) <= 1e-12
    g = curl_eigenfield(k, 0.3, 16, helicity=-1)
    assert beltrami_residual(g, -lambda_) <= 1e-12


def test_eigenfield_matches_abc_component():
    f = curl_eigenfield((0, 0, 1), 0.0, 16)
    g = abc_flow(1.0, 0.0, 0.0, 16)
    np.testing.assert_allclose(f.values, g.values, atol=1e-14)


def test_eigenfield_rejects_zero_wavevector():
    with pytest.raises(InvalidConfig):
        curl_eigenfield((0, 0, 0), 0.0, 16)


def test_grid_below_minimum():
    with pytest.raises(InvalidConfig):
        abc_flow(1.0, 1.0, 1.0, 4)


def test_zero_field_residual_undefined():
    with pytest.raises(UndefinedRatio):
        beltrami_residual(SampledField(Domain.TORUS, np.zeros((3, 8, 8, 8))), 1.0)


def test_lattice_modes():
    assert len(lattice_modes(1)) == 3
    assert len(lattice_modes(np.sqrt(2))) == 6
    assert len(lattice_modes(np.sqrt(3))) == 4
    assert lattice_modes(np.sqrt(7)) == []


def test_spec_validation():
    with pytest.raises(InvalidConfig):
        BeltramiSpec(0.0, (BeltramiMode((0, 0, 1)),)).validate()
    with pytest.raises(InvalidConfig):
        BeltramiSpec(2.0, (BeltramiMode((0, 0, 1)),)).validate()
    with pytest.raises(InvalidConfig):
        BeltramiSpec(1.0, ()).validate()
    with pytest.raises(InvalidConfig):
        random_beltrami_spec(np.sqrt(7), 0)


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_random_beltrami_fields(seed):
    spec = random_beltrami_spec(1.0, seed)
    f = beltrami_field(spec, 16)
    assert beltrami_residual(f, 1.0) <= 1e-10
    assert np.max(np.abs(divergence(f))) <= 1e-10


def test_negative_helicity_spec():
    spec = random_beltrami_spec(-np.sqrt(2), 3)
    f = beltrami_field(spec, 16)
    assert beltrami_residual(f, -np.sqrt(2)) <= 1e-10


def test_random_solenoidal_field():
    f = random_solenoidal_field(16, 2, seed=5)
    assert np.max(np.abs(divergence(f))) <= 1e-10
    assert lamb_residual(f) <= 1e-8
    assert np.sqrt(np.mean(np.sum(f.values ** 2, axis=0))) == pytest.approx(1.0)
    with pytest.raises(InvalidConfig):
        random_solenoidal_field(16, 8, seed=5)


def test_divergence_of_curl_on_torus():
    f = random_solenoidal_field(16, 3, seed=11)
    assert np.max(np.abs(divergence(curl(f)))) <= 1e-10


def test_curl_of_gradient_on_torus():
    x, y, z = grid_coordinates(Domain.TORUS, 32)
    phi = np.sin(x) * np.cos(2 * y) + np.cos(3 * z) * np.sin(y) + 0.5 * np.sin(x + 2 * y - z)
    grad = gradient_of_scalar(phi, Domain.TORUS)
    expected_x = np.cos(x) * np.cos(2 * y) + 0.5 * np.cos(x + 2 * y - z)
    np.testing.assert_allclose(grad.values[0], expected_x, atol=1e-10)
    assert np.max(np.abs(curl(grad).values)) <= 1e-10


def test_curl_of_gradient_on_ball():
    x, y, z = grid_coordinates(Domain.BALL, 32)
    grad = gradient_of_scalar(x * x * y + np.sin(z) * x, Domain.BALL)
    inner = x ** 2 + y ** 2 + z ** 2 < 0.7 ** 2
    np.testing.assert_allclose(grad.values[0][inner], (2 * x * y + np.sin(z))[inner], atol=1e-6)
    assert np.max(np.abs(curl(grad).values[:, inner])) <= 1e-10


def test_von_wahl_ratio():
    assert von_wahl_ratio(curl_eigenfield((0, 0, 1), 0.0, 16), 2) == pytest.approx(1.0, abs=1e-10)
    assert von_wahl_ratio(abc_flow(1.0, 1.0, 1.0, 16), 2) == pytest.approx(1.0, abs=1e-10)


def test_von_wahl_ratio_needs_torus(rotation32):
    with pytest.raises(InvalidConfig):
        von_wahl_ratio(rotation32, 2)


def test_lq_norms(abc16):
    assert lq_norm(abc16, "inf") >= lq_norm(abc16, 2) / (2 * np.pi) ** 1.5
    with pytest.raises(InvalidConfig):
        lq_norm(abc16, "1/2")


def test_fd_derivative_exact_on_quartics():
    x = np.linspace(0.0, 1.0, 11)
    h = x[1] - x[0]
    np.testing.assert_allclose(fd_derivative(x ** 4, 0, h), 4 * x ** 3, atol=1e-10)


def test_rigid_rotation_interior_derivatives(rotation32, axis):
    X = rotation32.coordinates()
    inner = np.sum(X ** 2, axis=0) < 0.7 ** 2
    w = curl(rotation32).values
    np.testing.assert_allclose(w[:, inner], np.broadcast_to(2 * axis[:, None], (3, inner.sum())), atol=1e-10)
    assert np.max(np.abs(divergence(rotation32)[inner])) <= 1e-10


def test_rigid_rotation_gradient_is_antisymmetric(rotation32):
    X = rotation32.coordinates()
    inner = np.sum(X ** 2, axis=0) < 0.7 ** 2
    G = gradient_tensor(rotation32)
    assert G.shape == (3, 3, 32, 32, 32)
    np.testing.assert_allclose((G + G.transpose(1, 0, 2, 3, 4))[:, :, inner], 0.0, atol=1e-10)


def test_lamb_vector_vanishes_for_abc(abc16):
    assert np.max(np.abs(lamb_vector(abc16).values)) <= 1e-12


def test_poloidal_field_is_nearly_solenoidal(axis):
    f = poloidal_field(axis, 64)
    X = f.coordinates()
    inner = np.sum(X ** 2, axis=0) < 0.8 ** 2
    assert np.max(np.abs(divergence(f)[inner])) <= 1e-2


def test_poloidal_field_vanishes_on_sphere(poloidal32):
    r = np.sqrt(np.sum(poloidal32.coordinates() ** 2, axis=0))
    shell = (r > 0.95) & (r < 1.0)
    assert np.max(poloidal32.magnitude()[shell]) < 0.1
