from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from config import REFINEMENT_DELTA, REFINEMENT_XI
from exceptions import InvalidConfig
from fields import abc_flow, poloidal_field, rigid_rotation, swirl_bump
from mollify import (
    BoundaryMollifier,
    ChordQuadrature,
    FieldSeries,
    MollifierConfig,
    TimeMollifierConfig,
    TransversalMap,
    bump,
    commutation_residual,
    convergence_experiment,
    divergence_refinement_experiment,
    fitted_jacobian_constant,
    gradient_bound_experiment,
    gradient_growth_note,
    jacobian_smallness_experiment,
    kernel_fourier_factor,
    modulated_series,
    mollify_div,
    mollify_time,
    sinusoid_damping,
    smooth_clamp,
    space_time_convergence_experiment,
    support_experiment,
    support_margin,
    time_kernel_weights,
    time_mollified_gradient_bound,
    uniform_time_check,
)

XI = Fraction(1, 4)
EPS = 0.25


def config(delta, xi=XI, quad_order=4):
    return MollifierConfig(delta, xi, quad_order)


def series_of(field, samples=9, dt=EPS / 8, modulation=np.cos):
    return modulated_series(field, np.arange(samples) * dt, modulation)


def test_bump():
    assert bump(0.0) == pytest.approx(np.exp(-1.0))
    assert bump(1.0) == 0.0
    assert bump(1.5) == 0.0


def test_chord_quadrature():
    rule = ChordQuadrature.of_order(8)
    assert (len(rule.s), len(rule.phi), len(rule.t)) == (4, 8, 8)
    assert np.all((rule.s > 0) & (rule.s < 1))
    assert np.sum(rule.s_weights) == pytest.approx(0.5)
    assert ChordQuadrature.of_order(4).size == 32
    with pytest.raises(InvalidConfig):
        ChordQuadrature.of_order(1)


def test_chord_quadrature_mass():
    rule = ChordQuadrature.of_order(8)
    radial, _ = quad(lambda r: r * r * float(bump(r)), 0.0, 1.0)
    # mass() sums the angles instead of integrating them
    assert rule.mass() == pytest.approx(len(rule.phi) / (2 * np.pi) * 4 * np.pi * radial, rel=0.1)


def test_smooth_clamp():
    u = np.linspace(-2.0, 3.0, 1001)
    c = smooth_clamp(u, 1.0, 0.5)
    assert np.all(c <= 1.0)
    assert np.all(c <= u + 1e-15)
    assert np.all(np.diff(c) >= -1e-15)
    np.testing.assert_array_equal(c[u <= 0.5], u[u <= 0.5])
    np.testing.assert_array_equal(c[u >= 1.5], 1.0)
    assert np.max(np.abs(np.diff(c))) <= u[1] - u[0] + 1e-12


def test_profile_is_continuous_at_blend_radius():
    m = TransversalMap(0.1)
    rb = m.blend_radius
    assert float(m.profile(rb - 1e-12)) == pytest.approx(float(m.profile(rb)), rel=1e-9)
    assert m.radial_derivative(rb) == 0.0
    assert float(m.profile(0.0)) == pytest.approx(15 / 8 / rb)


def test_transversal_map_pushes_outward():
    m = TransversalMap(0.2)
    X = np.array([[0.8], [0.0], [0.0]])
    np.testing.assert_allclose(m.apply(X), [[1.0], [0.0], [0.0]])
    r = np.linspace(0.0, 1.0, 50)
    assert np.all(m.radial_derivative(r) >= 0.0)


@pytest.mark.parametrize("point", [(0.3, -0.1, 0.05), (0.5, 0.5, 0.2), (0.0, 0.2, -0.1)])
def test_piola_matches_numerical_jacobian(point):
    m = TransversalMap(0.2)
    p = np.asarray(point, dtype=float)
    h = 1e-5
    J = np.empty((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        J[:, k] = (m.apply((p + e)[:, None])[:, 0] - m.apply((p - e)[:, None])[:, 0]) / (2 * h)
    expected = np.linalg.det(J) * np.linalg.inv(J)
    np.testing.assert_allclose(m.piola(p[:, None])[0], expected, atol=1e-6)


def test_config_validation():
    assert config(0.1).validate().delta == 0.1
    with pytest.raises(InvalidConfig):
        config(0.0).validate()
    with pytest.raises(InvalidConfig):
        config(1.5).validate()
    with pytest.raises(InvalidConfig):
        config(0.1, xi=0.34).validate()
    with pytest.raises(InvalidConfig):
        config(0.1, quad_order=1).validate()


def test_zero_field_maps_to_zero(axis):
    v = rigid_rotation(axis, 16).with_values(np.zeros((3, 16, 16, 16)))
    assert np.all(mollify_div(v, config(0.1)).values == 0.0)


def test_mollifier_is_linear(axis):
    u = rigid_rotation(axis, 16)
    v = swirl_bump(axis[::-1], 16)
    K = BoundaryMollifier(config(0.1), 16)
    combined = K.apply(u.with_values(2 * u.values + 3 * v.values)).values
    np.testing.assert_allclose(combined, 2 * K.apply(u).values + 3 * K.apply(v).values, atol=1e-12)


def test_mollifier_rejects_other_fields():
    K = BoundaryMollifier(config(0.1), 16)
    with pytest.raises(InvalidConfig):
        K.apply(abc_flow(1.0, 1.0, 1.0, 16))
    with pytest.raises(InvalidConfig):
        K.apply(rigid_rotation((0.0, 0.0, 1.0), 32))


def test_support_is_compact(rotation32):
    assert support_margin(rotation32) < 0.1
    for delta, margin, required in support_experiment(rotation32, [0.2, 0.1], XI, quad_order=4):
        assert margin >= required
        assert margin >= delta * (1 - float(XI))


def test_support_margin_of_zero_field(rotation32):
    assert support_margin(rotation32.with_values(np.zeros((3, 32, 32, 32)))) == 1.0


def test_l2_norm_stays_comparable(rotation32):
    w = mollify_div(rotation32, config(0.2))
    ratio = np.linalg.norm(w.values) / np.linalg.norm(rotation32.values)
    assert ratio <= 1.5


def test_convergence_in_delta(rotation32):
    rows = convergence_experiment(rotation32, [0.2, 0.1, 0.05], 2, XI, quad_order=4)
    errors = [err for _, err in rows]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_deltas_must_decrease(rotation32):
    with pytest.raises(InvalidConfig):
        convergence_experiment(rotation32, [0.1, 0.2], 2)
    with pytest.raises(InvalidConfig):
        convergence_experiment(rotation32, [], 2)


@pytest.mark.parametrize("fixture", ["swirl32", "poloidal32", "rotation32"])
def test_gradient_stays_bounded(fixture, request):
    v = request.getfixturevalue(fixture)
    rows = gradient_bound_experiment(v, [0.2, 0.1, 0.05, 0.025], 2, XI, quad_order=4)
    norms = np.array([g for _, g in rows])
    assert norms.max() / np.median(norms) <= 2.0


@pytest.mark.slow
@pytest.mark.parametrize("make", [swirl_bump, poloidal_field, rigid_rotation])
def test_gradient_stays_bounded_at_64(make, axis):
    rows = gradient_bound_experiment(make(axis, 64), [0.2, 0.1, 0.05, 0.025], 2, XI, quad_order=4)
    norms = np.array([g for _, g in rows])
    assert norms.max() / np.median(norms) <= 2.0


def test_gradient_growth_note(axis):
    assert gradient_growth_note(rigid_rotation(axis, 16), 2) == (
        "slip field grows like delta^-(1/2); not bounded by ||grad v||_2"
    )
    assert gradient_growth_note(swirl_bump(axis, 16), 2) == ""


def test_divergence_refines_away_for_rotation(axis):
    rows = divergence_refinement_experiment(lambda N: rigid_rotation(axis, N), 0.1, [16, 32, 64], XI, 4)
    assert [N for N, _, _ in rows] == [16, 32, 64]
    interior = [value for _, value, _ in rows]
    for coarse, fine in zip(interior, interior[1:]):
        assert fine < 1e-10 or coarse / fine >= 1.5


def test_rigid_rotation_is_exact_away_from_the_sphere(axis):
    delta = 0.1
    v = rigid_rotation(axis, 32)
    w = mollify_div(v, config(delta)).values
    X = v.coordinates()
    r = np.linalg.norm(X, axis=0)
    m = TransversalMap(delta)
    lam_r, lam_t = m.stretches(r)
    expected = lam_r * lam_t * (1 + delta * m.profile(r)) * v.values
    inner = r < 0.5
    np.testing.assert_allclose(w[:, inner], expected[:, inner], atol=1e-12)


@pytest.mark.slow
def test_divergence_refines_across_support_edge(axis):
    # support ends at 1 - delta (1 - xi) < 1, so the ball column spans the edge
    rows = divergence_refinement_experiment(
        lambda N: rigid_rotation(axis, N), REFINEMENT_DELTA, [32, 64, 128], REFINEMENT_XI, 4,
    )
    for column in (1, 2):
        values = [row[column] for row in rows]
        for coarse, fine in zip(values, values[1:]):
            assert fine < 1e-10 or coarse / fine >= 1.5


def test_divergence_on_whole_ball_for_poloidal(axis):
    rows = divergence_refinement_experiment(lambda N: poloidal_field(axis, N), 0.1, [16, 32, 64], XI, 4)
    assert rows[-1][2] < rows[0][2]


def test_refinement_validates_grids(axis):
    with pytest.raises(InvalidConfig):
        divergence_refinement_experiment(lambda N: rigid_rotation(axis, N), 0.1, [32, 16])
    with pytest.raises(InvalidConfig):
        divergence_refinement_experiment(lambda N: rigid_rotation(axis, N), 0.9, [8, 16])


def test_jacobian_deviation_is_linear_in_delta():
    rows = jacobian_smallness_experiment([0.2, 0.1, 0.05], 64)
    ratios = [ratio for _, _, ratio in rows]
    c = fitted_jacobian_constant(rows)
    assert max(ratios) / min(ratios) <= 1.5
    assert all(sup <= c * delta + 1e-15 for delta, sup, _ in rows)
    assert all(sup > 0 for _, sup, _ in rows)


# Time mollifier

def test_time_kernel_weights():
    offsets, weights = time_kernel_weights(EPS, EPS / 32)
    assert offsets[0] == -32 and offsets[-1] == 32
    assert np.sum(weights) == pytest.approx(1.0)
    np.testing.assert_allclose(weights, weights[::-1])


def test_constant_series_is_fixed(axis):
    series = series_of(rigid_rotation(axis, 8), samples=12, modulation=None)
    out = mollify_time(series, TimeMollifierConfig(EPS))
    np.testing.assert_allclose(out.values, series.values, atol=1e-12)


def test_linear_series_fixed_at_interior_times(axis):
    field = rigid_rotation(axis, 8)
    series = series_of(field, samples=24, modulation=lambda t: 1.0 + 3.0 * t)
    out = mollify_time(series, TimeMollifierConfig(EPS))
    J = 8
    np.testing.assert_allclose(out.values[J:-J], series.values[J:-J], atol=1e-12)


def test_sinusoid_is_damped_by_kernel_transform(axis):
    field = rigid_rotation(axis, 8)
    dt = EPS / 32
    omega = 16.0
    series = series_of(field, samples=129, dt=dt, modulation=lambda t: np.sin(omega * t))
    out = mollify_time(series, TimeMollifierConfig(EPS))
    damping = sinusoid_damping(EPS, dt, omega)
    assert damping == pytest.approx(kernel_fourier_factor(EPS, omega), abs=1e-4)
    assert damping < 0.9
    np.testing.assert_allclose(out.values[32:-32], damping * series.values[32:-32], atol=1e-12)


def test_time_grid_checks(axis):
    field = rigid_rotation(axis, 8)
    cfg = TimeMollifierConfig(EPS)
    with pytest.raises(InvalidConfig):
        mollify_time(series_of(field, dt=EPS / 4), cfg)
    with pytest.raises(InvalidConfig):
        mollify_time(modulated_series(field, [0.0, 0.01, 0.03]), cfg)
    with pytest.raises(InvalidConfig):
        mollify_time(modulated_series(field, [0.0]), cfg)
    with pytest.raises(InvalidConfig):
        mollify_time(series_of(field), TimeMollifierConfig(0.0))


def test_series_shape_checked():
    with pytest.raises(InvalidConfig):
        FieldSeries(np.arange(3), np.zeros((2, 3, 8, 8, 8)))


def test_kernel_fourier_factor_at_zero_frequency():
    assert kernel_fourier_factor(EPS, 0.0) == pytest.approx(1.0)


def test_space_and_time_mollifiers_commute(axis):
    series = series_of(rigid_rotation(axis, 16))
    assert commutation_residual(series, 0.1, EPS, XI, quad_order=4) <= 1e-10


def test_uniform_in_time_convergence(rotation32):
    series = series_of(rotation32, samples=5)
    rows = uniform_time_check(series, [0.2, 0.1, 0.05], 2, XI, quad_order=4)
    errors = [err for _, err in rows]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_space_time_convergence(rotation32):
    series = series_of(rotation32, samples=5)
    rows = space_time_convergence_experiment(series, [0.2, 0.1, 0.05], EPS, 2, XI, quad_order=4)
    errors = [err for _, err in rows]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_time_mollified_gradient_bounded(swirl32):
    series = series_of(swirl32, samples=5)
    rows = time_mollified_gradient_bound(series, [0.2, 0.1, 0.05], EPS, 2, xi=XI, quad_order=4)
    norms = np.array([g for _, g in rows])
    assert norms.max() / norms.min() <= 2.0
