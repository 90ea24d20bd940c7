"""
Mollify Module

Divergence-preserving boundary mollifier on the unit ball, Friedrichs time
mollifier, and the experiment harnesses that check their properties.

The space mollifier is

    (K_delta v)(x) = int_B rho(y) P(x) v(theta(x) + delta xi y) dy,

with theta(x) = x + delta V(x) pushing the exterior of the ball further out,
P = det(J) J^-1 the Piola factor of theta and v extended by zero outside
the ball. The result has compact support in the ball, and divergence-free
fields tangential on the sphere stay divergence-free.

The y integral runs along chords parallel to theta(x) and each chord stops
exactly where it leaves the ball, so the discrete operator stays a smooth
function of x up to the edge of its support.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.integrate import quad
from scipy.interpolate import RegularGridInterpolator

from config import (
    DEFAULT_EPSILON,
    DEFAULT_QUAD_ORDER,
    DEFAULT_XI,
    TRANSVERSAL_BLEND_RADIUS,
)
from criteria import BoundaryCondition
from exceptions import InvalidConfig
from exponents import INF, ONE, Q, format_rational
from fields import (
    MIN_GRID,
    Domain,
    SampledField,
    array_lq_norm,
    ball_mask,
    cell_volume,
    divergence,
    gradient_lq_norm,
    grid_axis,
    grid_coordinates,
)
from logger import get_logger

logger = get_logger("mollify")


def bump(s):
    """exp(-1/(1-|s|^2)) inside the unit ball, zero outside (unnormalized)."""
    s2 = np.asarray(s, dtype=np.float64) ** 2
    inside = s2 < 1.0
    return np.where(inside, np.exp(-1.0 / np.where(inside, 1.0 - s2, 1.0)), 0.0)


@dataclass(frozen=True, eq=False)
class ChordQuadrature:
    """Unit ball written as chords y = t n + s (cos phi e1 + sin phi e2), |t| <= sqrt(1 - s^2).

    s carries Gauss-Legendre nodes for s ds on [0, 1], phi is uniform, and t
    is Gauss-Legendre on whatever part of the chord is integrated.
    """

    s: np.ndarray
    s_weights: np.ndarray
    phi: np.ndarray
    t: np.ndarray
    t_weights: np.ndarray

    @classmethod
    def of_order(cls, order):
        if order < 2:
            raise InvalidConfig(f"quadrature order {order} must be at least 2")
        x, w = np.polynomial.legendre.leggauss(max(1, order // 2))
        s = (x + 1) / 2
        t, t_weights = np.polynomial.legendre.leggauss(order)
        return cls(s, w / 2 * s, 2 * np.pi * np.arange(order) / order, t, t_weights)

    @property
    def half_chords(self):
        return np.sqrt(1.0 - self.s ** 2)

    @property
    def size(self):
        return len(self.s) * len(self.phi) * len(self.t)

    def mass(self):
        """Quadrature value of int rho over the whole ball, unnormalized."""
        total = 0.0
        for s, ws, T in zip(self.s, self.s_weights, self.half_chords):
            total += ws * T * np.sum(self.t_weights * bump(np.sqrt(s * s + (T * self.t) ** 2)))
        return len(self.phi) * total


def smooth_clamp(u, top, width):
    """min(u, top) with the corner replaced by a C^3 blend over [top - width, top + width].

    Never exceeds top, equals u below the blend and top above it.
    """
    x = np.clip((u - top) / width + 1.0, 0.0, 2.0) / 2.0
    ramp = 2.0 * (x ** 6 - 3 * x ** 5 + 2.5 * x ** 4)
    return np.where(u <= top - width, u, np.where(u >= top + width, top, u - width * ramp))


def _transverse_frame(normal):
    """Unit vectors e1, e2 completing each row of normal to an orthonormal frame."""
    ref = np.where(np.abs(normal[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
    e1 = np.cross(normal, ref)
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    return e1, np.cross(normal, e1)


@dataclass(frozen=True)
class TransversalMap:
    """theta(x) = x + delta V(x) with V(x) = x s(|x|).

    s(r) = 1/r from the blend radius on, so |V| = 1 near the sphere; inside,
    r s(r) is the quintic that meets r s = 1 with two vanishing derivatives.
    The map is radial, so J has eigenvalues lambda_r along x and lambda_t
    (twice) across it.
    """

    delta: float
    blend_radius: float = TRANSVERSAL_BLEND_RADIUS

    def profile(self, r):
        """s(r)."""
        rb = self.blend_radius
        rho2 = (np.asarray(r) / rb) ** 2
        inner = (15 / 8 - 5 / 4 * rho2 + 3 / 8 * rho2 ** 2) / rb
        return np.where(r < rb, inner, 1.0 / np.maximum(r, rb))

    def radial_derivative(self, r):
        """(r s(r))'."""
        rb = self.blend_radius
        rho2 = (np.asarray(r) / rb) ** 2
        return np.where(r < rb, 15 / 8 * (1 - rho2) ** 2 / rb, 0.0)

    def field(self, X):
        return X * self.profile(np.linalg.norm(X, axis=0))

    def apply(self, X):
        """theta(X) for coordinates of shape (3, ...)."""
        return X * (1.0 + self.delta * self.profile(np.linalg.norm(X, axis=0)))

    def stretches(self, r):
        """(lambda_r, lambda_t) at radius r."""
        lam_t = 1.0 + self.delta * self.profile(r)
        lam_r = 1.0 + self.delta * self.radial_derivative(r)
        return lam_r, lam_t

    def piola(self, X):
        """det(J) J^-1 at points X of shape (3, T), returned as (T, 3, 3)."""
        r = np.linalg.norm(X, axis=0)
        lam_r, lam_t = self.stretches(r)
        xhat = (X / np.where(r > 0, r, 1.0)).T
        outer = np.einsum("ti,tj->tij", xhat, xhat)
        across = lam_r * lam_t
        return across[:, None, None] * np.eye(3) + (lam_t ** 2 - across)[:, None, None] * outer

    def deviation(self, r):
        """Operator norm of det(J) J^-1 - I at radius r."""
        lam_r, lam_t = self.stretches(r)
        return np.maximum(np.abs(lam_t ** 2 - 1), np.abs(lam_r * lam_t - 1))

    def exterior_clearance(self, xi, samples=101):
        """min over radii in [1, 2] of |theta(x)| - 3 delta xi - 1."""
        r = np.linspace(1.0, 2.0, samples)
        return float(np.min(r * (1.0 + self.delta * self.profile(r)) - 3 * self.delta * xi - 1.0))


@dataclass(frozen=True)
class MollifierConfig:
    delta: float
    xi: float = DEFAULT_XI
    quad_order: int = DEFAULT_QUAD_ORDER

    def validate(self):
        """Check the parameters and the inclusion theta(exterior) + B_{3 delta xi} in the exterior.

        Raises:
            InvalidConfig: on a parameter out of range or a failed inclusion
        """
        if not 0 < self.delta <= 1:
            raise InvalidConfig(f"delta = {self.delta} must lie in (0, 1]")
        if self.xi <= 0:
            raise InvalidConfig(f"xi = {self.xi} must be positive")
        if self.quad_order < 2:
            raise InvalidConfig(f"quad_order = {self.quad_order} must be at least 2")
        clearance = TransversalMap(self.delta).exterior_clearance(float(self.xi))
        if clearance <= 0:
            raise InvalidConfig(
                f"theta_delta pushes the exterior only {clearance:.3g} beyond the 3 delta xi "
                f"margin for xi = {self.xi}; xi must be below 1/3"
            )
        return self


class BoundaryMollifier:
    """K_delta on an N^3 ball grid, caching theta, the Piola factors and the quadrature."""

    def __init__(self, config, N, logger=None):
        """
        Initialize the mollifier.

        Args:
            config (MollifierConfig): delta, xi and quadrature order
            N (int): Grid points per axis of the ball's bounding box
            logger (logging.Logger, optional): Logger instance
        """
        self.logger = logger or get_logger("mollify")
        self.config = config.validate()
        if N < MIN_GRID:
            raise InvalidConfig(f"grid size N = {N} below the minimum {MIN_GRID}")
        self.N = N
        self.delta = float(config.delta)
        self.xi = float(config.xi)
        self.transversal = TransversalMap(self.delta)
        self.axis = grid_axis(Domain.BALL, N)

        X = grid_coordinates(Domain.BALL, N)
        theta = self.transversal.apply(X)
        eps = self.delta * self.xi
        reach = np.linalg.norm(theta, axis=0) - eps
        self.targets = (np.linalg.norm(X, axis=0) < 1.0) & (reach < 1.0)
        self._theta = theta[:, self.targets].T
        self._piola = self.transversal.piola(X[:, self.targets])
        self.quadrature = ChordQuadrature.of_order(config.quad_order)

        a = np.linalg.norm(self._theta, axis=1)
        self._normal = np.where(a[:, None] > 0, self._theta / np.where(a > 0, a, 1.0)[:, None], [[0.0, 0.0, 1.0]])
        self._e1, self._e2 = _transverse_frame(self._normal)
        # chord i leaves the ball at t = (sqrt(1 - eps^2 s_i^2) - |theta|) / eps
        self._upper = [
            smooth_clamp((np.sqrt(1.0 - (eps * s) ** 2) - a) / eps, T, T / 2)
            for s, T in zip(self.quadrature.s, self.quadrature.half_chords)
        ]
        self._mass = self.quadrature.mass()
        # exterior samples copy the nearest interior one so interpolation is accurate up to the sphere
        _, self._nearest = ndimage.distance_transform_edt(~ball_mask(N), return_indices=True)

        self.logger.debug(
            f"BoundaryMollifier N={N} delta={self.delta} xi={self.xi}: "
            f"{int(self.targets.sum())} targets, {self.quadrature.size} quadrature nodes"
        )

    def apply_array(self, values):
        """Mollify a stack of ball fields of shape (B, 3, N, N, N)."""
        values = np.asarray(values, dtype=np.float64)
        B = values.shape[0]
        N = self.N
        i, j, k = self._nearest
        data = np.moveaxis(values[:, :, i, j, k].reshape(B * 3, N, N, N), 0, -1)
        interp = RegularGridInterpolator(
            (self.axis, self.axis, self.axis), data,
            method="linear", bounds_error=False, fill_value=None,
        )
        eps = self.delta * self.xi
        quad_rule = self.quadrature
        acc = np.zeros((len(self._theta), B * 3))
        for s, ws, T, upper in zip(quad_rule.s, quad_rule.s_weights, quad_rule.half_chords, self._upper):
            half = np.maximum(upper + T, 0.0) / 2
            for t, wt in zip(quad_rule.t, quad_rule.t_weights):
                along = half * (1 + t) - T
                weight = ws * wt * half * bump(np.sqrt(s * s + along ** 2))
                live = weight > 0
                if not np.any(live):
                    continue
                base = self._theta[live] + eps * along[live, None] * self._normal[live]
                for phi in quad_rule.phi:
                    across = s * (np.cos(phi) * self._e1[live] + np.sin(phi) * self._e2[live])
                    acc[live] += weight[live, None] * interp(base + eps * across)
        acc /= self._mass
        mapped = np.einsum("tij,tbj->tbi", self._piola, acc.reshape(-1, B, 3))
        out = np.zeros_like(values)
        out[:, :, self.targets] = np.transpose(mapped, (1, 2, 0))
        return out

    def apply(self, v):
        """K_delta v for a ball field v."""
        if v.domain is not Domain.BALL or v.N != self.N:
            raise InvalidConfig(f"mollify_div needs a ball field with N = {self.N}")
        return v.with_values(self.apply_array(v.values[None])[0])


def mollify_div(v, cfg, logger=None):
    """K_delta v for a ball field v (zero outside the ball)."""
    return BoundaryMollifier(cfg, v.N, logger).apply(v)


# Time mollification

@dataclass(frozen=True)
class TimeMollifierConfig:
    epsilon: float = DEFAULT_EPSILON

    def validate(self):
        if self.epsilon <= 0:
            raise InvalidConfig(f"epsilon = {self.epsilon} must be positive")
        return self


@dataclass(frozen=True, eq=False)
class FieldSeries:
    """Ball or torus fields sampled at increasing times; values has shape (M, 3, N, N, N)."""

    times: np.ndarray
    values: np.ndarray
    domain: Domain = Domain.BALL

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 5 or values.shape[0] != len(times) or values.shape[1] != 3:
            raise InvalidConfig(f"series values must have shape (M, 3, N, N, N), got {values.shape}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.times)

    @property
    def N(self):
        return self.values.shape[2]

    def frame(self, i):
        return SampledField(self.domain, self.values[i], float(self.times[i]))

    def with_values(self, values):
        return FieldSeries(self.times, values, self.domain)

    def uniform_step(self):
        """The common time step.

        Raises:
            InvalidConfig: for fewer than two samples or a non-uniform grid
        """
        if len(self.times) < 2:
            raise InvalidConfig("time mollification needs at least two samples")
        steps = np.diff(self.times)
        dt = float(steps[0])
        if dt <= 0 or not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
            raise InvalidConfig("time samples must be uniform and increasing")
        return dt


def modulated_series(field, times, modulation=None):
    """FieldSeries m(t) f for a fixed field f; m defaults to 1."""
    times = np.asarray(times, dtype=np.float64)
    factors = np.ones_like(times) if modulation is None else np.asarray(modulation(times), dtype=np.float64)
    values = factors[:, None, None, None, None] * field.values[None]
    return FieldSeries(times, values, field.domain)


def time_kernel_weights(epsilon, dt):
    """Offsets j = -J..J and the normalized samples of k_eps at j dt."""
    J = int(np.floor(epsilon / dt))
    offsets = np.arange(-J, J + 1)
    weights = bump(offsets * dt / epsilon)
    return offsets, weights / np.sum(weights)


def mollify_time(series, cfg):
    """Discrete convolution in time with k_eps, per grid point.

    Near the ends of the series the kernel is truncated and renormalized
    over the available samples.

    Raises:
        InvalidConfig: if the time grid is not uniform or coarser than eps/8
    """
    cfg.validate()
    dt = series.uniform_step()
    if dt > cfg.epsilon / 8 * (1 + 1e-12):
        raise InvalidConfig(f"time step {dt} is coarser than epsilon/8 = {cfg.epsilon / 8}")
    offsets, weights = time_kernel_weights(cfg.epsilon, dt)
    v = series.values
    M = len(series)
    out = np.zeros_like(v)
    mass = np.zeros(M)
    for j, w in zip(offsets, weights):
        if abs(j) >= M:
            continue
        if j >= 0:
            out[j:] += w * v[:M - j]
            mass[j:] += w
        else:
            out[:M + j] += w * v[-j:]
            mass[:M + j] += w
    return series.with_values(out / mass[:, None, None, None, None])


def sinusoid_damping(epsilon, dt, omega):
    """Factor by which mollify_time scales sin(omega t) at interior times."""
    offsets, weights = time_kernel_weights(epsilon, dt)
    return float(np.sum(weights * np.cos(omega * offsets * dt)))


def kernel_fourier_factor(epsilon, omega):
    """int k(s) cos(omega eps s) ds over [-1, 1] for the unit-mass bump k."""
    mass, _ = quad(lambda s: float(bump(s)), -1.0, 1.0)
    moment, _ = quad(lambda s: float(bump(s)) * np.cos(omega * epsilon * s), -1.0, 1.0)
    return moment / mass


# Experiments

def _require_decreasing(deltas):
    deltas = [float(d) for d in deltas]
    if not deltas or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise InvalidConfig(f"deltas must be a nonempty strictly decreasing list, got {deltas}")
    return deltas


def _difference_norm(a, b, q, N):
    diff = np.sqrt(np.sum((a - b) ** 2, axis=0))
    return array_lq_norm(diff, q, cell_volume(Domain.BALL, N))


def _time_norm(values, p, dt):
    if Q(p).is_infinite:
        return float(max(values))
    pf = Q(p).to_float()
    return float(np.sum(np.asarray(values) ** pf) * dt) ** (1.0 / pf)


def convergence_experiment(v, deltas, q, xi=DEFAULT_XI, quad_order=DEFAULT_QUAD_ORDER):
    """Rows (delta, ||K_delta v - v||_q)."""
    rows = []
    for delta in _require_decreasing(deltas):
        w = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), v.N).apply(v)
        rows.append((delta, _difference_norm(w.values, v.values, q, v.N)))
        logger.debug(f"convergence delta={delta}: {rows[-1][1]:.6e}")
    return rows


def gradient_bound_experiment(v, deltas, q, xi=DEFAULT_XI, quad_order=DEFAULT_QUAD_ORDER):
    """Rows (delta, ||grad K_delta v||_q).

    Bounded in delta only when v vanishes on the sphere. A slip field is
    cut off across a layer of width about delta, so the column grows like
    delta^-(1 - 1/q); see gradient_growth_note.
    """
    rows = []
    for delta in _require_decreasing(deltas):
        w = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), v.N).apply(v)
        rows.append((delta, gradient_lq_norm(w, q)))
    return rows


def gradient_growth_note(v, q):
    """CSV note for gradient_bound_experiment rows of v; empty unless v is a slip field."""
    if v.boundary is not BoundaryCondition.SLIP:
        return ""
    q = Q(q)
    rate = ONE - q.reciprocal()
    return f"slip field grows like delta^-({format_rational(rate)}); not bounded by ||grad v||_{format_rational(q)}"


def support_margin(w):
    """Distance from the outermost nonzero sample to the sphere; 1 for the zero field."""
    if w.domain is not Domain.BALL:
        raise InvalidConfig("support_margin is defined for ball fields only")
    nonzero = np.any(w.values != 0.0, axis=0)
    if not np.any(nonzero):
        return 1.0
    r = np.linalg.norm(w.coordinates(), axis=0)
    return float(1.0 - np.max(r[nonzero]))


def support_experiment(v, deltas, xi=DEFAULT_XI, quad_order=DEFAULT_QUAD_ORDER):
    """Rows (delta, support margin of K_delta v, 2 delta xi)."""
    rows = []
    for delta in _require_decreasing(deltas):
        w = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), v.N).apply(v)
        rows.append((delta, support_margin(w), 2 * delta * float(xi)))
    return rows


def commutation_residual(series, delta, epsilon, xi=DEFAULT_XI, quad_order=DEFAULT_QUAD_ORDER):
    """max |(K_delta v)_eps - K_delta(v_eps)| over all samples."""
    mollifier = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), series.N)
    tcfg = TimeMollifierConfig(epsilon)
    space_first = mollify_time(series.with_values(mollifier.apply_array(series.values)), tcfg)
    time_first = mollifier.apply_array(mollify_time(series, tcfg).values)
    return float(np.max(np.abs(space_first.values - time_first))) if space_first.values.size else 0.0


def uniform_time_check(series, deltas, q, xi=DEFAULT_XI, quad_order=DEFAULT_QUAD_ORDER):
    """Rows (delta, max over samples of ||K_delta v(t) - v(t)||_q)."""
    rows = []
    for delta in _require_decreasing(deltas):
        mollified = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), series.N).apply_array(series.values)
        errors = [_difference_norm(mollified[i], series.values[i], q, series.N) for i in range(len(series))]
        rows.append((delta, max(errors)))
    return rows


def time_mollified_gradient_bound(series, deltas, epsilon, q, p=INF,
                                  xi=DEFAULT_XI, quad_order=DEFAULT_QUAD_ORDER):
    """Rows (delta, ||grad (K_delta v)_eps||_{L^p(L^q)}) at fixed eps."""
    dt = series.uniform_step()
    tcfg = TimeMollifierConfig(epsilon)
    rows = []
    for delta in _require_decreasing(deltas):
        mollifier = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), series.N)
        smoothed = mollify_time(series.with_values(mollifier.apply_array(series.values)), tcfg)
        norms = [gradient_lq_norm(smoothed.frame(i), q) for i in range(len(smoothed))]
        rows.append((delta, _time_norm(norms, p, dt)))
    return rows


def space_time_convergence_experiment(series, deltas, epsilon, q,
                                      xi=DEFAULT_XI, quad_order=DEFAULT_QUAD_ORDER):
    """Rows (delta, max over samples of ||(K_delta v)_eps - v_eps||_q)."""
    tcfg = TimeMollifierConfig(epsilon)
    reference = mollify_time(series, tcfg).values
    rows = []
    for delta in _require_decreasing(deltas):
        mollifier = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), series.N)
        smoothed = mollify_time(series.with_values(mollifier.apply_array(series.values)), tcfg).values
        errors = [_difference_norm(smoothed[i], reference[i], q, series.N) for i in range(len(series))]
        rows.append((delta, max(errors)))
    return rows


def divergence_refinement_experiment(field_factory, delta, grids, xi=DEFAULT_XI,
                                     quad_order=DEFAULT_QUAD_ORDER):
    """Rows (N, ||div K_delta v||_2 on an interior ball, ||div K_delta v||_2 on the ball).

    The interior radius 1 - delta - delta xi - 4 h_coarse is fixed across
    grids. Inside it every quadrature sample and every stencil point stays
    clear of the sphere, where a field with nonzero boundary values jumps.
    The ball column also covers the edge of the support, where K_delta v
    falls to zero across a layer about 2 delta xi wide; it only shrinks
    under refinement once that layer spans a few cells (REFINEMENT_DELTA,
    REFINEMENT_XI).

    Args:
        field_factory (callable): N -> ball SampledField
        delta (float): mollification parameter
        grids (list): increasing grid sizes
    """
    grids = [int(n) for n in grids]
    if not grids or any(b <= a for a, b in zip(grids, grids[1:])):
        raise InvalidConfig(f"grids must be strictly increasing, got {grids}")
    radius = 1.0 - delta - delta * float(xi) - 4 * (2.0 / grids[0])
    if radius <= 0:
        raise InvalidConfig(f"no interior region left for delta = {delta} on a {grids[0]}^3 grid")
    rows = []
    for N in grids:
        v = field_factory(N)
        w = BoundaryMollifier(MollifierConfig(delta, xi, quad_order), N).apply(v)
        div = np.abs(divergence(w))
        r = np.linalg.norm(w.coordinates(), axis=0)
        volume = cell_volume(Domain.BALL, N)
        rows.append((N, array_lq_norm(div[r < radius], 2, volume), array_lq_norm(div, 2, volume)))
        logger.info(f"divergence N={N}: interior {rows[-1][1]:.3e}, ball {rows[-1][2]:.3e}")
    return rows


def jacobian_smallness_experiment(deltas, N):
    """Rows (delta, sup |det(J) J^-1 - I|, sup / delta) on the N^3 ball grid."""
    rows = []
    for delta in _require_decreasing(deltas):
        X = grid_coordinates(Domain.BALL, N)
        r = np.linalg.norm(X, axis=0)
        sup = float(np.max(TransversalMap(delta).deviation(r[r < 1.0])))
        rows.append((delta, sup, sup / delta))
    return rows


def fitted_jacobian_constant(rows):
    """Smallest c with sup <= c delta on every row."""
    return max(ratio for _, _, ratio in rows)
