"""
Fields Module

Vector fields sampled on the periodic torus [0, 2pi)^3 or on the unit ball
(cell-centered grid on the bounding box [-1, 1]^3, zero outside the ball),
with differential operators, norms and the residuals of the pointwise
identities satisfied by Beltrami flows.

Torus derivatives are spectral. Quadratic products are dealiased with the
3/2 rule by zero-padding. Ball derivatives are fourth-order finite
differences.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from criteria import BoundaryCondition
from exceptions import InvalidConfig, UndefinedRatio
from exponents import Q
from logger import get_logger

logger = get_logger("fields")

MIN_GRID = 8


class Domain(Enum):
    TORUS = "torus"
    BALL = "ball"


def grid_axis(domain, N):
    """1-D sample positions along one axis."""
    if domain is Domain.TORUS:
        return 2 * np.pi * np.arange(N) / N
    h = 2.0 / N
    return -1.0 + (np.arange(N) + 0.5) * h


def grid_spacing(domain, N):
    return 2 * np.pi / N if domain is Domain.TORUS else 2.0 / N


def cell_volume(domain, N):
    return grid_spacing(domain, N) ** 3


def grid_coordinates(domain, N):
    """Coordinates as an array of shape (3, N, N, N), ij indexing."""
    x = grid_axis(domain, N)
    return np.stack(np.meshgrid(x, x, x, indexing="ij"))


def ball_mask(N):
    """Grid points strictly inside the unit ball."""
    X = grid_coordinates(Domain.BALL, N)
    return np.sum(X ** 2, axis=0) < 1.0


@dataclass(frozen=True, eq=False)
class SampledField:
    """A 3-component field on a uniform N^3 grid.

    Values are copied and made read-only. Ball fields are zeroed outside
    the unit ball on construction.
    """

    domain: Domain
    values: np.ndarray
    time_stamp: float = None
    boundary: BoundaryCondition = None
    N: int = field(init=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 4 or values.shape[0] != 3 or len(set(values.shape[1:])) != 1:
            raise InvalidConfig(f"field values must have shape (3, N, N, N), got {values.shape}")
        N = values.shape[1]
        if self.domain is Domain.BALL:
            values = np.where(ball_mask(N), values, 0.0)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "N", N)

    @property
    def spacing(self):
        return grid_spacing(self.domain, self.N)

    @property
    def cell_volume(self):
        return cell_volume(self.domain, self.N)

    def coordinates(self):
        return grid_coordinates(self.domain, self.N)

    def with_values(self, values, time_stamp=None):
        """A field on the same grid and domain with new values."""
        stamp = self.time_stamp if time_stamp is None else time_stamp
        return SampledField(self.domain, values, stamp, self.boundary)

    def magnitude(self):
        return np.sqrt(np.sum(self.values ** 2, axis=0))


@dataclass(frozen=True)
class BeltramiMode:
    k: tuple
    amplitude: float = 1.0
    phase: float = 0.0


@dataclass(frozen=True)
class BeltramiSpec:
    """Constant-lambda Beltrami data: curl eigenmodes with |k| = |lambda|."""

    lambda_: float
    modes: tuple

    def validate(self):
        if self.lambda_ == 0:
            raise InvalidConfig("lambda = 0 has no nonzero curl eigenmode on the integer lattice")
        if not self.modes:
            raise InvalidConfig("a Beltrami spec needs at least one mode")
        target = self.lambda_ ** 2
        for mode in self.modes:
            k2 = sum(int(c) ** 2 for c in mode.k)
            if k2 == 0 or abs(k2 - target) > 1e-9 * max(1.0, target):
                raise InvalidConfig(f"mode k = {mode.k} has |k|^2 = {k2}, expected lambda^2 = {target}")
        return self


def _require_torus(f, operation):
    if f.domain is not Domain.TORUS:
        raise InvalidConfig(f"{operation} is defined for torus fields only")


def _require_grid(N):
    if N < MIN_GRID:
        raise InvalidConfig(f"grid size N = {N} below the minimum {MIN_GRID}")


# Spectral machinery

def wavenumbers(N):
    """Integer wavenumbers (3, N, N, N) in numpy FFT order, Nyquist zeroed."""
    k = np.fft.fftfreq(N, 1.0 / N)
    if N % 2 == 0:
        k[N // 2] = 0.0
    return np.stack(np.meshgrid(k, k, k, indexing="ij"))


def _retained_index(N):
    """FFT indices of the modes |k| < N/2 and their positions on a padded grid."""
    half = (N - 1) // 2
    src = np.r_[0:half + 1, N - half:N]
    return src, half


def pad_spectrum(f_hat, M):
    """Zero-pad a full FFT spectrum from N^3 to M^3, keeping the physical scale."""
    N = f_hat.shape[-1]
    src, half = _retained_index(N)
    dst = np.r_[0:half + 1, M - half:M]
    out = np.zeros(f_hat.shape[:-3] + (M, M, M), dtype=complex)
    out[(Ellipsis,) + np.ix_(dst, dst, dst)] = f_hat[(Ellipsis,) + np.ix_(src, src, src)]
    return out * (M / N) ** 3


def truncate_spectrum(g_hat, N):
    """Inverse of pad_spectrum: keep modes |k| < N/2 of an M^3 spectrum."""
    M = g_hat.shape[-1]
    src, half = _retained_index(N)
    dst = np.r_[0:half + 1, M - half:M]
    out = np.zeros(g_hat.shape[:-3] + (N, N, N), dtype=complex)
    out[(Ellipsis,) + np.ix_(src, src, src)] = g_hat[(Ellipsis,) + np.ix_(dst, dst, dst)]
    return out * (N / M) ** 3


def padded_size(N):
    M = (3 * N + 1) // 2
    return M + (M % 2)


def _fftn(values):
    return np.fft.fftn(values, axes=(-3, -2, -1))


def _ifftn(values_hat):
    return np.fft.ifftn(values_hat, axes=(-3, -2, -1)).real


def leray_project(f_hat, K):
    """Remove the gradient part of a spectral vector field."""
    K2 = np.sum(K ** 2, axis=0)
    K2 = np.where(K2 == 0, 1.0, K2)
    return f_hat - K * (np.sum(K * f_hat, axis=0) / K2)


# Finite differences on the ball's bounding box

def fd_derivative(arr, axis, h):
    """Fourth-order first derivative along ``axis``; one-sided fourth order at the edges."""
    f = np.moveaxis(np.asarray(arr, dtype=np.float64), axis, 0)
    d = np.empty_like(f)
    d[2:-2] = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    return np.moveaxis(d, 0, axis)


def gradient_tensor(f):
    """G[i, j] = d f_i / d x_j, shape (3, 3, N, N, N)."""
    if f.domain is Domain.TORUS:
        K = wavenumbers(f.N)
        f_hat = _fftn(f.values)
        return _ifftn(1j * K[None, :] * f_hat[:, None])
    h = f.spacing
    return np.stack([
        np.stack([fd_derivative(f.values[i], j, h) for j in range(3)])
        for i in range(3)
    ])


def gradient_of_scalar(phi, domain):
    """grad phi for scalar samples of shape (N, N, N)."""
    phi = np.asarray(phi, dtype=np.float64)
    N = phi.shape[0]
    if domain is Domain.TORUS:
        return SampledField(domain, _ifftn(1j * wavenumbers(N) * _fftn(phi)))
    h = grid_spacing(domain, N)
    return SampledField(domain, np.stack([fd_derivative(phi, j, h) for j in range(3)]))


def _curl_from_gradient(G):
    return np.stack([G[2, 1] - G[1, 2], G[0, 2] - G[2, 0], G[1, 0] - G[0, 1]])


def curl(f):
    """Componentwise curl; spectral on the torus, finite differences on the ball."""
    return f.with_values(_curl_from_gradient(gradient_tensor(f)))


def divergence(f):
    """Scalar samples of div f. Ball results are zero outside the ball."""
    G = gradient_tensor(f)
    div = G[0, 0] + G[1, 1] + G[2, 2]
    if f.domain is Domain.BALL:
        div = np.where(ball_mask(f.N), div, 0.0)
    return div


# Norms

def array_lq_norm(magnitude, q, volume):
    """(sum |m|^q dV)^(1/q) for nonnegative samples; grid max for q = inf."""
    qf = float(q) if isinstance(q, (float, np.floating)) else Q(q).to_float()
    if np.isinf(qf):
        return float(np.max(np.abs(magnitude))) if np.size(magnitude) else 0.0
    if qf < 1:
        raise InvalidConfig(f"L^q norm needs q >= 1, got {qf}")
    return float(np.sum(np.abs(magnitude) ** qf) * volume) ** (1.0 / qf)


def lq_norm(f, q):
    """Quadrature L^q norm of the pointwise Euclidean magnitude."""
    return array_lq_norm(f.magnitude(), q, f.cell_volume)


def gradient_lq_norm(f, q):
    """L^q norm of the Frobenius magnitude of grad f."""
    G = gradient_tensor(f)
    return array_lq_norm(np.sqrt(np.sum(G ** 2, axis=(0, 1))), q, f.cell_volume)


# Identity residuals

def lamb_vector(f):
    """omega x u."""
    w = curl(f).values
    return f.with_values(np.cross(w, f.values, axis=0))


def helicity_density_residual(f):
    """max |(omega x u) . u|."""
    lamb = lamb_vector(f).values
    return float(np.max(np.abs(np.sum(lamb * f.values, axis=0))))


def lamb_residual(f):
    """L^2 norm of (u.grad)u - omega x u - grad|u|^2/2, all products dealiased."""
    _require_torus(f, "lamb_residual")
    N = f.N
    M = padded_size(N)
    K = wavenumbers(N)

    u_hat = _fftn(f.values)
    G_hat = 1j * K[None, :] * u_hat[:, None]
    w_hat = _curl_from_gradient(G_hat)

    U = _ifftn(pad_spectrum(u_hat, M))
    G = _ifftn(pad_spectrum(G_hat, M))
    W = _ifftn(pad_spectrum(w_hat, M))

    advection = np.einsum("jxyz,ijxyz->ixyz", U, G)
    lamb = np.cross(W, U, axis=0)
    kinetic = 0.5 * np.sum(U ** 2, axis=0)

    residual_hat = (
        truncate_spectrum(_fftn(advection), N)
        - truncate_spectrum(_fftn(lamb), N)
        - 1j * K * truncate_spectrum(_fftn(kinetic), N)
    )
    residual = _ifftn(residual_hat)
    return array_lq_norm(np.sqrt(np.sum(residual ** 2, axis=0)), 2, f.cell_volume)


def beltrami_residual(f, lambda_):
    """||curl f - lambda f||_2 / ||f||_2.

    Raises:
        UndefinedRatio: for the zero field
    """
    norm = lq_norm(f, 2)
    if norm == 0:
        raise UndefinedRatio("Beltrami residual of the zero field is undefined")
    w = curl(f).values
    diff = w - lambda_ * f.values
    return array_lq_norm(np.sqrt(np.sum(diff ** 2, axis=0)), 2, f.cell_volume) / norm


def von_wahl_ratio(f, q):
    """||grad f||_q / ||curl f||_q on the torus.

    Raises:
        UndefinedRatio: if the curl vanishes
    """
    _require_torus(f, "von_wahl_ratio")
    G = gradient_tensor(f)
    grad_norm = array_lq_norm(np.sqrt(np.sum(G ** 2, axis=(0, 1))), q, f.cell_volume)
    w = _curl_from_gradient(G)
    curl_norm = array_lq_norm(np.sqrt(np.sum(w ** 2, axis=0)), q, f.cell_volume)
    if curl_norm == 0:
        raise UndefinedRatio("von Wahl ratio undefined for curl-free fields")
    return grad_norm / curl_norm


# Torus constructors

def abc_flow(A, B, C, N):
    """(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x); curl u = u."""
    _require_grid(N)
    x, y, z = grid_coordinates(Domain.TORUS, N)
    values = np.stack([
        A * np.sin(z) + C * np.cos(y),
        B * np.sin(x) + A * np.cos(z),
        C * np.sin(y) + B * np.cos(x),
    ])
    return SampledField(Domain.TORUS, values, 0.0)


def _polarization(k):
    """Right-handed orthonormal (e1, e2, k/|k|) with e1 along the least aligned axis."""
    k = np.asarray(k, dtype=np.float64)
    khat = k / np.linalg.norm(k)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(khat)))] = 1.0
    e1 = axis - np.dot(axis, khat) * khat
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(khat, e1)
    return e1, e2


def curl_eigenfield(k, phase, N, amplitude=1.0, helicity=1):
    """Plane-wave curl eigenfield with curl u = helicity * |k| * u.

    u = A (e1 sin(k.x + phase) + s e2 cos(k.x + phase)) with (e1, e2, k/|k|)
    right-handed and s = helicity. For k = (0, 0, 1) and s = 1 this is
    (sin z, cos z, 0), the A = 1 ABC flow.
    """
    _require_grid(N)
    if not any(k):
        raise InvalidConfig("curl eigenfield needs k != 0")
    e1, e2 = _polarization(k)
    X = grid_coordinates(Domain.TORUS, N)
    theta = np.tensordot(np.asarray(k, dtype=np.float64), X, axes=1) + phase
    values = amplitude * (
        e1[:, None, None, None] * np.sin(theta)
        + np.sign(helicity) * e2[:, None, None, None] * np.cos(theta)
    )
    return SampledField(Domain.TORUS, values, 0.0)


def beltrami_field(spec, N):
    """Sum of the modes of a validated BeltramiSpec."""
    spec.validate()
    helicity = 1 if spec.lambda_ > 0 else -1
    total = np.zeros((3, N, N, N))
    for mode in spec.modes:
        total += curl_eigenfield(mode.k, mode.phase, N, mode.amplitude, helicity).values
    return SampledField(Domain.TORUS, total, 0.0)


def lattice_modes(lambda_):
    """Integer vectors with |k| = |lambda|, one per +-k pair."""
    target = lambda_ ** 2
    radius = int(np.ceil(abs(lambda_)))
    found = []
    for kx in range(-radius, radius + 1):
        for ky in range(-radius, radius + 1):
            for kz in range(-radius, radius + 1):
                k = (kx, ky, kz)
                if abs(kx * kx + ky * ky + kz * kz - target) > 1e-9 * max(1.0, target):
                    continue
                if tuple(-c for c in k) in found:
                    continue
                found.append(k)
    return found


def random_beltrami_spec(lambda_, seed):
    """All lattice modes of |lambda| with random amplitudes in [0.5, 1) and phases."""
    modes = lattice_modes(lambda_)
    if not modes:
        raise InvalidConfig(f"no integer wavevector has |k| = {abs(lambda_)}")
    rng = np.random.default_rng(seed)
    return BeltramiSpec(lambda_, tuple(
        BeltramiMode(k, float(rng.uniform(0.5, 1.0)), float(rng.uniform(0.0, 2 * np.pi)))
        for k in modes
    ))


def random_solenoidal_field(N, k_max, seed):
    """Band-limited (|k_i| <= k_max) divergence-free torus field with unit RMS."""
    _require_grid(N)
    if not 1 <= k_max < N // 2:
        raise InvalidConfig(f"k_max = {k_max} must lie in [1, N/2)")
    rng = np.random.default_rng(seed)
    K = wavenumbers(N)
    k = np.fft.fftfreq(N, 1.0 / N)
    band = np.all(np.abs(np.stack(np.meshgrid(k, k, k, indexing="ij"))) <= k_max, axis=0)
    f_hat = _fftn(rng.standard_normal((3, N, N, N))) * band
    values = _ifftn(leray_project(f_hat, K))
    rms = np.sqrt(np.mean(np.sum(values ** 2, axis=0)))
    return SampledField(Domain.TORUS, values / rms, 0.0)


# Ball constructors

def rigid_rotation(a, N):
    """a x x on the unit ball (tangential on the sphere)."""
    X = grid_coordinates(Domain.BALL, N)
    a = np.asarray(a, dtype=np.float64)
    return SampledField(Domain.BALL, np.cross(a[:, None, None, None], X, axis=0), 0.0,
                        BoundaryCondition.SLIP)


def swirl_bump(a, N):
    """(a x x)(1 - |x|^2)^2, vanishing with its gradient on the sphere."""
    X = grid_coordinates(Domain.BALL, N)
    r2 = np.sum(X ** 2, axis=0)
    a = np.asarray(a, dtype=np.float64)
    values = np.cross(a[:, None, None, None], X, axis=0) * (1 - r2) ** 2
    return SampledField(Domain.BALL, values, 0.0, BoundaryCondition.NO_SLIP)


def poloidal_field(a, N):
    """curl((1 - |x|^2)^3 a x x), divergence-free and zero on the sphere."""
    X = grid_coordinates(Domain.BALL, N)
    a = np.asarray(a, dtype=np.float64)[:, None, None, None]
    r2 = np.sum(X ** 2, axis=0)
    g = (1 - r2) ** 3
    dg_over_r = -6 * (1 - r2) ** 2
    # curl(g a x x) = grad g x (a x x) + g curl(a x x) = dg/r (x.x a - (x.a) x) + 2 g a
    x_dot_a = np.sum(X * a, axis=0)
    values = dg_over_r * (r2 * a - x_dot_a * X) + 2 * g * a
    return SampledField(Domain.BALL, values, 0.0, BoundaryCondition.NO_SLIP)


BALL_TEST_FIELDS = {
    "rigid-rotation": rigid_rotation,
    "swirl-bump": swirl_bump,
    "poloidal": poloidal_field,
}
