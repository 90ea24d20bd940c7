"""
Trkal Module

Pseudo-spectral Navier-Stokes solver on the torus for Beltrami initial data,
and the energy ledger used to check the energy equality

    1/2 ||u(t)||^2 + nu * int_0^t ||grad u||^2 ds = 1/2 ||u_0||^2.

The nonlinear term is taken in rotational form u x omega, dealiased with
the 3/2 rule and Leray-projected. The viscous term is integrated exactly
with an integrating factor inside classical RK4.
"""

from dataclasses import dataclass

import numpy as np

from config import DEFAULT_VISCOSITY, RK4_STABILITY_LIMIT
from exceptions import DivergedSimulation, InvalidConfig, UndefinedRatio
from fields import MIN_GRID, Domain, SampledField, beltrami_field, padded_size
from logger import get_logger


@dataclass(frozen=True, eq=False)
class EnergyLedger:
    """Per-step energy record of a run. Arrays share the length of ``times``."""

    times: np.ndarray
    energy: np.ndarray
    dissipation: np.ndarray
    enstrophy: np.ndarray
    beltrami_residuals: np.ndarray
    analytic_energy: np.ndarray
    lambda_: float
    viscosity: float

    def __len__(self):
        return len(self.times)


class TrkalSimulator:
    """RK4 integrating-factor solver for the NSE (or Euler with viscosity 0) on [0, 2pi)^3."""

    def __init__(self, N, viscosity=DEFAULT_VISCOSITY, logger=None):
        """
        Initialize the simulator.

        Args:
            N (int): Grid points per axis, even and at least 8
            viscosity (float, optional): Kinematic viscosity; 0 gives the Euler system
            logger (logging.Logger, optional): Logger instance
        """
        self.logger = logger or get_logger("trkal")
        if N < MIN_GRID or N % 2:
            raise InvalidConfig(f"grid size N = {N} must be even and at least {MIN_GRID}")
        if viscosity < 0:
            raise InvalidConfig(f"viscosity must be nonnegative, got {viscosity}")
        self.N = N
        self.M = padded_size(N)
        self.viscosity = float(viscosity)

        kx = np.fft.fftfreq(N, 1.0 / N)
        kz = np.fft.rfftfreq(N, 1.0 / N)
        kx[N // 2] = 0.0
        kz[-1] = 0.0
        self.K = np.stack(np.meshgrid(kx, kx, kz, indexing="ij"))
        self.K2 = np.sum(self.K ** 2, axis=0)
        self.K_over_K2 = self.K / np.where(self.K2 == 0, 1.0, self.K2)

        half = (N - 1) // 2
        self._src = np.r_[0:half + 1, N - half:N]
        self._dst = np.r_[0:half + 1, self.M - half:self.M]
        self._zsrc = np.arange(half + 1)
        self._retained = np.zeros(self.K2.shape, dtype=bool)
        self._retained[np.ix_(self._src, self._src, self._zsrc)] = True

        # rfft storage holds kz > 0 once; count those planes twice in Parseval sums
        self._weights = np.full(self.K2.shape, 2.0)
        self._weights[..., 0] = 1.0
        self._weights[..., -1] = 1.0
        self._parseval = (2 * np.pi) ** 3 / N ** 6

        self.logger.debug(f"TrkalSimulator N={N}, padded M={self.M}, viscosity={self.viscosity}")

    # Transforms

    def forward(self, values):
        return np.fft.rfftn(values, axes=(1, 2, 3)) * self._retained

    def backward(self, u_hat):
        return np.fft.irfftn(u_hat, s=(self.N,) * 3, axes=(1, 2, 3))

    def _to_padded(self, f_hat):
        M = self.M
        out = np.zeros((3, M, M, M // 2 + 1), dtype=complex)
        out[(Ellipsis,) + np.ix_(self._dst, self._dst, self._zsrc)] = \
            f_hat[(Ellipsis,) + np.ix_(self._src, self._src, self._zsrc)]
        return np.fft.irfftn(out * (M / self.N) ** 3, s=(M, M, M), axes=(1, 2, 3))

    def _from_padded(self, g):
        g_hat = np.fft.rfftn(g, axes=(1, 2, 3))
        out = np.zeros((3,) + self.K2.shape, dtype=complex)
        out[(Ellipsis,) + np.ix_(self._src, self._src, self._zsrc)] = \
            g_hat[(Ellipsis,) + np.ix_(self._dst, self._dst, self._zsrc)]
        return out * (self.N / self.M) ** 3

    # Right-hand side

    def curl_hat(self, u_hat):
        K = self.K
        return 1j * np.stack([
            K[1] * u_hat[2] - K[2] * u_hat[1],
            K[2] * u_hat[0] - K[0] * u_hat[2],
            K[0] * u_hat[1] - K[1] * u_hat[0],
        ])

    def nonlinear(self, u_hat):
        """Leray projection of the dealiased u x omega."""
        U = self._to_padded(u_hat)
        W = self._to_padded(self.curl_hat(u_hat))
        rhs = self._from_padded(np.cross(U, W, axis=0))
        return rhs - self.K * np.sum(rhs * self.K_over_K2, axis=0)

    def step(self, u_hat, dt):
        """One integrating-factor RK4 step.

        Raises:
            DivergedSimulation: if the new state is not finite
        """
        E = np.exp(-self.viscosity * self.K2 * dt / 2)
        E2 = E * E
        k1 = self.nonlinear(u_hat)
        k2 = self.nonlinear(E * (u_hat + dt / 2 * k1))
        k3 = self.nonlinear(E * u_hat + dt / 2 * k2)
        k4 = self.nonlinear(E2 * u_hat + dt * E * k3)
        new = E2 * u_hat + dt / 6 * (E2 * k1 + 2 * E * (k2 + k3) + k4)
        if not np.all(np.isfinite(new)):
            raise DivergedSimulation(f"non-finite spectral coefficients after a step of dt = {dt}")
        return new

    # Diagnostics

    def _norm_sq(self, a_hat):
        return self._parseval * float(np.sum(self._weights * np.abs(a_hat) ** 2))

    def energy(self, u_hat):
        return 0.5 * self._norm_sq(u_hat)

    def enstrophy(self, u_hat):
        """||grad u||_2^2."""
        return self._norm_sq(np.sqrt(self.K2) * u_hat)

    def beltrami_residual(self, u_hat, lambda_):
        norm = self._norm_sq(u_hat)
        if norm == 0:
            raise UndefinedRatio("Beltrami residual of the zero field is undefined")
        return np.sqrt(self._norm_sq(self.curl_hat(u_hat) - lambda_ * u_hat) / norm)

    def check_cfl(self, u_hat, dt):
        """Raise InvalidConfig if dt violates the RK4 advective limit."""
        u_max = float(np.max(np.sqrt(np.sum(self.backward(u_hat) ** 2, axis=0))))
        k_max = np.sqrt(3.0) * ((self.N - 1) // 2)
        cfl = dt * u_max * k_max
        if cfl > RK4_STABILITY_LIMIT:
            raise InvalidConfig(f"dt = {dt} gives advective CFL number {cfl:.3f} > {RK4_STABILITY_LIMIT}")
        return cfl

    # Runs

    def run(self, initial, t_end, dt, lambda_):
        """Integrate ``initial`` to ``t_end`` recording the ledger every step.

        Args:
            initial (SampledField): torus field
            t_end (float): final time, a whole number of steps of dt
            dt (float): time step
            lambda_ (float): Beltrami factor used for residuals and the analytic decay

        Returns:
            EnergyLedger: the record of the run
        """
        if initial.domain is not Domain.TORUS or initial.N != self.N:
            raise InvalidConfig(f"initial field must be a torus field with N = {self.N}")
        if dt <= 0 or t_end < 0:
            raise InvalidConfig(f"need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}")
        n_steps = int(round(t_end / dt))
        if abs(n_steps * dt - t_end) > 1e-9 * max(1.0, t_end):
            raise InvalidConfig(f"t_end = {t_end} is not a whole number of steps of dt = {dt}")

        u_hat = self.forward(initial.values)
        if n_steps:
            self.check_cfl(u_hat, dt)
        self.logger.info(f"Running {n_steps} steps of dt={dt} (N={self.N}, viscosity={self.viscosity})")

        times = [0.0]
        energy = [self.energy(u_hat)]
        enstrophy = [self.enstrophy(u_hat)]
        residuals = [self.beltrami_residual(u_hat, lambda_)]
        for n in range(1, n_steps + 1):
            u_hat = self.step(u_hat, dt)
            times.append(n * dt)
            energy.append(self.energy(u_hat))
            enstrophy.append(self.enstrophy(u_hat))
            residuals.append(self.beltrami_residual(u_hat, lambda_))
            if n % 100 == 0:
                self.logger.debug(f"step {n}/{n_steps}: E={energy[-1]:.12e}")

        times = np.asarray(times)
        enstrophy = np.asarray(enstrophy)
        increments = 0.5 * dt * (enstrophy[1:] + enstrophy[:-1])
        dissipation = self.viscosity * np.concatenate(([0.0], np.cumsum(increments)))
        energy = np.asarray(energy)
        analytic = energy[0] * np.exp(-2 * self.viscosity * lambda_ ** 2 * times)
        return EnergyLedger(
            times=times,
            energy=energy,
            dissipation=dissipation,
            enstrophy=enstrophy,
            beltrami_residuals=np.asarray(residuals),
            analytic_energy=analytic,
            lambda_=float(lambda_),
            viscosity=self.viscosity,
        )


def step_nse_spectral(state, dt, viscosity=DEFAULT_VISCOSITY):
    """One RK4 integrating-factor step of the torus NSE from ``state``."""
    if state.domain is not Domain.TORUS:
        raise InvalidConfig("step_nse_spectral needs a torus field")
    sim = TrkalSimulator(state.N, viscosity)
    u_hat = sim.step(sim.forward(state.values), dt)
    stamp = (state.time_stamp or 0.0) + dt
    return state.with_values(sim.backward(u_hat), time_stamp=stamp)


def run_trkal(spec, t_end, dt, N, viscosity=DEFAULT_VISCOSITY, logger=None):
    """Simulate Beltrami data ``spec`` and return its energy ledger."""
    spec.validate()
    initial = beltrami_field(spec, N)
    return TrkalSimulator(N, viscosity, logger).run(initial, t_end, dt, spec.lambda_)


def energy_equality_residual(ledger):
    """max_t |E(t) + D(t) - E(0)| / E(0).

    Raises:
        UndefinedRatio: if E(0) = 0
    """
    if len(ledger) == 0:
        raise InvalidConfig("empty energy ledger")
    e0 = ledger.energy[0]
    if e0 == 0:
        raise UndefinedRatio("energy equality residual undefined for zero initial energy")
    return float(np.max(np.abs(ledger.energy + ledger.dissipation - e0)) / e0)


def analytic_deviation(ledger):
    """max_t |E(t) - E_analytic(t)| / E_analytic(t)."""
    return float(np.max(np.abs(ledger.energy - ledger.analytic_energy) / ledger.analytic_energy))


def enstrophy_lock_deviation(ledger):
    """max_t | ||grad u||^2 / (2E) - lambda^2 | / lambda^2."""
    ratio = ledger.enstrophy / (2 * ledger.energy)
    return float(np.max(np.abs(ratio - ledger.lambda_ ** 2)) / ledger.lambda_ ** 2)


def residual_convergence_order(spec, t_end, dt, N, viscosity=DEFAULT_VISCOSITY):
    """Ratio of energy-equality residuals at dt and dt/2."""
    coarse = energy_equality_residual(run_trkal(spec, t_end, dt, N, viscosity))
    fine = energy_equality_residual(run_trkal(spec, t_end, dt / 2, N, viscosity))
    if fine == 0:
        raise UndefinedRatio("fine-step residual vanished; convergence order undefined")
    return coarse / fine


def ledger_rows(ledger):
    """CSV rows: t, E, D, E_plus_D_minus_E0_rel, beltrami_residual, analytic_E."""
    e0 = ledger.energy[0]
    rows = []
    for i in range(len(ledger)):
        rel = (ledger.energy[i] + ledger.dissipation[i] - e0) / e0 if e0 else 0.0
        rows.append((
            float(ledger.times[i]),
            float(ledger.energy[i]),
            float(ledger.dissipation[i]),
            float(rel),
            float(ledger.beltrami_residuals[i]),
            float(ledger.analytic_energy[i]),
        ))
    return rows
