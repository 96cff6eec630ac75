"""Propagator integration and metric reconstruction.

The Hermitian propagator u(t) is integrated with classical fixed-step
RK4 (no re-unitarization, so the unitarity defect stays visible as a
diagnostic). The auxiliary propagator is built three ways: from its
definition omega(t)^-1 u(t) omega(0), from the naive generator H (kept
deliberately, so its failure for moving metrics can be exhibited), and
from the corrected generator H - i hbar omega^-1 omega_dot.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import linalg, spaces
from .errors import IllConditioned, NotHermitian, ValidationError
from .schedules import OmegaSchedule, OperatorSchedule, TimeGrid

DEFAULT_TOLERANCES = {
    "eps_herm": 1e-10,
    "eps_pos": 1e-10,
    "cond_max": 1e8,
    "eps_res": 1e-8,          # quasi-Hermiticity gate for direct-mode scenarios
    "norm_drift": 1e-8,
    "metric_recon": 1e-6,
    "qh": 1e-8,
    "corrected_analytic": 1e-6,
    "corrected_fd": 1e-4,
    "naive_floor": 1e-2,      # minimum naive residual when the metric moves
    "naive_quiet": 1e-6,      # maximum naive residual when it does not
    "omega_motion": 1e-2,     # |omega_dot| above which the metric counts as moving
}


def _rk4_series(generator: Callable[[float], np.ndarray], grid: TimeGrid, dim: int) -> np.ndarray:
    """Integrate U'(t) = M(t) U(t), U(t_start) = I, on the full grid."""
    ts = grid.times()
    dt = grid.spacing
    out = np.empty((grid.steps + 1, dim, dim), dtype=complex)
    u = np.eye(dim, dtype=complex)
    out[0] = u
    for k in range(grid.steps):
        t = ts[k]
        m1 = generator(t)
        m2 = generator(t + 0.5 * dt)
        m4 = generator(t + dt)
        k1 = m1 @ u
        k2 = m2 @ (u + (0.5 * dt) * k1)
        k3 = m2 @ (u + (0.5 * dt) * k2)
        k4 = m4 @ (u + dt * k3)
        u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = u
    return out


def integrate_u(h_of_t: Callable[[float], np.ndarray], grid: TimeGrid, hbar: float = 1.0,
                dim: int | None = None, eps_herm: float = linalg.EPS_HERM) -> np.ndarray:
    """RK4 series for i hbar u' = h(t) u with a Hermiticity gate at every stage."""
    if dim is None:
        dim = np.asarray(h_of_t(grid.t_start)).shape[0]
    scale = -1j / hbar

    def gen(t):
        h = np.asarray(h_of_t(t), dtype=complex)
        defect = linalg.herm_defect(h)
        if defect > eps_herm * linalg.fro_norm(h):
            raise NotHermitian(defect, t=t)
        return scale * h

    return _rk4_series(gen, grid, dim)


def ur_from_definition(u_series: np.ndarray, omega_sched: OmegaSchedule, grid: TimeGrid) -> np.ndarray:
    ts = grid.times()
    omega0 = omega_sched.omega(ts[0])
    out = np.empty_like(u_series)
    for k, t in enumerate(ts):
        out[k] = omega_sched.omega_inv(t) @ u_series[k] @ omega0
    return out


def ur_from_naive_generator(h_big_of_t: Callable[[float], np.ndarray], grid: TimeGrid,
                            hbar: float = 1.0, dim: int | None = None) -> np.ndarray:
    """Integrate i hbar U' = H(t) U. Wrong whenever the metric moves; kept so
    the failure can be measured rather than asserted."""
    if dim is None:
        dim = np.asarray(h_big_of_t(grid.t_start)).shape[0]
    scale = -1j / hbar
    return _rk4_series(lambda t: scale * np.asarray(h_big_of_t(t), dtype=complex), grid, dim)


def corrected_generator(h_big_of_t, omega_sched: OmegaSchedule, hbar: float = 1.0):
    """G(t) = H(t) - i hbar omega(t)^-1 omega_dot(t)."""
    def gen(t):
        return (np.asarray(h_big_of_t(t), dtype=complex)
                - 1j * hbar * (omega_sched.omega_inv(t) @ omega_sched.omega_dot(t)))
    return gen


def ur_from_corrected_generator(h_big_of_t, omega_sched: OmegaSchedule, grid: TimeGrid,
                                hbar: float = 1.0, dim: int | None = None) -> np.ndarray:
    if dim is None:
        dim = np.asarray(h_big_of_t(grid.t_start)).shape[0]
    g = corrected_generator(h_big_of_t, omega_sched, hbar)
    scale = -1j / hbar
    return _rk4_series(lambda t: scale * g(t), grid, dim)


def metric_from_ur(ur_series: np.ndarray, theta0: np.ndarray,
                   cond_max: float = linalg.COND_MAX) -> np.ndarray:
    """Per-node reconstruction (U^-1)† theta(0) U^-1."""
    th0 = linalg.as_matrix(theta0)
    out = np.empty_like(ur_series)
    for k in range(ur_series.shape[0]):
        try:
            ui = linalg.inverse(ur_series[k], cond_max)
        except IllConditioned as e:
            raise IllConditioned(e.cond, t=k) from None
        out[k] = ui.conj().T @ th0 @ ui
    return out


@dataclass
class Scenario:
    """Full problem description for one run.

    Exactly one of h (pair mode: Hermitian generator given) or h_big
    (direct mode: quasi-Hermitian generator given) is set; the other is
    derived through the metric root.
    """
    name: str
    dim: int
    grid: TimeGrid
    theta: OperatorSchedule
    initial_state: np.ndarray
    h: OperatorSchedule | None = None        # pair mode
    h_big: OperatorSchedule | None = None    # direct mode
    hbar: float = 1.0
    tolerances: dict = field(default_factory=dict)
    omega_analytic: tuple | None = None      # (omega, omega_dot, [omega_inv]) callables
    dyson: np.ndarray | None = None
    u_oracle: Callable | None = None         # u_oracle(elapsed, hbar) -> matrix

    def __post_init__(self):
        if (self.h is None) == (self.h_big is None):
            raise ValueError("set exactly one of h (pair) or h_big (direct)")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        v = np.asarray(self.initial_state, dtype=complex)
        if v.shape != (self.dim,):
            raise ValueError("initial state dimension mismatch")
        self.initial_state = v

    @property
    def kind(self) -> str:
        return "pair" if self.h is not None else "direct"

    def tol(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def omega_schedule(self, fd_omega_dot: bool = False) -> OmegaSchedule:
        return OmegaSchedule(
            self.theta, fd_step=self.grid.spacing,
            analytic=self.omega_analytic,
            use_analytic_derivative=not fd_omega_dot,
            eps_herm=self.tol("eps_herm"), eps_pos=self.tol("eps_pos"),
            cond_max=self.tol("cond_max"))

    def h_of_t(self, os: OmegaSchedule):
        if self.h is not None:
            return self.h
        return lambda t: os.omega(t) @ self.h_big(t) @ os.omega_inv(t)

    def h_big_of_t(self, os: OmegaSchedule):
        if self.h_big is not None:
            return self.h_big
        return lambda t: os.omega_inv(t) @ self.h(t) @ os.omega(t)

    def with_steps(self, steps: int) -> "Scenario":
        return replace(self, grid=TimeGrid(self.grid.t_start, self.grid.t_end, steps))


def validate_scenario(s: Scenario) -> None:
    """Node-by-node admission gates; raises ValidationError with the failing t."""
    os = s.omega_schedule()
    eps_herm = s.tol("eps_herm")
    for t in s.grid.times():
        theta_t = s.theta(t)
        try:
            os.omega(t)  # positive-definiteness gate
        except Exception as e:
            raise ValidationError(f"metric rejected at t={t:g}: {e}") from e
        if s.kind == "pair":
            h_t = s.h(t)
            defect = linalg.herm_defect(h_t)
            if defect > eps_herm * linalg.fro_norm(h_t):
                raise ValidationError(
                    f"pair-mode generator not Hermitian at t={t:g} (defect {defect:.3e})")
        else:
            res = spaces.quasi_hermiticity_defect(s.h_big(t), theta_t)
            if res > s.tol("eps_res"):
                raise ValidationError(
                    f"direct-mode generator violates quasi-Hermiticity at t={t:g} "
                    f"(residual {res:.6g} > {s.tol('eps_res'):g})")


@dataclass
class EvolutionResult:
    """Per-node series for one integrated scenario."""
    scenario: Scenario
    grid: TimeGrid
    u_series: np.ndarray
    ur_series: np.ndarray          # from the definition
    ur_naive_series: np.ndarray
    ur_corr_series: np.ndarray
    theta_series: np.ndarray
    theta_recon: np.ndarray
    states: np.ndarray             # reference-space kets U_R(t) phi0
    norms_phys: np.ndarray
    unitarity_defect: np.ndarray
    omega_sched: OmegaSchedule
    fd_omega_dot: bool


def evolve(s: Scenario, fd_omega_dot: bool = False) -> EvolutionResult:
    validate_scenario(s)
    os = s.omega_schedule(fd_omega_dot)
    h_fn = s.h_of_t(os)
    h_big_fn = s.h_big_of_t(os)
    grid = s.grid
    ts = grid.times()

    u = integrate_u(h_fn, grid, s.hbar, dim=s.dim, eps_herm=s.tol("eps_herm"))
    ur = ur_from_definition(u, os, grid)
    ur_naive = ur_from_naive_generator(h_big_fn, grid, s.hbar, dim=s.dim)
    ur_corr = ur_from_corrected_generator(h_big_fn, os, grid, s.hbar, dim=s.dim)

    theta_series = np.stack([np.asarray(s.theta(t), dtype=complex) for t in ts])
    theta_recon = metric_from_ur(ur, theta_series[0], s.tol("cond_max"))

    states = np.einsum("kij,j->ki", ur, s.initial_state)
    norms = np.einsum("ki,kij,kj->k", states.conj(), theta_series, states).real

    eye = np.eye(s.dim)
    defect = np.array([linalg.fro_norm(u[k].conj().T @ u[k] - eye)
                       for k in range(u.shape[0])])

    return EvolutionResult(s, grid, u, ur, ur_naive, ur_corr,
                           theta_series, theta_recon, states, norms, defect,
                           os, fd_omega_dot)
