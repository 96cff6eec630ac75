import numpy as np
import pytest

from quasiherm import dynamics, linalg, make_builtin
from quasiherm.dynamics import (evolve, integrate_u, metric_from_ur,
                                ur_from_corrected_generator,
                                ur_from_definition, ur_from_naive_generator,
                                validate_scenario)
from quasiherm.errors import NotHermitian, ValidationError
from quasiherm.models import SIGMA_X, u_oracle_sigma_x
from quasiherm.schedules import OperatorSchedule, TimeGrid

SPAN_HALF_PI = (0.0, np.pi / 2)


def test_integrate_u_zero_generator():
    grid = TimeGrid(0.0, 1.0, 100)
    u = integrate_u(lambda t: np.zeros((2, 2)), grid, dim=2)
    assert np.allclose(u, np.eye(2))


def test_integrate_u_sigma_x_closed_form():
    grid = TimeGrid(*SPAN_HALF_PI, 1000)
    u = integrate_u(lambda t: SIGMA_X, grid, dim=2)
    expect = np.array([[0, -1j], [-1j, 0]])
    assert linalg.fro_norm(u[-1] - expect) <= 1e-9
    for k, t in enumerate(grid.times()[::100]):
        assert np.allclose(u[100 * k], u_oracle_sigma_x(t, 1.0), atol=1e-9)


def test_integrate_u_unitarity_defect():
    grid = TimeGrid(*SPAN_HALF_PI, 1000)
    u = integrate_u(lambda t: SIGMA_X, grid, dim=2)
    assert linalg.fro_norm(u[-1].conj().T @ u[-1] - np.eye(2)) <= 1e-10


def test_integrate_u_rejects_nonhermitian():
    grid = TimeGrid(0.0, 1.0, 10)
    with pytest.raises(NotHermitian):
        integrate_u(lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]), grid, dim=2)


def test_ur_definition_identity_metric():
    s = make_builtin("growing-metric-2d", steps=100)
    grid = s.grid
    os_ident = dynamics.Scenario(
        name="ident", dim=2, grid=grid,
        theta=OperatorSchedule.constant_matrix(np.eye(2), (0, 1)),
        h=OperatorSchedule.constant_matrix(SIGMA_X, (0, 1)),
        initial_state=np.array([1.0, 0.0]),
    ).omega_schedule()
    u = integrate_u(lambda t: SIGMA_X, grid, dim=2)
    ur = ur_from_definition(u, os_ident, grid)
    assert np.allclose(ur, u)


def test_ur_definition_hand_values():
    s = make_builtin("growing-metric-2d", steps=100)
    res = evolve(s)
    u_end = res.u_series[-1]
    expect = np.diag([1.0, 1.0 / np.sqrt(2.0)]) @ u_end  # omega(0) = I
    assert np.allclose(res.ur_series[-1], expect, atol=1e-12)
    assert np.allclose(res.ur_series[0], np.eye(2))


def test_ur_definition_constant_diag_metric():
    grid = TimeGrid(0.0, 1.0, 200)
    theta = OperatorSchedule.constant_matrix(np.diag([1.0, 4.0]), (0, 1))
    s = dynamics.Scenario(name="c", dim=2, grid=grid, theta=theta,
                          h=OperatorSchedule.constant_matrix(SIGMA_X, (0, 1)),
                          initial_state=np.array([1.0, 0.0]))
    res = evolve(s)
    for k in (0, 100, 200):
        expect = np.diag([1.0, 0.5]) @ res.u_series[k] @ np.diag([1.0, 2.0])
        assert np.allclose(res.ur_series[k], expect, atol=1e-12)


def test_naive_matches_definition_when_metric_constant():
    s = make_builtin("constant-metric-2d", steps=1000)
    res = evolve(s)
    gap = max(linalg.fro_norm(a - b)
              for a, b in zip(res.ur_naive_series, res.ur_series))
    assert gap <= 1e-9


def test_naive_fails_when_metric_moves():
    res = evolve(make_builtin("growing-metric-2d"))
    assert linalg.fro_norm(res.ur_naive_series[-1] - res.ur_series[-1]) >= 0.05


def test_naive_zero_generator():
    grid = TimeGrid(0.0, 1.0, 50)
    u = ur_from_naive_generator(lambda t: np.zeros((2, 2)), grid, dim=2)
    assert np.allclose(u, np.eye(2))


def test_corrected_reduces_to_naive_for_constant_metric():
    res = evolve(make_builtin("constant-metric-2d", steps=500))
    assert np.allclose(res.ur_corr_series, res.ur_naive_series, atol=1e-13)


def test_corrected_matches_definition():
    res = evolve(make_builtin("growing-metric-2d"), fd_omega_dot=True)
    gap = max(linalg.fro_norm(a - b)
              for a, b in zip(res.ur_corr_series, res.ur_series))
    assert gap <= 1e-6


def test_scalar_exponential_hand_solution():
    # omega = e^t I, so the corrected propagator is e^{-t} u(t)
    s = make_builtin("scalar-exponential", steps=1000)
    res = evolve(s)
    ts = s.grid.times()
    for k in (0, 500, 1000):
        expect = np.exp(-ts[k]) * res.u_series[k]
        assert np.allclose(res.ur_series[k], expect, atol=1e-12)
        assert np.allclose(res.ur_corr_series[k], expect, atol=1e-7)


def test_metric_reconstruction_identity_case():
    grid = TimeGrid(0.0, 1.0, 200)
    u = integrate_u(lambda t: SIGMA_X, grid, dim=2)
    recon = metric_from_ur(u, np.eye(2))
    assert max(linalg.fro_norm(m - np.eye(2)) for m in recon) <= 1e-10


@pytest.mark.parametrize("name", ["growing-metric-2d", "constant-metric-2d"])
def test_metric_reconstruction_builtins(name):
    res = evolve(make_builtin(name))
    rel = max(linalg.fro_norm(res.theta_recon[k] - res.theta_series[k])
              / linalg.fro_norm(res.theta_series[k])
              for k in range(res.grid.steps + 1))
    assert rel <= 1e-7


def test_norm_conservation_growing(growing_result):
    norms = growing_result.norms_phys
    assert norms[0] == pytest.approx(1.0)
    assert np.max(np.abs(norms / norms[0] - 1.0)) <= 1e-8


def test_zero_initial_state_zero_norms():
    s = make_builtin("growing-metric-2d", steps=100,
                     initial_state=np.zeros(2, dtype=complex))
    res = evolve(s)
    assert np.all(res.norms_phys == 0.0)


def test_direct_mode_accepts_quasi_hermitian():
    grid = TimeGrid(0.0, 1.0, 100)
    h_big = np.array([[0.0, np.sqrt(2)], [1.0 / np.sqrt(2), 0.0]])
    s = dynamics.Scenario(
        name="direct", dim=2, grid=grid,
        theta=OperatorSchedule.constant_matrix(np.diag([1.0, 2.0]), (0, 1)),
        h_big=OperatorSchedule.constant_matrix(h_big, (0, 1)),
        initial_state=np.array([1.0, 0.0]))
    validate_scenario(s)
    res = evolve(s)
    assert np.max(np.abs(res.norms_phys / res.norms_phys[0] - 1.0)) <= 1e-8


def test_direct_mode_rejects_violation():
    grid = TimeGrid(0.0, 1.0, 10)
    s = dynamics.Scenario(
        name="bad", dim=2, grid=grid,
        theta=OperatorSchedule.constant_matrix(np.eye(2), (0, 1)),
        h_big=OperatorSchedule.constant_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]), (0, 1)),
        initial_state=np.array([1.0, 0.0]))
    with pytest.raises(ValidationError, match="quasi-Hermiticity"):
        validate_scenario(s)


def test_evolution_deterministic():
    a = evolve(make_builtin("growing-metric-2d", steps=300))
    b = evolve(make_builtin("growing-metric-2d", steps=300))
    assert np.array_equal(a.ur_series, b.ur_series)
    assert np.array_equal(a.norms_phys, b.norms_phys)
