import numpy as np
import pytest
from numpy.testing import assert_allclose

from cpi_superspace.errors import InvariantViolationError, UnsupportedModelError
from cpi_superspace.models.hamiltonian import get_model
from cpi_superspace.models.phase_space import ExtendedState
from cpi_superspace.physics.dynamics import (
    FlowIntegrator,
    IntegratorOptions,
    classical_propagator,
    ensemble_evolve,
    extended_flow,
    finite_difference_jacobian,
    hamilton_flow,
    lyapunov_spectrum,
)


def _rotation(T):
    return np.array([[np.cos(T), np.sin(T)], [-np.sin(T), np.cos(T)]])


@pytest.mark.parametrize("integrator, atol", [("yoshida4", 1e-10), ("rk4", 1e-10), ("leapfrog", 1e-6)])
def test_oscillator_endpoint(integrator, atol):
    phi0 = np.array([0.3, -0.2])
    trajectory = hamilton_flow(get_model("harmonic"), phi0, 0.0, 1.0, IntegratorOptions(integrator=integrator))
    assert_allclose(trajectory.final_phi, _rotation(1.0) @ phi0, atol=atol)
    assert trajectory.integrator == integrator


def test_free_particle_is_exact():
    trajectory = hamilton_flow(get_model("free"), [1.0, 0.5], 0.0, 2.0)
    assert_allclose(trajectory.final_phi, [2.0, 0.5], atol=1e-12)


def test_auto_selects_by_separability():
    assert FlowIntegrator(get_model("pendulum")).method == "yoshida4"
    assert FlowIntegrator(get_model("cubic")).method == "rk4"


@pytest.mark.parametrize("integrator", ["yoshida4", "leapfrog"])
def test_symplectic_integrator_needs_separable_model(integrator):
    with pytest.raises(UnsupportedModelError):
        hamilton_flow(get_model("cubic"), [0.1, 0.2], 0.0, 1.0, IntegratorOptions(integrator=integrator))


def test_time_must_not_decrease():
    with pytest.raises(ValueError):
        hamilton_flow(get_model("harmonic"), [0.1, 0.0], 1.0, 0.0)


def test_options_validation():
    with pytest.raises(ValueError):
        IntegratorOptions(integrator="euler")
    with pytest.raises(ValueError):
        IntegratorOptions(dt=0.0)
    with pytest.raises(ValueError):
        IntegratorOptions(lambda_mode="forced")


def test_oscillator_tangent_matrices():
    state = ExtendedState.initial([0.4, 0.1], lam=[1.0, -2.0])
    trajectory = extended_flow(get_model("harmonic"), state, 1.5)
    final = trajectory.final_state()
    assert_allclose(final.jac, _rotation(1.5), atol=1e-10)
    # λ переносится как c̄-сектор: λ(t) = J̄(t)λ(0)
    assert_allclose(final.lam, final.jac_bar @ state.lam, atol=1e-10)
    assert_allclose(final.jac_bar, np.linalg.inv(final.jac).T, atol=1e-10)


@pytest.mark.parametrize("name, T", [("pendulum", 10.0), ("quartic", 10.0), ("cubic", 1.0)])
def test_invariants(name, T):
    state = ExtendedState.initial([0.5, 0.3])
    trajectory = extended_flow(get_model(name), state, T)
    assert trajectory.det_residual < 1e-8
    assert trajectory.pairing_residual < 1e-8
    assert_allclose(trajectory.det_jacobians(), 1.0, atol=1e-8)


@pytest.mark.slow
def test_pendulum_invariants_long_run():
    trajectory = extended_flow(get_model("pendulum"), ExtendedState.initial([1.0, 0.0]), 100.0)
    assert trajectory.det_residual < 1e-8
    assert trajectory.pairing_residual < 1e-8
    assert trajectory.energy_drift < 1e-6


def test_jacobian_matches_finite_differences():
    model = get_model("pendulum")
    phi0 = [0.7, 0.2]
    trajectory = extended_flow(model, ExtendedState.initial(phi0), 3.0)
    reference = finite_difference_jacobian(model, phi0, 3.0)
    assert_allclose(trajectory.final_state().jac, reference, atol=1e-6)


@pytest.mark.parametrize("name, phi0, T, atol", [("quartic", [1.0, 0.0], 5.0, 1e-5), ("harmonic", [1.0, 0.0], 2.0, 1e-6)])
def test_jacobian_matches_bumped_endpoints(name, phi0, T, atol):
    model = get_model(name)
    trajectory = extended_flow(model, ExtendedState.initial(phi0), T)
    assert_allclose(trajectory.final_state().jac, finite_difference_jacobian(model, phi0, T), atol=atol)


def test_strict_invariants_raise():
    options = IntegratorOptions(integrator="rk4", strict_invariants=True, invariant_tolerance=0.0)
    with pytest.raises(InvariantViolationError):
        extended_flow(get_model("cubic"), ExtendedState.initial([0.5, 0.3]), 1.0, options)


def test_sourced_lambda_only_for_quadratic_models():
    options = IntegratorOptions(lambda_mode="sourced")
    with pytest.raises(UnsupportedModelError):
        extended_flow(get_model("pendulum"), ExtendedState.initial([0.1, 0.0]), 1.0, options)
    extended_flow(get_model("harmonic"), ExtendedState.initial([0.1, 0.0]), 1.0, options)


def test_classical_propagator():
    model = get_model("harmonic")
    record = classical_propagator(model, [1.0, 0.0], 0.0, np.pi / 2)
    assert_allclose(record.phi_f, [0.0, -1.0], atol=1e-10)
    same = classical_propagator(model, [1.0, 0.0], 2.0, 2.0)
    assert_allclose(same.phi_f, [1.0, 0.0])

    epsilon = 0.05
    q, p = np.meshgrid(np.linspace(-0.5, 0.5, 201), np.linspace(-1.5, -0.5, 201), indexing="ij")
    density = record.density(np.stack([q, p]), epsilon)
    mass = density.sum() * (q[1, 0] - q[0, 0]) * (p[0, 1] - p[0, 0])
    assert mass == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        record.density([0.0, 0.0], 0.0)


def test_ensemble_collects_failures():
    samples = [[0.1, 0.0], [np.nan, 0.0], [0.3, 0.2]]
    result = ensemble_evolve(samples, get_model("harmonic"), np.pi)
    assert len(result) == 2
    assert result.failures[0][0] == 1
    assert_allclose(result.endpoints, [[-0.1, 0.0], [-0.3, -0.2]], atol=1e-10)
    assert_allclose(result.indices, [0, 2])


def test_ensemble_empty():
    result = ensemble_evolve([], get_model("harmonic"), 1.0)
    assert result.endpoints.shape == (0, 2)
    assert not result.failures


def test_lyapunov_oscillator_spectrum():
    result = lyapunov_spectrum(get_model("harmonic"), [1.0, 0.0], 50.0, 1.0, IntegratorOptions(dt=1e-2))
    assert abs(result.total) < 1e-10
    assert np.all(np.abs(result.exponents) < 0.1)
    assert result.history.shape == (50, 2)


def test_lyapunov_arguments():
    with pytest.raises(ValueError):
        lyapunov_spectrum(get_model("harmonic"), [1.0, 0.0], 1.0, 2.0)
    with pytest.raises(ValueError):
        lyapunov_spectrum(get_model("harmonic"), [1.0, 0.0], 0.0, 1.0)


@pytest.mark.slow
@pytest.mark.parametrize("name, bound", [("harmonic", 1e-3), ("free", 1e-2)])
def test_lyapunov_vanishes_without_chaos(name, bound):
    result = lyapunov_spectrum(get_model(name), [1.0, 0.0], 1000.0, 1.0, IntegratorOptions(dt=1e-2))
    assert np.all(np.abs(result.exponents) < bound)
    assert abs(result.total) < 1e-3
    assert result.history.shape == (1000, 2)


@pytest.mark.slow
def test_lyapunov_pendulum_pair_sums_to_zero():
    result = lyapunov_spectrum(get_model("pendulum"), [2.0, 0.0], 1000.0, 1.0, IntegratorOptions(dt=1e-2))
    assert abs(result.total) < 1e-3
    assert result.exponents[0] == pytest.approx(-result.exponents[1], abs=1e-3)
