import cmath
import math

import numpy as np
import pytest

from cpi_superspace.errors import CausticError, CausticProximityWarning, UnsupportedModelError
from cpi_superspace.models.quantum import PropagatorRequest
from cpi_superspace.physics.quantum import (
    GaussianWavepacket,
    convergence_order,
    exact_propagator,
    free_kernel,
    group_law_residual,
    mehler_kernel,
    semiclassical_concentration,
    sliced_propagator,
    slicing_sweep,
)


def test_free_kernel_formula():
    hbar, T, q_i, q_f = 0.7, 1.3, 0.2, -0.4
    value = exact_propagator(PropagatorRequest("free", q_i, q_f, T, hbar))
    expected = cmath.exp(1j * (q_f - q_i) ** 2 / (2 * hbar * T)) / cmath.sqrt(2j * math.pi * hbar * T)
    assert value.amplitude == pytest.approx(expected, rel=1e-12)


def test_mehler_kernel_formula():
    hbar, T, q_i, q_f = 1.0, 1.0, 0.3, 0.7
    value = exact_propagator(PropagatorRequest("ho", q_i, q_f, T, hbar))
    s, c = math.sin(T), math.cos(T)
    action = ((q_f ** 2 + q_i ** 2) * c - 2 * q_f * q_i) / (2 * s)
    expected = cmath.exp(1j * action / hbar) / cmath.sqrt(2j * math.pi * hbar * s)
    assert value.amplitude == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("N", [2, 8, 64])
def test_free_slicing_is_exact(N):
    request = PropagatorRequest("free", 0.3, 0.7, 1.0, 1.0, N)
    assert sliced_propagator(request).relative_error(exact_propagator(request)) < 1e-12


def test_oscillator_slicing_converges_quadratically():
    request = PropagatorRequest("harmonic", 0.3, 0.7, 1.0, 1.0)
    slices = [16, 32, 64, 128, 256, 512]
    rows = slicing_sweep(request, slices)
    errors = [row.relative_error for row in rows]
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] < 1e-3
    assert convergence_order(slices, errors) == pytest.approx(2.0, abs=0.3)


def test_coarse_slicing_improves_with_refinement():
    request = PropagatorRequest("harmonic", 0.3, 0.7, 1.0, 1.0)
    errors = [row.relative_error for row in slicing_sweep(request, [2, 4, 8])]
    assert errors[0] > errors[1] > errors[2] > 0


def test_short_time_oscillator_kernel_is_free():
    T = 1e-3
    oscillator, free = mehler_kernel(T, 1.0), free_kernel(T, 1.0)
    for q_f, q_i in [(0.0, 0.0), (0.02, 0.0), (0.01, -0.01), (0.03, 0.01)]:
        reference = free(q_f, q_i)
        assert abs(oscillator(q_f, q_i) - reference) / abs(reference) < 1e-6


def test_slicing_needs_two_slices():
    with pytest.raises(ValueError):
        sliced_propagator(PropagatorRequest("harmonic", 0.0, 0.1, 1.0, 1.0, 1))


def test_convergence_order_needs_two_points():
    with pytest.raises(ValueError):
        convergence_order([4], [1e-2])
    with pytest.raises(ValueError):
        convergence_order([4, 8], [1e-2, 0.0])


@pytest.mark.parametrize(
    "model, T1, T2",
    [("harmonic", 0.4, 0.7), ("harmonic", 2.0, 2.0), ("harmonic", 1.0, 2.5), ("free", 0.5, 1.5)],
)
def test_group_law(model, T1, T2):
    points = [(0.7, 0.3), (0.0, 0.0), (-1.2, 0.4)]
    assert group_law_residual(model, T1, T2, 1.0, points) < 1e-10


def test_maslov_index_counts_caustics():
    assert mehler_kernel(1.0, 1.0).maslov_index == 0
    assert mehler_kernel(4.0, 1.0).maslov_index == 1
    assert mehler_kernel(7.0, 1.0).maslov_index == 2


def test_caustic_raises():
    with pytest.raises(CausticError):
        exact_propagator(PropagatorRequest("harmonic", 0.0, 0.1, math.pi, 1.0))


def test_near_caustic_warns():
    with pytest.warns(CausticProximityWarning):
        mehler_kernel(math.pi - 1e-4, 1.0)


@pytest.mark.parametrize(
    "kwargs, error",
    [
        ({"model": "pendulum"}, UnsupportedModelError),
        ({"T": 0.0}, ValueError),
        ({"hbar": -1.0}, ValueError),
        ({"q_f": math.inf}, ValueError),
        ({"slices": 0}, ValueError),
    ],
)
def test_request_validation(kwargs, error):
    arguments = {"model": "harmonic", "q_i": 0.0, "q_f": 0.1, "T": 1.0, "hbar": 1.0, "slices": 1}
    arguments.update(kwargs)
    with pytest.raises(error):
        PropagatorRequest(**arguments)


@pytest.mark.parametrize("kernel", [free_kernel(1.3, 0.5), mehler_kernel(2.0, 0.5)])
def test_wavepacket_norm_preserved(kernel):
    packet = GaussianWavepacket.coherent(0.3, 0.2, 0.5)
    assert packet.norm() == pytest.approx(1.0, rel=1e-12)
    assert packet.apply(kernel).norm() == pytest.approx(1.0, rel=1e-10)


def test_wavepacket_must_be_normalizable():
    with pytest.raises(ValueError):
        GaussianWavepacket(gamma=0.5 + 0j, delta=0j, zeta=0j, hbar=1.0)


@pytest.mark.parametrize("model", ["harmonic", "free"])
def test_packet_concentrates_on_classical_path(model):
    rows = semiclassical_concentration(model, (0.5, 0.3), 1.0, [1.0, 0.1, 0.01])
    ratios = np.array([row.spread / math.sqrt(row.hbar) for row in rows])
    assert np.all(np.abs(ratios / ratios[0] - 1.0) < 0.2)
    smallest = rows[-1]
    assert smallest.offset / smallest.spread < 0.1
    for row in rows:
        assert row.norm == pytest.approx(1.0, rel=1e-10)


def test_oscillator_keeps_coherent_width():
    row = semiclassical_concentration("harmonic", (0.5, 0.0), 2.0, [0.02])[0]
    assert row.spread == pytest.approx(math.sqrt(0.01), rel=1e-10)
    assert row.mean == pytest.approx(0.5 * math.cos(2.0), abs=1e-8)
