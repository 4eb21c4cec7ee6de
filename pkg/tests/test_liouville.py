import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cpi_superspace.errors import BoundaryLossWarning, DimensionMismatchError, UnsupportedModelError
from cpi_superspace.models.hamiltonian import FiniteDifferenceModel, get_model
from cpi_superspace.models.phase_space import Distribution
from cpi_superspace.physics.liouville import (
    LiouvilleOptions,
    default_window,
    density_at,
    ensemble_histogram,
    liouville_evolve,
    peak_offset_cells,
    sample_gaussian,
)


def _packet(center, sigma=0.1, grid=128, window=None):
    q_bounds, p_bounds = window or default_window(center, sigma)
    return Distribution.gaussian(center, sigma, q_bounds, p_bounds, (grid, grid))


def test_oscillator_rotates_packet():
    dist = _packet((0.5, 0.0))
    result = liouville_evolve(dist, get_model("harmonic"), 1.0)
    endpoint = (0.5 * math.cos(1.0), -0.5 * math.sin(1.0))
    assert peak_offset_cells(result.distribution, endpoint) <= 1.0
    assert abs(result.mass_drift) < 1e-3
    mean = result.distribution.mean()
    assert_allclose(mean, endpoint, atol=1e-3)


def test_oscillator_keeps_centred_gaussian():
    dist = _packet((0.0, 0.0), sigma=0.3)
    result = liouville_evolve(dist, get_model("harmonic"), 2.0)
    assert result.distribution.l2_distance(dist) < 5e-3
    assert abs(result.mass_drift) < 1e-3


@pytest.mark.slow
def test_oscillator_quarter_turn():
    dist = _packet((1.0, 0.0), grid=256)
    result = liouville_evolve(dist, get_model("harmonic"), math.pi / 2)
    moved = result.distribution
    target = Distribution.gaussian((0.0, -1.0), 0.1, moved.q_bounds, moved.p_bounds, moved.shape)
    assert moved.l2_distance(target) < 5e-3
    assert peak_offset_cells(moved, (0.0, -1.0)) <= 1.0
    assert_allclose(moved.mean(), (0.0, -1.0), atol=1e-3)


def test_density_at_points_follows_characteristics():
    sigma = 0.05
    dist = _packet((1.0, 0.0), sigma=sigma, grid=256)
    model = get_model("harmonic")
    points = np.array([[0.0, 0.03, -0.02, 0.5], [-1.0, -1.0, -0.97, 0.0]])
    squared = points[0] ** 2 + (points[1] + 1.0) ** 2
    exact = np.exp(-squared / (2 * sigma ** 2)) / (2 * math.pi * sigma ** 2)
    assert_allclose(density_at(dist, model, math.pi / 2, points), exact, rtol=1e-3, atol=1e-8)
    peak = 1 / (2 * math.pi * sigma ** 2)
    assert_allclose(density_at(dist, model, 0.0, [[1.0], [0.0]]), [peak], rtol=1e-3)
    with pytest.raises(UnsupportedModelError):
        density_at(dist, FiniteDifferenceModel(lambda phi: sum(x * x for x in phi) / 2, n=2), 1.0, points)


def test_zero_time_returns_copy():
    dist = _packet((0.2, 0.1))
    result = liouville_evolve(dist, get_model("pendulum"), 0.0)
    assert_allclose(result.distribution.values, dist.values)
    assert result.distribution.values is not dist.values
    assert result.mass_drift == 0.0


def test_only_one_degree_of_freedom():
    model = FiniteDifferenceModel(lambda phi: sum(x * x for x in phi) / 2, n=2)
    with pytest.raises(UnsupportedModelError):
        liouville_evolve(_packet((0.0, 0.0)), model, 1.0)


def test_boundary_loss_warns():
    dist = _packet((0.5, 0.5), window=((-1.0, 1.0), (-1.0, 1.0)), grid=64)
    with pytest.warns(BoundaryLossWarning):
        result = liouville_evolve(dist, get_model("free"), 1.0)
    assert result.lost_mass > 0.1
    assert result.outside_fraction > 0


def test_periodic_window_wraps_without_loss():
    center = (2.0, 1.0)
    dist = Distribution.gaussian(center, 0.15, (-math.pi, math.pi), (-0.5, 2.5), (256, 128))
    with warnings.catch_warnings():
        warnings.simplefilter("error", BoundaryLossWarning)
        result = liouville_evolve(dist, get_model("free"), 2.0, LiouvilleOptions(periodic_q=True))
    wrapped = 4.0 - 2 * math.pi
    assert peak_offset_cells(result.distribution, (wrapped, 1.0)) <= 1.0
    assert abs(result.mass_drift) < 1e-3


def test_options_validation():
    with pytest.raises(ValueError):
        LiouvilleOptions(dt=0.0)
    with pytest.raises(ValueError):
        LiouvilleOptions(order=7)


def test_distribution_validation():
    with pytest.raises(ValueError):
        Distribution((1.0, -1.0), (-1.0, 1.0), np.ones((4, 4)))
    with pytest.raises(ValueError):
        Distribution((-1.0, 1.0), (-1.0, 1.0), -np.ones((4, 4)))
    with pytest.raises(DimensionMismatchError):
        Distribution((-1.0, 1.0), (-1.0, 1.0), np.ones(4))
    with pytest.raises(DimensionMismatchError):
        Distribution((-1.0, 1.0), (-1.0, 1.0), np.ones((10, 10))).binned_masses((3, 3))


def test_histogram_counts_inside_window():
    like = Distribution((-1.0, 1.0), (-1.0, 1.0), np.zeros((4, 4)))
    points = [[0.1, 0.1], [0.6, -0.6], [5.0, 0.0], [-0.9, 0.9]]
    hist = Distribution.from_samples(points, like)
    assert hist.mass() == pytest.approx(0.75)
    assert hist.values[2, 2] * hist.cell_area == pytest.approx(0.25)
    empty = Distribution.from_samples(np.empty((0, 2)), like)
    assert empty.mass() == 0.0


def test_sample_gaussian_is_seeded():
    first = sample_gaussian((0.1, 0.0), 0.05, 100, np.random.default_rng(7))
    second = sample_gaussian((0.1, 0.0), 0.05, 100, np.random.default_rng(7))
    assert first.shape == (100, 2)
    assert_allclose(first, second)
    with pytest.raises(ValueError):
        sample_gaussian((0.0, 0.0), 0.1, -1, np.random.default_rng(7))


@pytest.mark.slow
def test_grid_matches_ensemble_histogram():
    center, sigma = (1.0, 0.0), 0.05
    model = get_model("pendulum")
    q_bounds, p_bounds = default_window(center, sigma)
    dist = Distribution.gaussian(center, sigma, q_bounds, p_bounds, (256, 256))
    result = liouville_evolve(dist, model, 1.0)
    samples = sample_gaussian(center, sigma, 10000, np.random.default_rng(20240517))
    histogram = ensemble_histogram(samples, model, 1.0, result.distribution)
    assert result.distribution.binned_mass_rms(histogram) < 5e-3


@pytest.mark.slow
def test_oscillator_grid_matches_ensemble_histogram():
    center, sigma = (0.5, 0.0), 0.05
    model = get_model("harmonic")
    q_bounds, p_bounds = default_window(center, sigma)
    dist = Distribution.gaussian(center, sigma, q_bounds, p_bounds, (256, 256))
    result = liouville_evolve(dist, model, 1.5)
    samples = sample_gaussian(center, sigma, 10000, np.random.default_rng(20240517))
    histogram = ensemble_histogram(samples, model, 1.5, result.distribution)
    assert result.distribution.binned_mass_rms(histogram) < 5e-3
