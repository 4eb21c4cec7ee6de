import numpy as np
import pytest
from numpy.testing import assert_allclose

from cpi_superspace.errors import MissingDerivativeError, UnsupportedModelError
from cpi_superspace.models.hamiltonian import (
    GRADIENT_STEP,
    HESSIAN_STEP,
    THIRD_STEP,
    FiniteDifferenceModel,
    canonical_model_name,
    get_model,
)

POINTS = [np.array([0.3, -0.7]), np.array([1.2, 0.4]), np.array([-0.5, 2.0])]


@pytest.mark.parametrize("alias, name", [("ho", "harmonic"), ("Oscillator", "harmonic"), ("free_particle", "free"), (" cubic ", "cubic")])
def test_aliases(alias, name):
    assert canonical_model_name(alias) == name
    assert get_model(alias).name == name


def test_unknown_model():
    with pytest.raises(UnsupportedModelError):
        get_model("duffing")


@pytest.mark.parametrize("name", ["free", "harmonic", "quartic", "pendulum", "cubic"])
@pytest.mark.parametrize("phi", POINTS)
def test_analytic_derivatives_match_finite_differences(name, phi):
    model = get_model(name)
    reference = FiniteDifferenceModel(model.energy, n=1, name=f"fd-{name}")
    assert_allclose(model.gradient(phi), reference.gradient(phi), atol=1e-7)
    assert_allclose(model.hessian(phi), reference.hessian(phi), atol=1e-5)
    assert_allclose(model.third(phi), reference.third(phi), atol=1e-3)


def test_finite_difference_step_grows_with_order():
    assert (GRADIENT_STEP, HESSIAN_STEP, THIRD_STEP) == (1e-5, 1e-4, 1e-3)
    model = FiniteDifferenceModel(lambda phi: phi[0] ** 4 / 4 + phi[1] ** 2 / 2, name="fd-quartic")
    phi = np.array([3.0, 0.5])
    assert model.gradient(phi) == pytest.approx([27.0, 0.5], abs=1e-6)
    assert model.hessian(phi)[0, 0] == pytest.approx(27.0, abs=1e-5)
    assert model.third(phi)[0, 0, 0] == pytest.approx(18.0, abs=1e-4)
    assert abs(model.third(phi)[1, 1, 1]) < 1e-4


def test_vector_field_is_symplectic_gradient():
    model = get_model("harmonic")
    assert_allclose(model.vector_field([0.5, 2.0]), [2.0, -0.5])


def test_vector_field_vectorized_over_samples():
    model = get_model("pendulum")
    phi = np.array([[0.1, 0.2, 0.3], [1.0, -1.0, 0.0]])
    field = model.vector_field(phi)
    assert field.shape == (2, 3)
    assert_allclose(field[0], phi[1])
    assert_allclose(field[1], -np.sin(phi[0]))


def test_cubic_is_not_separable():
    assert not get_model("cubic").separable
    assert get_model("pendulum").separable
    assert get_model("harmonic").quadratic


def test_finite_difference_model_rejects_grassmann_arguments(aux_table):
    model = FiniteDifferenceModel(lambda phi: phi[0] ** 4 + phi[1] ** 2)
    g0, g1 = aux_table.generators(["g0", "g1"])
    with pytest.raises(MissingDerivativeError):
        model.gradient_terms([g0 * g1, g0 * g1])


def test_finite_difference_model_checks_dimension():
    model = FiniteDifferenceModel(lambda phi: phi[0] ** 2, n=1)
    with pytest.raises(ValueError):
        model.gradient([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        FiniteDifferenceModel(lambda phi: 0.0, n=0)
