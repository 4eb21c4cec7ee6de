from fractions import Fraction

import numpy as np
import pytest

from cpi_superspace.algebra import (
    CoefficientMode,
    GrassmannElement,
    berezin_integrate,
    berezin_measure,
    berezin_sign_table,
    create_algebra,
    delta_pair,
    mul,
)
from cpi_superspace.algebra.grassmann import merge_sign
from cpi_superspace.errors import (
    CoefficientModeError,
    GeneratorTableError,
    MissingDerivativeError,
    SerializationError,
    TableMismatchError,
    UnknownGeneratorError,
)
from cpi_superspace.services.verification_service import random_element


def test_sign_table():
    signs = berezin_sign_table()
    assert signs["∫dθ θ"] == 1
    assert signs["∫dθ dθ̄ θθ̄"] == -1
    assert signs["∫dθ̄ dθ θθ̄"] == 1
    assert signs["∫ i dθ dθ̄ (iθθ̄)"] == 1
    assert signs["∫dθ dθ̄ δ(θ)δ(θ̄)"] == 1


def test_sign_table_float_mode_agrees():
    exact = berezin_sign_table(CoefficientMode.EXACT)
    floating = berezin_sign_table(CoefficientMode.FLOAT)
    assert exact == pytest.approx(floating)


def test_anticommutation(theta_table):
    theta, thetabar = theta_table.generators(["θ", "θ̄"])
    assert theta * thetabar == -(thetabar * theta)
    assert mul(theta, thetabar) == theta * thetabar
    assert (theta * theta).is_zero()
    assert (thetabar * thetabar).is_zero()


def test_grading(aux_table):
    g0, g1, g2, _ = aux_table.generators(["g0", "g1", "g2", "g3"])
    element = aux_table.scalar(2) + g0 * 3 + g1 * g2
    assert element.field.to_complex(element.body()) == 2
    assert element.soul() == g0 * 3 + g1 * g2
    assert element.grade(2) == g1 * g2
    assert element.degree() == 2
    assert not element.is_homogeneous()
    assert element.grade(1).is_homogeneous()
    assert element.grade(1).homogeneous_degree() == 1
    assert aux_table.zero().is_homogeneous()


@pytest.mark.parametrize("left, right, sign", [(0b01, 0b10, 1), (0b10, 0b01, -1), (0b011, 0b100, 1), (0b100, 0b011, 1)])
def test_merge_sign(left, right, sign):
    assert merge_sign(left, right) == sign


def test_graded_commutativity(aux_table):
    g0, g1, g2, g3 = aux_table.generators(["g0", "g1", "g2", "g3"])
    even = g0 * g1
    assert even * g2 == g2 * even
    assert (g2 * g3) * even == even * (g2 * g3)
    assert g0 * g3 == -(g3 * g0)


def test_random_elements_associative_and_distributive(aux_table, rng):
    for _ in range(5):
        a, b, c = (random_element(aux_table, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_left_derivative_moves_generator_to_front(theta_table):
    theta, thetabar = theta_table.generators(["θ", "θ̄"])
    assert (theta * thetabar).left_derivative("θ̄") == -theta
    assert (theta * thetabar).left_derivative("θ") == thetabar
    assert theta.left_derivative("θ̄").is_zero()


def test_leibniz_rule(aux_table, rng):
    a = random_element(aux_table, rng)
    b = random_element(aux_table, rng)
    even = a.filter_terms(lambda m: bin(m).count("1") % 2 == 0)
    odd = a - even
    d = lambda x: x.left_derivative("g1")
    assert d(even * b) == d(even) * b + even * d(b)
    assert d(odd * b) == d(odd) * b - odd * d(b)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_top_integral(k):
    names = [f"g{i}" for i in range(k)]
    table = create_algebra(names)
    value = berezin_integrate(table.product(names), names)
    assert value == (-1) ** (k * (k - 1) // 2)


def test_berezin_measure_and_delta(theta_table):
    theta, thetabar = theta_table.generators(["θ", "θ̄"])
    assert berezin_measure(theta * thetabar) == theta_table.scalar(-1j)
    assert berezin_integrate(delta_pair(theta_table), ["θ", "θ̄"]) == 1


def test_integral_of_constant_vanishes(theta_table):
    assert berezin_integrate(theta_table.scalar(7), ["θ"]).is_zero()


def test_exp_is_finite_series(aux_table):
    g0, g1, g2, g3 = aux_table.generators(["g0", "g1", "g2", "g3"])
    x = g0 * g1 + g2 * g3
    expected = 1 + x + g0 * g1 * g2 * g3
    assert x.exp() == expected


def test_exp_homomorphism_on_even_elements(aux_table):
    g0, g1, g2, g3 = aux_table.generators(["g0", "g1", "g2", "g3"])
    a = g0 * g1 * Fraction(1, 2)
    b = g2 * g3 * 3 + g0 * g2
    assert (a + b).exp() == a.exp() * b.exp()


def test_exact_exp_requires_zero_body(aux_table):
    with pytest.raises(ValueError):
        (aux_table.one() + aux_table.generator("g0")).exp()


def test_float_exp_with_body():
    table = create_algebra(["a"], mode=CoefficientMode.FLOAT)
    a = table.generator("a")
    result = (table.scalar(2.0) + a).exp()
    assert result.complex_coefficient(0) == pytest.approx(np.exp(2.0))
    assert result.complex_coefficient(["a"]) == pytest.approx(np.exp(2.0))


def test_compose_needs_enough_derivatives(aux_table):
    g0, g1, g2, g3 = aux_table.generators(["g0", "g1", "g2", "g3"])
    x = aux_table.scalar(1) + g0 * g1 + g2 * g3
    with pytest.raises(MissingDerivativeError):
        x.compose([1, 1])
    # f = exp: все производные равны e
    composed = x.compose([Fraction(2), Fraction(2), Fraction(2)])
    assert composed == (g0 * g1 + g2 * g3).exp() * 2
    with pytest.raises(MissingDerivativeError):
        x.compose([])


def test_float_mode_prunes_small_coefficients():
    table = create_algebra(["a", "b"], mode="float")
    assert GrassmannElement(table, {0b01: 1e-15}).is_zero()
    assert not GrassmannElement(table, {0b01: 1e-13}).is_zero()


def test_duplicate_names_rejected():
    with pytest.raises(GeneratorTableError):
        create_algebra(["a", "b", "a"])


def test_capacity_exceeded():
    with pytest.raises(GeneratorTableError):
        create_algebra(["a", "b", "c"], capacity=2)


def test_unknown_generator(theta_table):
    with pytest.raises(UnknownGeneratorError):
        theta_table.generator("η")
    with pytest.raises(UnknownGeneratorError):
        theta_table.generator(5)


def test_table_mismatch():
    first = create_algebra(["a", "b"])
    second = create_algebra(["b", "a"])
    with pytest.raises(TableMismatchError):
        first.generator("a") * second.generator("a")


def test_mode_mismatch():
    exact = create_algebra(["a", "b"])
    floating = create_algebra(["a", "b"], mode=CoefficientMode.FLOAT)
    with pytest.raises(CoefficientModeError):
        exact.generator("a") + floating.generator("a")


def test_equal_tables_interoperate():
    first = create_algebra(["a", "b"])
    second = create_algebra(["a", "b"])
    assert first.generator("a") * second.generator("b") == first.product(["a", "b"])


def test_relabel_tracks_reordering():
    source = create_algebra(["g0", "g1"])
    target = create_algebra(["g1", "g0"])
    moved = source.product(["g0", "g1"]).relabel(target)
    assert moved == target.product(["g0", "g1"])
    assert moved.coefficient_of(0b11) == target.field.convert(-1)


def test_serialization_uses_exact_strings(aux_table):
    element = aux_table.product(["g0", "g1"]) * Fraction(1, 2) + 3j
    data = element.to_dict()
    assert data["mode"] == "exact"
    assert {"mono": [0, 1], "re": "1/2", "im": "0"} in data["terms"]
    assert {"mono": [], "re": "0", "im": "3"} in data["terms"]
    assert GrassmannElement.from_dict(data) == element


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"terms": []},
        {"generators": ["a", "b"], "terms": [{"mono": [1, 0], "re": "1", "im": "0"}]},
        {"generators": ["a", "b"], "terms": [{"mono": [2], "re": "1", "im": "0"}]},
        {"generators": ["a", "b"], "terms": [{"mono": [0], "re": "x", "im": "0"}]},
        {"generators": ["a", "a"], "terms": []},
        {"generators": ["a"], "terms": [{"re": "1"}]},
    ],
)
def test_bad_documents_rejected(data):
    with pytest.raises(SerializationError):
        GrassmannElement.from_dict(data)
