"""
Модели гамильтонианов H(φ) с производными до третьего порядка.

Фазовая точка упорядочена как φ = (q₁..qₙ, p₁..pₙ). Обобщённые методы
``*_terms`` работают с любыми числами (float, Fraction, массивы numpy,
грассмановы элементы) и возвращают вложенные списки; числовые обёртки
``gradient``/``hessian``/``third`` возвращают массивы numpy.

Конечно-разностные производные моделей без аналитических формул берут
центральные разности с отдельным шагом на каждый порядок: 1e-5 для
градиента, 1e-4 для гессиана и 1e-3 для третьих производных (умноженные
на max(1, |φ|)). Единый шаг 1e-5 для высших порядков теряет точность на
округлении: ошибка третьей производной растёт как δ/h³.
"""

from __future__ import annotations

import cmath
import math
import numbers
from typing import Any, Callable, Dict, List, Sequence, Type

import numpy as np

from ..algebra.grassmann import GrassmannElement
from ..errors import MissingDerivativeError, UnsupportedModelError

# Шаги центральных разностей: h_k = base_k · max(1, |φ|)
GRADIENT_STEP = 1e-5
HESSIAN_STEP = 1e-4
THIRD_STEP = 1e-3


def _derivative_cycle(first: complex, second: complex, count: int) -> List[complex]:
    # f, f', f'', f''' для sin/cos повторяются с периодом 4
    values = [first, second, -first, -second]
    return [values[k % 4] for k in range(count)]


def generic_sin(x: Any) -> Any:
    if isinstance(x, GrassmannElement):
        body = x.field.to_complex(x.body())
        count = len(x.table) + 2
        return x.compose(_derivative_cycle(_real_if_possible(cmath.sin(body)), _real_if_possible(cmath.cos(body)), count))
    if isinstance(x, numbers.Real):
        return math.sin(x)
    return np.sin(x)


def generic_cos(x: Any) -> Any:
    if isinstance(x, GrassmannElement):
        body = x.field.to_complex(x.body())
        count = len(x.table) + 2
        return x.compose(_derivative_cycle(_real_if_possible(cmath.cos(body)), _real_if_possible(-cmath.sin(body)), count))
    if isinstance(x, numbers.Real):
        return math.cos(x)
    return np.cos(x)


def _real_if_possible(value: complex) -> Any:
    return value.real if value.imag == 0 else value


def _contains_elements(phi: Sequence[Any]) -> bool:
    return any(isinstance(component, GrassmannElement) for component in phi)


class HamiltonianModel:
    """
    Базовая модель гамильтониана.

    Подкласс обязан реализовать ``energy``. Если аналитические производные
    не заданы, используются центральные конечные разности (только для чисел).
    """

    name: str = "custom"
    n: int = 1
    separable: bool = False
    quadratic: bool = False
    polynomial: bool = False

    def energy(self, phi: Sequence[Any]) -> Any:
        raise NotImplementedError

    # --- обобщённые производные -------------------------------------------

    def gradient_terms(self, phi: Sequence[Any]) -> List[Any]:
        return list(self._fd_gradient(phi))

    def hessian_terms(self, phi: Sequence[Any]) -> List[List[Any]]:
        return self._fd_hessian(phi).tolist()

    def third_terms(self, phi: Sequence[Any]) -> List[List[List[Any]]]:
        return self._fd_third(phi).tolist()

    # --- числовые обёртки --------------------------------------------------

    def energy_value(self, phi: Any) -> Any:
        value = self.energy(np.asarray(phi, dtype=float))
        return np.asarray(value, dtype=float) if np.ndim(value) else float(value)

    def gradient(self, phi: Any) -> np.ndarray:
        return np.asarray(self.gradient_terms(np.asarray(phi, dtype=float)), dtype=float)

    def hessian(self, phi: Any) -> np.ndarray:
        return np.asarray(self.hessian_terms(np.asarray(phi, dtype=float)), dtype=float)

    def third(self, phi: Any) -> np.ndarray:
        return np.asarray(self.third_terms(np.asarray(phi, dtype=float)), dtype=float)

    def vector_field(self, phi: Any) -> np.ndarray:
        """Правая часть уравнений Гамильтона φ̇ = ω∇H (векторизовано по хвостовым осям)."""
        grad = self.gradient(phi)
        return np.concatenate([grad[self.n:], -grad[: self.n]], axis=0)

    # --- конечные разности -------------------------------------------------

    def _numeric_point(self, phi: Sequence[Any]) -> np.ndarray:
        if _contains_elements(phi):
            raise MissingDerivativeError(
                f"Модель {self.name!r} не имеет аналитических производных для грассмановых аргументов"
            )
        point = np.asarray(phi, dtype=float)
        if point.shape[0] != 2 * self.n:
            raise ValueError(f"Ожидалась фазовая точка размерности {2 * self.n}, получено {point.shape[0]}")
        return point

    def _steps(self, point: np.ndarray, base: float) -> np.ndarray:
        return base * np.maximum(1.0, np.linalg.norm(point, axis=0))

    def _fd_gradient(self, phi: Sequence[Any]) -> np.ndarray:
        point = self._numeric_point(phi)
        h = self._steps(point, GRADIENT_STEP)
        result = []
        for a in range(2 * self.n):
            shift = np.zeros_like(point)
            shift[a] = h
            result.append((np.asarray(self.energy(point + shift)) - np.asarray(self.energy(point - shift))) / (2 * h))
        return np.asarray(result, dtype=float)

    def _fd_hessian(self, phi: Sequence[Any]) -> np.ndarray:
        point = self._numeric_point(phi)
        if point.ndim != 1:
            raise ValueError("Гессиан конечными разностями вычисляется только в одной точке")
        h = float(self._steps(point, HESSIAN_STEP))
        dim = 2 * self.n
        eye = np.eye(dim)
        result = np.zeros((dim, dim))
        for a in range(dim):
            for b in range(a, dim):
                total = 0.0
                for sa in (1, -1):
                    for sb in (1, -1):
                        total += sa * sb * float(self.energy(point + h * (sa * eye[a] + sb * eye[b])))
                result[a, b] = result[b, a] = total / (4 * h * h)
        return result

    def _fd_third(self, phi: Sequence[Any]) -> np.ndarray:
        point = self._numeric_point(phi)
        if point.ndim != 1:
            raise ValueError("Третьи производные конечными разностями вычисляются только в одной точке")
        h = float(self._steps(point, THIRD_STEP))
        dim = 2 * self.n
        eye = np.eye(dim)
        result = np.zeros((dim, dim, dim))
        for a in range(dim):
            for b in range(a, dim):
                for c in range(b, dim):
                    total = 0.0
                    for sa in (1, -1):
                        for sb in (1, -1):
                            for sc in (1, -1):
                                shift = h * (sa * eye[a] + sb * eye[b] + sc * eye[c])
                                total += sa * sb * sc * float(self.energy(point + shift))
                    value = total / (8 * h ** 3)
                    for i, j, k in {(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)}:
                        result[i, j, k] = value
        return result

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, n={self.n})"


class FiniteDifferenceModel(HamiltonianModel):
    """Модель с пользовательской энергией; все производные берутся конечными разностями."""

    def __init__(self, energy: Callable[[Any], Any], n: int = 1, name: str = "custom", separable: bool = False):
        if n < 1:
            raise ValueError("Число степеней свободы должно быть положительным")
        self._energy = energy
        self.n = n
        self.name = name
        self.separable = separable

    def energy(self, phi: Sequence[Any]) -> Any:
        return self._energy(phi)


class FreeParticle(HamiltonianModel):
    """H = p²/2."""

    name = "free"
    separable = True
    quadratic = True
    polynomial = True

    def energy(self, phi):
        p = phi[1]
        return p * p / 2

    def gradient_terms(self, phi):
        p = phi[1]
        return [0 * p, p]

    def hessian_terms(self, phi):
        return [[0, 0], [0, 1]]

    def third_terms(self, phi):
        return [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]


class HarmonicOscillator(HamiltonianModel):
    """H = (q² + p²)/2, единичная частота."""

    name = "harmonic"
    separable = True
    quadratic = True
    polynomial = True

    def energy(self, phi):
        q, p = phi[0], phi[1]
        return (q * q + p * p) / 2

    def gradient_terms(self, phi):
        return [phi[0], phi[1]]

    def hessian_terms(self, phi):
        return [[1, 0], [0, 1]]

    def third_terms(self, phi):
        return [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]


class QuarticOscillator(HamiltonianModel):
    """H = p²/2 + q⁴/4."""

    name = "quartic"
    separable = True
    polynomial = True

    def energy(self, phi):
        q, p = phi[0], phi[1]
        return p * p / 2 + q * q * q * q / 4

    def gradient_terms(self, phi):
        q, p = phi[0], phi[1]
        return [q * q * q, p]

    def hessian_terms(self, phi):
        q = phi[0]
        return [[3 * q * q, 0], [0, 1]]

    def third_terms(self, phi):
        q = phi[0]
        return [[[6 * q, 0], [0, 0]], [[0, 0], [0, 0]]]


class Pendulum(HamiltonianModel):
    """H = p²/2 − cos q."""

    name = "pendulum"
    separable = True

    def energy(self, phi):
        q, p = phi[0], phi[1]
        return p * p / 2 - generic_cos(q)

    def gradient_terms(self, phi):
        return [generic_sin(phi[0]), phi[1]]

    def hessian_terms(self, phi):
        return [[generic_cos(phi[0]), 0], [0, 1]]

    def third_terms(self, phi):
        return [[[-generic_sin(phi[0]), 0], [0, 0]], [[0, 0], [0, 0]]]


class CubicCoupling(HamiltonianModel):
    """H = q²p, несепарабельный полиномиальный гамильтониан."""

    name = "cubic"
    polynomial = True

    def energy(self, phi):
        q, p = phi[0], phi[1]
        return q * q * p

    def gradient_terms(self, phi):
        q, p = phi[0], phi[1]
        return [2 * q * p, q * q]

    def hessian_terms(self, phi):
        q, p = phi[0], phi[1]
        return [[2 * p, 2 * q], [2 * q, 0]]

    def third_terms(self, phi):
        return [[[0, 2], [2, 0]], [[2, 0], [0, 0]]]


MODEL_REGISTRY: Dict[str, Type[HamiltonianModel]] = {
    "free": FreeParticle,
    "harmonic": HarmonicOscillator,
    "quartic": QuarticOscillator,
    "pendulum": Pendulum,
    "cubic": CubicCoupling,
}

MODEL_ALIASES = {"ho": "harmonic", "oscillator": "harmonic", "free_particle": "free"}


def canonical_model_name(name: str) -> str:
    key = str(name).strip().lower()
    key = MODEL_ALIASES.get(key, key)
    if key not in MODEL_REGISTRY:
        available = ", ".join(sorted(MODEL_REGISTRY))
        raise UnsupportedModelError(f"Неизвестная модель {name!r}. Доступны: {available}")
    return key


def get_model(name: str) -> HamiltonianModel:
    """
    Получить встроенную модель по имени.

    Args:
        name: имя модели или псевдоним (``ho`` → ``harmonic``)

    Returns:
        Экземпляр модели.
    """
    return MODEL_REGISTRY[canonical_model_name(name)]()


__all__ = [
    "HamiltonianModel",
    "FiniteDifferenceModel",
    "FreeParticle",
    "HarmonicOscillator",
    "QuarticOscillator",
    "Pendulum",
    "CubicCoupling",
    "MODEL_REGISTRY",
    "canonical_model_name",
    "get_model",
    "generic_sin",
    "generic_cos",
]
