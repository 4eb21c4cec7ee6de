"""
Поля коэффициентов грассмановой алгебры.

Точный режим хранит гауссовы рациональные числа sympy (``QQ_I``),
плавающий режим хранит ``complex`` с порогом обнуления.
"""

from __future__ import annotations

import math
import numbers
from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from typing import Any, Tuple, Union

from sympy.polys.domains import QQ, QQ_I

DEFAULT_ZERO_THRESHOLD = 1e-14

JsonPart = Union[str, float]


class CoefficientMode(str, Enum):
    """Режим коэффициентов таблицы генераторов."""

    EXACT = "exact"
    FLOAT = "float"


class CoefficientField(ABC):
    """Интерфейс поля коэффициентов."""

    mode: CoefficientMode
    zero: Any
    one: Any
    imag_unit: Any

    @abstractmethod
    def convert(self, value: Any) -> Any:
        """Привести число к типу поля."""

    @abstractmethod
    def is_zero(self, value: Any) -> bool:
        """Проверить, обнуляется ли коэффициент."""

    @abstractmethod
    def to_complex(self, value: Any) -> complex:
        """Представить коэффициент как complex."""

    @abstractmethod
    def conjugate(self, value: Any) -> Any:
        """Комплексное сопряжение."""

    @abstractmethod
    def to_json(self, value: Any) -> Tuple[JsonPart, JsonPart]:
        """Пара (re, im) для JSON."""

    @abstractmethod
    def from_json(self, re: Any, im: Any) -> Any:
        """Обратное преобразование из JSON."""

    def divide(self, numerator: Any, denominator: Any) -> Any:
        den = self.convert(denominator)
        if self.is_zero(den):
            raise ZeroDivisionError("Деление на нулевой коэффициент")
        return self.convert(numerator) / den

    def magnitude(self, value: Any) -> float:
        return abs(self.to_complex(value))


class ExactField(CoefficientField):
    """Гауссовы рациональные числа ``QQ_I``; float переводится без потерь через Fraction."""

    mode = CoefficientMode.EXACT

    def __init__(self) -> None:
        self.zero = QQ_I(0, 0)
        self.one = QQ_I(1, 0)
        self.imag_unit = QQ_I(0, 1)
        self._dtype = type(self.one)

    @staticmethod
    def _rational(value: Any) -> Any:
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, numbers.Integral):
            return QQ(int(value))
        if isinstance(value, numbers.Rational):
            return QQ(int(value.numerator), int(value.denominator))
        if isinstance(value, numbers.Real):
            as_float = float(value)
            if not math.isfinite(as_float):
                raise ValueError(f"Нефинитный коэффициент: {value!r}")
            fraction = Fraction(as_float)
            return QQ(fraction.numerator, fraction.denominator)
        # элементы QQ (PythonMPQ, mpq) не зарегистрированы в numbers
        if hasattr(value, "numerator") and hasattr(value, "denominator"):
            return QQ(int(value.numerator), int(value.denominator))
        raise TypeError(f"Не удалось привести {value!r} к рациональному числу")

    def convert(self, value: Any) -> Any:
        if isinstance(value, self._dtype):
            return value
        if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
            return QQ_I(self._rational(value.real), self._rational(value.imag))
        return QQ_I(self._rational(value), QQ(0))

    def is_zero(self, value: Any) -> bool:
        return value.x == 0 and value.y == 0

    @staticmethod
    def _to_float(part: Any) -> float:
        return int(part.numerator) / int(part.denominator)

    def to_complex(self, value: Any) -> complex:
        return complex(self._to_float(value.x), self._to_float(value.y))

    def to_fraction_pair(self, value: Any) -> Tuple[Fraction, Fraction]:
        return (
            Fraction(int(value.x.numerator), int(value.x.denominator)),
            Fraction(int(value.y.numerator), int(value.y.denominator)),
        )

    def conjugate(self, value: Any) -> Any:
        return QQ_I(value.x, -value.y)

    def to_json(self, value: Any) -> Tuple[JsonPart, JsonPart]:
        re, im = self.to_fraction_pair(value)
        return str(re), str(im)

    def from_json(self, re: Any, im: Any) -> Any:
        try:
            return QQ_I(self._rational(Fraction(str(re))), self._rational(Fraction(str(im))))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Некорректный рациональный коэффициент ({re}, {im}): {exc}") from exc


class FloatField(CoefficientField):
    """Комплексные числа двойной точности с порогом обнуления."""

    mode = CoefficientMode.FLOAT

    def __init__(self, zero_threshold: float = DEFAULT_ZERO_THRESHOLD) -> None:
        if zero_threshold < 0:
            raise ValueError("Порог обнуления должен быть неотрицательным")
        self.zero_threshold = float(zero_threshold)
        self.zero = 0j
        self.one = 1 + 0j
        self.imag_unit = 1j

    def convert(self, value: Any) -> complex:
        if hasattr(value, "x") and hasattr(value, "y"):
            return ExactField().to_complex(value)
        result = complex(value)
        if not (math.isfinite(result.real) and math.isfinite(result.imag)):
            raise ValueError(f"Нефинитный коэффициент: {value!r}")
        return result

    def is_zero(self, value: complex) -> bool:
        return abs(value) < self.zero_threshold or value == 0

    def to_complex(self, value: complex) -> complex:
        return complex(value)

    def conjugate(self, value: complex) -> complex:
        return value.conjugate()

    def to_json(self, value: complex) -> Tuple[JsonPart, JsonPart]:
        return float(value.real), float(value.imag)

    def from_json(self, re: Any, im: Any) -> complex:
        return complex(float(re), float(im))


def make_field(mode: Union[CoefficientMode, str], zero_threshold: float = DEFAULT_ZERO_THRESHOLD) -> CoefficientField:
    """
    Создать поле коэффициентов для режима.

    Args:
        mode: точный или плавающий режим
        zero_threshold: порог обнуления (только для плавающего режима)

    Returns:
        Экземпляр поля.
    """
    mode = CoefficientMode(mode)
    if mode is CoefficientMode.EXACT:
        return ExactField()
    return FloatField(zero_threshold)


__all__ = [
    "CoefficientMode",
    "CoefficientField",
    "ExactField",
    "FloatField",
    "make_field",
    "DEFAULT_ZERO_THRESHOLD",
]
