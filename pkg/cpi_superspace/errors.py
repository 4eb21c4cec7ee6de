"""Иерархия исключений пакета."""

from __future__ import annotations


class CpiError(Exception):
    """Базовое исключение пакета."""


class GeneratorTableError(CpiError, ValueError):
    """Некорректная таблица генераторов (повтор имени, превышение ёмкости)."""


class UnknownGeneratorError(CpiError, KeyError):
    """Генератор отсутствует в таблице."""

    def __str__(self) -> str:  # KeyError по умолчанию оборачивает сообщение в кавычки
        return str(self.args[0]) if self.args else ""


class TableMismatchError(CpiError, ValueError):
    """Операция над элементами разных таблиц."""


class CoefficientModeError(TableMismatchError):
    """Смешение точного и плавающего режимов коэффициентов."""


class DimensionMismatchError(CpiError, ValueError):
    """Несогласованные размерности входных данных."""


class MissingDerivativeError(CpiError):
    """Модель не предоставляет нужную производную."""


class SerializationError(CpiError, ValueError):
    """Ошибка чтения JSON-представления."""


class IntegrationError(CpiError, ArithmeticError):
    """Нефинитное состояние или слишком малый шаг интегрирования."""


class InvariantViolationError(CpiError):
    """Нарушен инвариант расширенного состояния (det J, J̄ᵀJ)."""


class UnsupportedModelError(CpiError, ValueError):
    """Операция не поддерживается для данной модели."""


class CausticError(CpiError, ArithmeticError):
    """Время совпадает с каустикой осциллятора (sin T = 0)."""


class SlicingOverflowError(CpiError, OverflowError):
    """Вырождение гауссовой свёртки при разбиении по времени."""


class DegenerateTransporterError(CpiError, ArithmeticError):
    """Вырожденная матрица переноса духов."""


class ConfigError(CpiError, ValueError):
    """Ошибка конфигурации запуска."""


class PlotDataError(CpiError, ValueError):
    """Пустой набор результатов для графика."""


class BoundaryLossWarning(UserWarning):
    """Характеристики покинули сетку, часть массы потеряна."""


class CausticProximityWarning(UserWarning):
    """Время близко к каустике осциллятора."""


__all__ = [
    "CpiError",
    "GeneratorTableError",
    "UnknownGeneratorError",
    "TableMismatchError",
    "CoefficientModeError",
    "DimensionMismatchError",
    "MissingDerivativeError",
    "SerializationError",
    "IntegrationError",
    "InvariantViolationError",
    "UnsupportedModelError",
    "CausticError",
    "SlicingOverflowError",
    "DegenerateTransporterError",
    "ConfigError",
    "PlotDataError",
    "BoundaryLossWarning",
    "CausticProximityWarning",
]
