"""Модели данных квантовой части: запрос пропагатора, значение ядра, строки свипов."""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Tuple

from ..errors import UnsupportedModelError
from .hamiltonian import canonical_model_name

QUANTUM_MODELS = ("free", "harmonic")


@dataclass(frozen=True)
class PropagatorRequest:
    """Запрос ядра ⟨q_f; T | q_i; 0⟩ для гауссовой системы."""

    model: str
    q_i: float
    q_f: float
    T: float
    hbar: float = 1.0
    slices: int = 1

    def __post_init__(self):
        name = canonical_model_name(self.model)
        if name not in QUANTUM_MODELS:
            raise UnsupportedModelError(
                f"Квантовые ядра доступны только для моделей {', '.join(QUANTUM_MODELS)}; получено {self.model!r}"
            )
        object.__setattr__(self, "model", name)
        for label, value in (("q_i", self.q_i), ("q_f", self.q_f), ("T", self.T), ("hbar", self.hbar)):
            if not math.isfinite(value):
                raise ValueError(f"{label} должно быть конечным числом")
        if self.T <= 0:
            raise ValueError("Время T должно быть положительным")
        if self.hbar <= 0:
            raise ValueError("ħ должна быть положительной")
        if self.slices < 1:
            raise ValueError("Число срезов должно быть не меньше 1")

    @property
    def kappa(self) -> float:
        """Жёсткость потенциала κq²/2: 0 для свободной частицы, 1 для осциллятора."""
        return 0.0 if self.model == "free" else 1.0

    def with_slices(self, slices: int) -> "PropagatorRequest":
        return PropagatorRequest(self.model, self.q_i, self.q_f, self.T, self.hbar, slices)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class KernelValue:
    """
    Значение ядра K = exp(log_modulus + i·phase).

    ``phase`` не сворачивается в (−π, π] и включает фазу Маслова.
    """

    log_modulus: float
    phase: float

    @property
    def amplitude(self) -> complex:
        return cmath.exp(complex(self.log_modulus, self.phase))

    @property
    def modulus(self) -> float:
        return math.exp(self.log_modulus)

    def relative_error(self, reference: "KernelValue") -> float:
        return abs(self.amplitude - reference.amplitude) / abs(reference.amplitude)

    def to_dict(self) -> dict:
        amplitude = self.amplitude
        return {
            "re": amplitude.real,
            "im": amplitude.imag,
            "modulus": self.modulus,
            "phase": self.phase,
        }


@dataclass(frozen=True)
class SlicingRow:
    """Строка свипа по числу срезов."""

    N: int
    value: KernelValue
    exact: KernelValue

    @property
    def relative_error(self) -> float:
        return self.value.relative_error(self.exact)

    def as_row(self) -> List[float]:
        return [self.N, self.relative_error, self.value.modulus, self.value.phase]


@dataclass(frozen=True)
class ConcentrationRow:
    """Строка свипа по ħ: ширина |ψ|² и положение пика относительно классической точки."""

    hbar: float
    spread: float
    mean: float
    classical_q: float
    norm: float

    @property
    def offset(self) -> float:
        return abs(self.mean - self.classical_q)

    def as_row(self) -> List[float]:
        return [self.hbar, self.spread, self.mean, self.classical_q, self.offset]


@dataclass
class ProbabilityAmplitudeReport:
    """
    Отчёт проверки связи вероятности и амплитуды в духовом секторе.

    Attributes:
        model: имя модели
        T: время
        N: число интервалов решётки
        epsilon: ширина регуляризации бозонных дельта-функций
        ghost_integral: g, интеграл Березина |ядра|² по духам
        delta_normalization: κ, нормировка духовой дельта-функции
        delta_residual: остаток представления ядра как κ·δ(c_N − Jc_0)
        mixed_residual: остаток смешанного представления
        constant: K (среднее по пробным точкам)
        expected_constant: аналитическое значение 4πε² при |g| = 1
        constant_deviation: относительное отклонение K от аналитического значения
        transport_deviation: наибольшее относительное отклонение перенесённой по Лиувиллю
            вероятности от K·|g|·|δ_ε|² в пробных точках
        peak: точка максимума бозонного множителя
        classical_endpoint: конечная точка классической траектории
        peak_offset: расстояние от пика до классической точки
        transporter: матрица J
    """

    model: str
    T: float
    N: int
    epsilon: float
    ghost_integral: complex
    delta_normalization: complex
    delta_residual: float
    mixed_residual: float
    constant: float
    expected_constant: float
    constant_deviation: float
    transport_deviation: float
    peak: Tuple[float, float]
    classical_endpoint: Tuple[float, float]
    peak_offset: float
    transporter: List[List[float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "T": self.T,
            "N": self.N,
            "epsilon": self.epsilon,
            "ghost_integral": [self.ghost_integral.real, self.ghost_integral.imag],
            "delta_normalization": [self.delta_normalization.real, self.delta_normalization.imag],
            "delta_residual": self.delta_residual,
            "mixed_residual": self.mixed_residual,
            "K": self.constant,
            "K_expected": self.expected_constant,
            "K_deviation": self.constant_deviation,
            "transport_deviation": self.transport_deviation,
            "peak": list(self.peak),
            "classical_endpoint": list(self.classical_endpoint),
            "peak_offset": self.peak_offset,
            "transporter": self.transporter,
        }


__all__ = [
    "QUANTUM_MODELS",
    "PropagatorRequest",
    "KernelValue",
    "SlicingRow",
    "ConcentrationRow",
    "ProbabilityAmplitudeReport",
]
