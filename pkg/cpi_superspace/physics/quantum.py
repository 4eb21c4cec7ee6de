"""
Гауссовы квантовые пропагаторы: точные ядра, разбиение по времени,
полуклассическая концентрация волнового пакета.

Ядро хранится в виде K(q_f, q_i) = exp(L + (i/ħ)(A q_f² + B q_f q_i + C q_i²)).
Интегралы Френеля при композиции берутся аналитическим продолжением
гауссовой формулы; знак α отслеживается явно и даёт индекс Маслова.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import CausticError, CausticProximityWarning, SlicingOverflowError
from ..models.hamiltonian import get_model
from ..models.quantum import ConcentrationRow, KernelValue, PropagatorRequest, SlicingRow
from .dynamics import classical_propagator

logger = logging.getLogger(__name__)

CAUSTIC_EPSILON = 1e-12
CAUSTIC_WARNING_DISTANCE = 1e-3
ALPHA_FLOOR = 1e-300


@dataclass(frozen=True)
class QuadraticKernel:
    """Гауссово ядро с коэффициентами A, B, C и логарифмом префактора L."""

    a: float
    b: float
    c: float
    log_prefactor: complex
    hbar: float
    maslov_index: int = 0

    def exponent(self, q_f: float, q_i: float) -> complex:
        action = self.a * q_f * q_f + self.b * q_f * q_i + self.c * q_i * q_i
        return self.log_prefactor + 1j * action / self.hbar

    def value(self, q_f: float, q_i: float) -> KernelValue:
        exponent = self.exponent(q_f, q_i)
        return KernelValue(log_modulus=exponent.real, phase=exponent.imag)

    def __call__(self, q_f: float, q_i: float) -> complex:
        return cmath.exp(self.exponent(q_f, q_i))

    def then(self, later: "QuadraticKernel") -> "QuadraticKernel":
        """
        Композиция ∫dx K_later(q_f, x) K_self(x, q_i).

        Raises:
            SlicingOverflowError: коэффициент при x² вырожден.
        """
        if not math.isclose(self.hbar, later.hbar):
            raise ValueError("Композиция ядер с разными ħ")
        hbar = self.hbar
        alpha = self.a + later.c
        if abs(alpha) < ALPHA_FLOOR or not math.isfinite(alpha):
            raise SlicingOverflowError(f"Вырожденный интеграл Френеля: α = {alpha!r}")
        sign = 1.0 if alpha > 0 else -1.0
        a = later.a - later.b ** 2 / (4 * alpha)
        b = -self.b * later.b / (2 * alpha)
        c = self.c - self.b ** 2 / (4 * alpha)
        log_prefactor = (
            self.log_prefactor
            + later.log_prefactor
            + 0.5 * math.log(math.pi * hbar / abs(alpha))
            + 1j * math.pi / 4 * sign
        )
        if not all(math.isfinite(x) for x in (a, b, c)):
            raise SlicingOverflowError("Переполнение коэффициентов ядра при композиции")
        return QuadraticKernel(a, b, c, log_prefactor, hbar, self.maslov_index + later.maslov_index + (alpha < 0))


def free_kernel(T: float, hbar: float) -> QuadraticKernel:
    """(2πiħT)^{-1/2} exp(i(q_f − q_i)²/(2ħT))."""
    if T <= 0:
        raise ValueError("Время T должно быть положительным")
    return QuadraticKernel(
        a=1 / (2 * T),
        b=-1 / T,
        c=1 / (2 * T),
        log_prefactor=-0.5 * math.log(2 * math.pi * hbar * T) - 1j * math.pi / 4,
        hbar=hbar,
    )


def caustic_distance(T: float) -> float:
    """Расстояние от T до ближайшей каустики kπ, k ≥ 1."""
    k = max(1, round(T / math.pi))
    return abs(T - k * math.pi)


def mehler_kernel(T: float, hbar: float) -> QuadraticKernel:
    """
    Ядро Мелера осциллятора единичной частоты с фазой Маслова −iπ/2·⌊T/π⌋.

    Raises:
        CausticError: |sin T| < 1e-12.
    """
    if T <= 0:
        raise ValueError("Время T должно быть положительным")
    sin_t = math.sin(T)
    if abs(sin_t) < CAUSTIC_EPSILON:
        raise CausticError(f"T = {T} совпадает с каустикой осциллятора")
    distance = caustic_distance(T)
    if distance < CAUSTIC_WARNING_DISTANCE:
        message = f"T = {T} близко к каустике (расстояние {distance:.2e})"
        logger.warning(message)
        warnings.warn(message, CausticProximityWarning, stacklevel=2)
    crossings = math.floor(T / math.pi)
    return QuadraticKernel(
        a=math.cos(T) / (2 * sin_t),
        b=-1 / sin_t,
        c=math.cos(T) / (2 * sin_t),
        log_prefactor=-0.5 * math.log(2 * math.pi * hbar * abs(sin_t)) - 1j * math.pi / 4 - 1j * math.pi / 2 * crossings,
        hbar=hbar,
        maslov_index=crossings,
    )


def exact_kernel(model: str, T: float, hbar: float) -> QuadraticKernel:
    request = PropagatorRequest(model, 0.0, 0.0, T, hbar)
    return free_kernel(T, hbar) if request.model == "free" else mehler_kernel(T, hbar)


def short_time_kernel(epsilon: float, hbar: float, kappa: float) -> QuadraticKernel:
    """Симметричное (Странг) короткое ядро e^{−iεV/2ħ} K₀(ε) e^{−iεV/2ħ}, V = κq²/2."""
    base = free_kernel(epsilon, hbar)
    shift = epsilon * kappa / 4
    return QuadraticKernel(base.a - shift, base.b, base.c - shift, base.log_prefactor, hbar)


def exact_propagator(request: PropagatorRequest) -> KernelValue:
    """
    Точное ядро свободной частицы или осциллятора.

    Args:
        request: модель, концы, время и ħ

    Returns:
        Значение ядра с развёрнутой фазой.
    """
    return exact_kernel(request.model, request.T, request.hbar).value(request.q_f, request.q_i)


def sliced_kernel(request: PropagatorRequest) -> QuadraticKernel:
    if request.slices < 2:
        raise ValueError("Разбиение по времени требует N ≥ 2")
    epsilon = request.T / request.slices
    step = short_time_kernel(epsilon, request.hbar, request.kappa)
    kernel = step
    for _ in range(request.slices - 1):
        kernel = kernel.then(step)
    return kernel


def sliced_propagator(request: PropagatorRequest) -> KernelValue:
    """
    N-кратная гауссова свёртка коротких ядер; для свободной частицы точна при любом N.

    Raises:
        SlicingOverflowError: вырождение при экстремальных N·T.
    """
    return sliced_kernel(request).value(request.q_f, request.q_i)


def slicing_sweep(request: PropagatorRequest, slices: Iterable[int]) -> List[SlicingRow]:
    exact = exact_propagator(request)
    rows = []
    for count in slices:
        value = sliced_propagator(request.with_slices(int(count)))
        row = SlicingRow(N=int(count), value=value, exact=exact)
        logger.info("N=%d: относительная ошибка %.3e", row.N, row.relative_error)
        rows.append(row)
    return rows


def convergence_order(slices: Sequence[int], errors: Sequence[float]) -> float:
    """Наклон log(ошибки) от log(N) методом наименьших квадратов, со знаком минус."""
    slices = np.asarray(slices, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if slices.size < 2 or np.any(errors <= 0):
        raise ValueError("Для оценки порядка нужны хотя бы две положительные ошибки")
    slope, _ = np.polyfit(np.log(slices), np.log(errors), 1)
    return float(-slope)


# ---------------------------------------------------------------------------
# Волновой пакет
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianWavepacket:
    """ψ(q) = exp(γq² + δq + ζ), Re γ < 0."""

    gamma: complex
    delta: complex
    zeta: complex
    hbar: float

    def __post_init__(self):
        if not self.gamma.real < 0:
            raise ValueError("Пакет ненормируем: Re γ ≥ 0")

    @classmethod
    def coherent(cls, q0: float, p0: float, hbar: float, width: Optional[float] = None) -> "GaussianWavepacket":
        """Нормированный пакет с центром (q0, p0) и шириной |ψ|² равной ``width`` (по умолчанию √(ħ/2))."""
        s = math.sqrt(hbar / 2) if width is None else width
        if s <= 0:
            raise ValueError("Ширина пакета должна быть положительной")
        return cls(
            gamma=complex(-1 / (4 * s * s)),
            delta=complex(q0 / (2 * s * s), p0 / hbar),
            zeta=complex(-q0 * q0 / (4 * s * s) - 0.25 * math.log(2 * math.pi * s * s)),
            hbar=hbar,
        )

    def __call__(self, q: float) -> complex:
        return cmath.exp(self.gamma * q * q + self.delta * q + self.zeta)

    def apply(self, kernel: QuadraticKernel) -> "GaussianWavepacket":
        """ψ'(q_f) = ∫dx K(q_f, x) ψ(x)."""
        hbar = kernel.hbar
        u = -(1j * kernel.c / hbar + self.gamma)
        gamma = 1j * kernel.a / hbar - kernel.b ** 2 / (4 * u * hbar ** 2)
        delta = 1j * kernel.b * self.delta / (2 * u * hbar)
        zeta = kernel.log_prefactor + self.zeta + 0.5 * cmath.log(math.pi / u) + self.delta ** 2 / (4 * u)
        return GaussianWavepacket(gamma, delta, zeta, self.hbar)

    def norm(self) -> float:
        g, d = self.gamma.real, self.delta.real
        return math.sqrt(math.pi / (-2 * g)) * math.exp(-d * d / (2 * g) + 2 * self.zeta.real)

    def mean(self) -> float:
        return -self.delta.real / (2 * self.gamma.real)

    def variance(self) -> float:
        return -1 / (4 * self.gamma.real)

    def spread(self) -> float:
        return math.sqrt(self.variance())


def semiclassical_concentration(
    model: str,
    phi_i: Sequence[float],
    T: float,
    hbars: Iterable[float],
) -> List[ConcentrationRow]:
    """
    Ширина |ψ(T)|² узкого пакета вокруг классической конечной точки для набора ħ.

    Пакет когерентный, ширина √(ħ/2); ширина после эволюции масштабируется как √ħ.

    Raises:
        CausticError: T на каустике осциллятора.
    """
    if T < 0:
        raise ValueError("Время T должно быть неотрицательным")
    name = PropagatorRequest(model, 0.0, 0.0, 1.0).model
    q0, p0 = float(phi_i[0]), float(phi_i[1])
    classical = classical_propagator(get_model(name), [q0, p0], 0.0, T).phi_f
    rows = []
    for hbar in hbars:
        if hbar <= 0:
            raise ValueError("ħ должна быть положительной")
        packet = GaussianWavepacket.coherent(q0, p0, hbar)
        if T > 0:
            packet = packet.apply(exact_kernel(name, T, hbar))
        row = ConcentrationRow(
            hbar=float(hbar),
            spread=packet.spread(),
            mean=packet.mean(),
            classical_q=float(classical[0]),
            norm=packet.norm(),
        )
        logger.info("ħ=%g: ширина %.4e, смещение пика %.2e", row.hbar, row.spread, row.offset)
        rows.append(row)
    return rows


def group_law_residual(model: str, T1: float, T2: float, hbar: float, points: Sequence[Tuple[float, float]]) -> float:
    """max |K(T1)∘K(T2) − K(T1+T2)| / |K(T1+T2)| по набору пар (q_f, q_i)."""
    composed = exact_kernel(model, T1, hbar).then(exact_kernel(model, T2, hbar))
    direct = exact_kernel(model, T1 + T2, hbar)
    worst = 0.0
    for q_f, q_i in points:
        reference = direct(q_f, q_i)
        worst = max(worst, abs(composed(q_f, q_i) - reference) / abs(reference))
    return worst


__all__ = [
    "QuadraticKernel",
    "free_kernel",
    "mehler_kernel",
    "exact_kernel",
    "short_time_kernel",
    "caustic_distance",
    "exact_propagator",
    "sliced_kernel",
    "sliced_propagator",
    "slicing_sweep",
    "convergence_order",
    "GaussianWavepacket",
    "semiclassical_concentration",
    "group_law_residual",
]
