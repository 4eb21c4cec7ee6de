"""
Связь вероятности и амплитуды в духовом секторе для квадратичных H.

Духовая часть решёточного ядра строится символически (плавающий режим):
интегрирование по c̄_k даёт грассмановы дельта-функции переноса,
интегрирование по промежуточным c_k сцепляет их в κ·δ(c_N − Jc_0).
Преобразование Фурье по c_N даёт смешанное представление ∝ exp(i c̄_f·Jc_0),
квадрат модуля интегрируется по Березину по dc_i dc̄_f.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from ..algebra.coefficients import CoefficientMode
from ..algebra.grassmann import GeneratorRole, GeneratorTable, GrassmannElement, berezin_integrate, create_algebra
from ..errors import DegenerateTransporterError, UnsupportedModelError
from ..models.hamiltonian import HamiltonianModel
from ..models.phase_space import Distribution
from ..models.quantum import ProbabilityAmplitudeReport
from ..models.superspace import SymplecticForm, ghost_names
from .dynamics import classical_propagator
from .liouville import density_at

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-2
DEGENERATE_DET = 1e-12
PEAK_GRID = 41
PACKET_GRID = 257
PACKET_MARGIN = 8.0


def transfer_matrix(model: HamiltonianModel, phi: Sequence[float], dt: float) -> np.ndarray:
    """Точный перенос за шаг dt для квадратичного H: M = exp(ω·Hess·dt)."""
    omega = SymplecticForm.standard(model.n).matrix
    return expm(omega @ model.hessian(phi) * dt)


def _lattice_ghost_table(N: int) -> Tuple[GeneratorTable, List[List[str]], List[List[str]], List[str]]:
    c_rows, cbar_rows = [], []
    names: List[Tuple[str, GeneratorRole]] = []
    for k in range(N + 1):
        c, cbar = ghost_names(1, label=str(k))
        c_rows.append(c)
        names += [(name, GeneratorRole.GHOST_C) for name in c]
        if k < N:
            cbar_rows.append(cbar)
            names += [(name, GeneratorRole.GHOST_CBAR) for name in cbar]
    _, cbar_final = ghost_names(1, label="f")
    names += [(name, GeneratorRole.GHOST_CBAR) for name in cbar_final]
    table = create_algebra(names, mode=CoefficientMode.FLOAT)
    return table, c_rows, cbar_rows, cbar_final


def _linear(table: GeneratorTable, matrix: np.ndarray, names: Sequence[str]) -> List[GrassmannElement]:
    generators = table.generators(names)
    result = []
    for a in range(matrix.shape[0]):
        element = table.zero()
        for b in range(matrix.shape[1]):
            if matrix[a, b] != 0:
                element = element + generators[b] * float(matrix[a, b])
        result.append(element)
    return result


def ghost_chain(table: GeneratorTable, M: np.ndarray, c_rows, cbar_rows) -> GrassmannElement:
    """
    ∫Π_{k=1}^{N−1}dc_k Π_k ∫dc̄_k exp(−c̄_k·(c_{k+1} − Mc_k)).

    Returns:
        Элемент, зависящий только от c_0 и c_N.
    """
    factors = table.one()
    for k, cbar in enumerate(cbar_rows):
        following = table.generators(c_rows[k + 1])
        moved = _linear(table, M, c_rows[k])
        bilinear = table.zero()
        for a, name in enumerate(cbar):
            bilinear = bilinear + table.generator(name) * (following[a] - moved[a])
        factors = factors * berezin_integrate((-bilinear).exp(), cbar)
    intermediate = [name for row in c_rows[1:-1] for name in row]
    return berezin_integrate(factors, intermediate)


def fourier_final(table: GeneratorTable, chain: GrassmannElement, c_final: Sequence[str], cbar_final: Sequence[str]) -> GrassmannElement:
    """G = ∫dc_N exp(i c̄_f·c_N)·chain."""
    phase = table.zero()
    for cbar, c in zip(cbar_final, c_final):
        phase = phase + table.generator(cbar) * table.generator(c)
    return berezin_integrate((phase * 1j).exp() * chain, list(c_final))


def ghost_modulus_integral(G: GrassmannElement, names: Sequence[str]) -> complex:
    """
    g = ∫ dc_i dc̄_f dc_i* dc̄_f* G·G*.

    G и сопряжённый элемент переносятся на таблицу пар, где сопряжённые
    генераторы получают суффикс ``*``.
    """
    pair_names = list(names) + [name + "*" for name in names]
    source = G.table
    pair_table = create_algebra([(name, source.role_of(name.rstrip("*"))) for name in pair_names], mode=CoefficientMode.FLOAT)
    forward = G.relabel(pair_table)
    backward = G.conjugate().relabel(pair_table, {name: name + "*" for name in names})
    integral = berezin_integrate(forward * backward, pair_names)
    return complex(integral.field.to_complex(integral.body()))


def _gaussian_squared(x: np.ndarray, epsilon: float) -> np.ndarray:
    # |N_ε exp(−|x|²/(2ε²))|², N_ε = 1/(2πε²)
    norm = 1.0 / (2 * math.pi * epsilon ** 2)
    return norm ** 2 * np.exp(-np.sum(x ** 2, axis=0) / epsilon ** 2)


def analytic_constant(epsilon: float) -> float:
    """
    K = 4πε² при |g| = |det J|² = 1.

    Отношение перенесённой гауссианы ширины ε/√2 к квадрату модуля
    бозонной дельты ширины ε, делённое на |g|.
    """
    return 4 * math.pi * epsilon ** 2


def _transported_packet(
    model: HamiltonianModel, phi_i: np.ndarray, width: float, T: float, points: np.ndarray
) -> np.ndarray:
    half = PACKET_MARGIN * width
    packet = Distribution.gaussian(
        phi_i,
        width,
        (phi_i[0] - half, phi_i[0] + half),
        (phi_i[1] - half, phi_i[1] + half),
        (PACKET_GRID, PACKET_GRID),
    )
    return density_at(packet, model, T, points)


def probability_amplitude_check(
    model: HamiltonianModel,
    N: int = 2,
    epsilon: float = DEFAULT_EPSILON,
    T: float = math.pi / 2,
    phi_i: Sequence[float] = (1.0, 0.0),
) -> ProbabilityAmplitudeReport:
    """
    Проверить P = K·∫|⟨φ_f, c_f|φ_i, c_i⟩|² dc_i dc_f для квадратичного H.

    Args:
        model: квадратичная модель с одной степенью свободы
        N: число интервалов решётки духового сектора
        epsilon: ширина гауссовой регуляризации бозонных дельта-функций
        T: время
        phi_i: начальная точка

    Returns:
        Отчёт с g, κ, остатками представлений, K, его отклонением от 4πε²,
        отклонением перенесённой по Лиувиллю вероятности от K·|g|·|δ_ε|² в
        пробных точках и положением бозонного пика.

    Raises:
        UnsupportedModelError: модель неквадратична или n ≠ 1.
        DegenerateTransporterError: |det M| < 1e-12.
    """
    if not model.quadratic or model.n != 1:
        raise UnsupportedModelError(
            f"Проверка связи вероятности и амплитуды требует квадратичной модели с n = 1, получено {model.name!r}"
        )
    if N < 1:
        raise ValueError("Число интервалов решётки должно быть не меньше 1")
    if epsilon <= 0:
        raise ValueError("Ширина регуляризации должна быть положительной")
    if T < 0:
        raise ValueError("Время T должно быть неотрицательным")

    phi_i = np.asarray(phi_i, dtype=float)
    M = transfer_matrix(model, phi_i, T / N)
    if abs(np.linalg.det(M)) < DEGENERATE_DET:
        raise DegenerateTransporterError(f"Вырожденная матрица переноса: det M = {np.linalg.det(M):.3e}")
    J = np.linalg.matrix_power(M, N)

    table, c_rows, cbar_rows, cbar_final = _lattice_ghost_table(N)
    chain = ghost_chain(table, M, c_rows, cbar_rows)
    c_first, c_last = c_rows[0], c_rows[-1]
    kappa = chain.complex_coefficient(c_last)

    transported = _linear(table, J, c_first)
    delta = table.one()
    for a, name in enumerate(c_last):
        delta = delta * (table.generator(name) - transported[a])
    delta_residual = (chain - delta * kappa).max_abs_coefficient()

    G = fourier_final(table, chain, c_last, cbar_final)
    mixed_phase = table.zero()
    for a, name in enumerate(cbar_final):
        mixed_phase = mixed_phase + table.generator(name) * transported[a]
    mixed_residual = (G - (mixed_phase * 1j).exp() * G.body()).max_abs_coefficient()

    g = ghost_modulus_integral(G, list(c_first) + list(cbar_final))
    if abs(g) == 0:
        raise DegenerateTransporterError("Интеграл Березина по духам обратился в нуль")

    record = classical_propagator(model, phi_i, 0.0, T)
    endpoint = record.phi_f
    center = J @ phi_i
    offsets = np.array([(dq, dp) for dq in (-epsilon, 0.0, epsilon) for dp in (-epsilon, 0.0, epsilon)]).T
    points = endpoint[:, None] + offsets
    bosonic = _gaussian_squared(points - center[:, None], epsilon)
    width = epsilon / math.sqrt(2)
    constant = float(np.mean(record.density(points, width) / (abs(g) * bosonic)))
    expected = analytic_constant(epsilon)
    deviation = abs(constant - expected) / expected

    # P независимо от J и g: пакет ширины ε/√2, перенесённый по Лиувиллю
    liouville_probability = _transported_packet(model, phi_i, width, T, points)
    transport_deviation = float(np.max(np.abs(liouville_probability / (constant * abs(g) * bosonic) - 1.0)))

    axis = np.linspace(-2 * epsilon, 2 * epsilon, PEAK_GRID)
    grid = np.stack(np.meshgrid(axis, axis, indexing="ij")).reshape(2, -1) + endpoint[:, None]
    best = int(np.argmax(_gaussian_squared(grid - center[:, None], epsilon)))
    peak = grid[:, best]
    peak_offset = float(np.linalg.norm(peak - endpoint))

    logger.info(
        "Связь P и |K|² для %s, T=%g, N=%d: g=%s, K=%.6e (ожидалось %.6e), отклонение P %.2e",
        model.name, T, N, g, constant, expected, transport_deviation,
    )
    return ProbabilityAmplitudeReport(
        model=model.name,
        T=float(T),
        N=N,
        epsilon=float(epsilon),
        ghost_integral=g,
        delta_normalization=kappa,
        delta_residual=float(delta_residual),
        mixed_residual=float(mixed_residual),
        constant=constant,
        expected_constant=expected,
        constant_deviation=float(deviation),
        transport_deviation=transport_deviation,
        peak=(float(peak[0]), float(peak[1])),
        classical_endpoint=(float(endpoint[0]), float(endpoint[1])),
        peak_offset=peak_offset,
        transporter=J.tolist(),
    )


def constant_across_times(model: HamiltonianModel, times: Sequence[float], **kwargs) -> Dict[float, float]:
    """K для набора времён; для квадратичного H не зависит от T."""
    return {float(T): probability_amplitude_check(model, T=T, **kwargs).constant for T in times}


__all__ = [
    "DEFAULT_EPSILON",
    "transfer_matrix",
    "ghost_chain",
    "fourier_final",
    "ghost_modulus_integral",
    "analytic_constant",
    "probability_amplitude_check",
    "constant_across_times",
]
