"""
Эволюция плотности оператором Лиувилля L̂ = ∂_pH ∂_q − ∂_qH ∂_p.

Полулагранжева схема: для каждого центра ячейки характеристика
прослеживается назад на всё время RK4, плотность в её основании
восстанавливается кубической интерполяцией.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.ndimage import map_coordinates

from ..errors import BoundaryLossWarning, UnsupportedModelError
from ..models.hamiltonian import HamiltonianModel
from ..models.phase_space import Distribution, LiouvilleResult
from .dynamics import FlowIntegrator, IntegratorOptions, ensemble_evolve

logger = logging.getLogger(__name__)

WRAP_PADDING = 4


@dataclass(frozen=True)
class LiouvilleOptions:
    """
    Параметры полулагранжевой схемы.

    Attributes:
        dt: шаг RK4 при обратном прослеживании характеристик
        order: порядок сплайна интерполяции
        periodic_q: окружность по q (окно по q должно совпадать с периодом)
        loss_tolerance: относительная потеря массы, выше которой выдаётся предупреждение
    """

    dt: float = 1e-2
    order: int = 3
    periodic_q: bool = False
    loss_tolerance: float = 1e-3

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("Шаг прослеживания должен быть положительным")
        if self.order not in range(0, 6):
            raise ValueError("Порядок сплайна должен быть от 0 до 5")


def _trace_back(points: np.ndarray, model: HamiltonianModel, T: float, options: LiouvilleOptions) -> np.ndarray:
    tracer = FlowIntegrator(model, IntegratorOptions(integrator="rk4", dt=options.dt))
    return tracer.advance(points, -T)


def _feet(dist: Distribution, model: HamiltonianModel, T: float, options: LiouvilleOptions) -> np.ndarray:
    Q, P = dist.mesh()
    return _trace_back(np.stack([Q.ravel(), P.ravel()]), model, T, options)


def liouville_evolve(
    dist: Distribution,
    model: HamiltonianModel,
    T: float,
    options: Optional[LiouvilleOptions] = None,
) -> LiouvilleResult:
    """
    Перенести плотность вдоль характеристик на время T.

    Args:
        dist: начальная плотность на сетке (q, p)
        model: гамильтониан с одной степенью свободы
        T: время эволюции
        options: параметры схемы

    Returns:
        Новая плотность, дрейф массы, оценка потерь на границе и срезанная
        отрицательная масса.
    """
    options = options or LiouvilleOptions()
    if model.n != 1:
        raise UnsupportedModelError("Эволюция плотности на сетке реализована только для одной степени свободы")
    if T == 0:
        return LiouvilleResult(distribution=dist.with_values(dist.values.copy()), mass_drift=0.0)

    feet = _feet(dist, model, T, options)
    nq, np_ = dist.shape
    q_lo, q_hi = dist.q_bounds
    p_lo, p_hi = dist.p_bounds
    q_feet, p_feet = feet[0], feet[1]

    values = dist.values
    if options.periodic_q:
        width = q_hi - q_lo
        q_feet = q_lo + np.mod(q_feet - q_lo, width)
        values = np.pad(values, ((WRAP_PADDING, WRAP_PADDING), (0, 0)), mode="wrap")
        offset = WRAP_PADDING
    else:
        offset = 0

    i = (q_feet - q_lo) / dist.dq - 0.5 + offset
    j = (p_feet - p_lo) / dist.dp - 0.5
    moved = map_coordinates(values, [i, j], order=options.order, mode="constant", cval=0.0).reshape(nq, np_)

    outside = (p_feet < p_lo) | (p_feet > p_hi)
    if not options.periodic_q:
        outside |= (q_feet < q_lo) | (q_feet > q_hi)
    outside_fraction = float(np.mean(outside))

    negative = moved < 0
    clipped_mass = float(-moved[negative].sum() * dist.cell_area)
    moved[negative] = 0.0
    if clipped_mass > 0:
        logger.debug("Срезана отрицательная масса %.3e", clipped_mass)

    m0 = dist.mass()
    result = dist.with_values(moved)
    m1 = result.mass()
    lost = max(0.0, m0 - m1) if outside.any() else 0.0
    if m0 > 0 and lost > options.loss_tolerance * m0:
        message = (
            f"Характеристики покинули окно ({outside_fraction:.1%} ячеек), "
            f"оценка потерянной массы {lost:.3e} из {m0:.3e}"
        )
        logger.warning(message)
        warnings.warn(message, BoundaryLossWarning, stacklevel=2)
    drift = (m1 - m0) / m0 if m0 > 0 else 0.0
    logger.info("Лиувилль %s, T=%g: дрейф массы %.3e", model.name, T, drift)
    return LiouvilleResult(
        distribution=result,
        mass_drift=drift,
        lost_mass=lost,
        clipped_mass=clipped_mass,
        outside_fraction=outside_fraction,
    )


def density_at(
    dist: Distribution,
    model: HamiltonianModel,
    T: float,
    points: Sequence[Sequence[float]],
    options: Optional[LiouvilleOptions] = None,
) -> np.ndarray:
    """
    Плотность, перенесённая на время T, в произвольных точках без пересчёта всей сетки.

    Args:
        dist: начальная плотность на сетке (q, p)
        model: гамильтониан с одной степенью свободы
        T: время эволюции
        points: точки формы (2, M)
        options: параметры схемы (шаг прослеживания и порядок сплайна)

    Returns:
        Массив формы (M,); вне окна начальной сетки плотность равна нулю.
    """
    options = options or LiouvilleOptions()
    if model.n != 1:
        raise UnsupportedModelError("Эволюция плотности на сетке реализована только для одной степени свободы")
    points = np.asarray(points, dtype=float).reshape(2, -1)
    feet = _trace_back(points, model, T, options) if T != 0 else points
    i = (feet[0] - dist.q_bounds[0]) / dist.dq - 0.5
    j = (feet[1] - dist.p_bounds[0]) / dist.dp - 0.5
    values = map_coordinates(dist.values, [i, j], order=options.order, mode="constant", cval=0.0)
    return np.clip(values, 0.0, None)


def sample_gaussian(
    center: Sequence[float],
    sigma: float,
    count: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Выборка изотропной гауссианы формы (count, 2)."""
    if count < 0:
        raise ValueError("Размер выборки должен быть неотрицательным")
    return rng.normal(loc=np.asarray(center, dtype=float), scale=sigma, size=(count, 2))


def ensemble_histogram(
    samples: np.ndarray,
    model: HamiltonianModel,
    T: float,
    like: Distribution,
    options: Optional[IntegratorOptions] = None,
) -> Distribution:
    """Гистограмма перенесённого ансамбля на сетке ``like``."""
    moved = ensemble_evolve(samples, model, T, options)
    return Distribution.from_samples(moved.endpoints, like)


def peak_offset_cells(dist: Distribution, point: Sequence[float]) -> float:
    """Расстояние от пика плотности до точки в единицах ячейки (по максимуму из осей)."""
    q_peak, p_peak = dist.peak()
    return max(abs(q_peak - point[0]) / dist.dq, abs(p_peak - point[1]) / dist.dp)


def default_window(center: Sequence[float], sigma: float, margin: float = 8.0) -> tuple:
    """Квадратное окно, вмещающее пакет с запасом ``margin``·σ вокруг окружности радиуса |center|."""
    radius = math.hypot(center[0], center[1]) + margin * sigma
    return (-radius, radius), (-radius, radius)


__all__ = [
    "LiouvilleOptions",
    "liouville_evolve",
    "density_at",
    "sample_gaussian",
    "ensemble_histogram",
    "peak_offset_cells",
    "default_window",
]
