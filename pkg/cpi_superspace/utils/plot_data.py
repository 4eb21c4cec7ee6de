"""
Файлы данных для построения графиков.

Формат: столбцы через пробел (numpy.savetxt), строки заголовка начинаются
с ``#`` и содержат единицы измерения и хеш конфигурации.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from ..errors import PlotDataError
from ..models.phase_space import Distribution, LyapunovResult, Trajectory

logger = logging.getLogger(__name__)

PLOT_KINDS = ("distribution", "hbar_sweep", "n_sweep", "trajectory", "lyapunov")

Table = Tuple[np.ndarray, str]


def _distribution(result: Distribution) -> Table:
    Q, P = result.mesh()
    data = np.column_stack([Q.ravel(), P.ravel(), result.values.ravel()])
    return data, "q [безразм.]  p [безразм.]  rho [1/(q·p)]"


def _hbar_sweep(rows: List[Any]) -> Table:
    data = np.array([[row.hbar, row.spread] for row in rows], dtype=float)
    return data, "hbar [ед. действия]  spread [q]"


def _n_sweep(rows: List[Any]) -> Table:
    data = np.array([[row.N, row.relative_error] for row in rows], dtype=float)
    return data, "N [срезы]  relative_error [безразм.]"


def _trajectory(result: Trajectory) -> Table:
    data = np.column_stack([result.times, result.phi])
    names = "  ".join(f"phi{a} [безразм.]" for a in range(result.phi.shape[1]))
    return data, f"t [время]  {names}"


def _lyapunov(result: LyapunovResult) -> Table:
    data = np.column_stack([result.history_times, result.history])
    names = "  ".join(f"lambda{a} [1/время]" for a in range(result.history.shape[1]))
    return data, f"t [время]  {names}"


_BUILDERS: Dict[str, Callable[[Any], Table]] = {
    "distribution": _distribution,
    "hbar_sweep": _hbar_sweep,
    "n_sweep": _n_sweep,
    "trajectory": _trajectory,
    "lyapunov": _lyapunov,
}


def _is_empty(result: Any) -> bool:
    if result is None:
        return True
    if isinstance(result, Distribution):
        return result.values.size == 0
    if isinstance(result, Trajectory):
        return result.times.size == 0
    if isinstance(result, LyapunovResult):
        return result.history_times.size == 0
    try:
        return len(result) == 0
    except TypeError:
        return False


def plot_table(result: Any, kind: str) -> Table:
    """Таблица и строка заголовка столбцов для вида графика ``kind``."""
    if kind not in _BUILDERS:
        raise PlotDataError(f"Неизвестный вид графика {kind!r}; доступны: {', '.join(PLOT_KINDS)}")
    if _is_empty(result):
        raise PlotDataError(f"Пустой набор результатов для графика {kind!r}")
    return _BUILDERS[kind](result)


def emit_plot_data(result: Any, kind: str, path: Path, config_hash: str) -> Path:
    """
    Записать файл данных для графика.

    Args:
        result: набор результатов (плотность, строки свипа, траектория, спектр Ляпунова)
        kind: вид графика из PLOT_KINDS
        path: путь к файлу
        config_hash: хеш конфигурации, породившей данные

    Returns:
        Путь к записанному файлу.

    Raises:
        PlotDataError: пустой набор результатов или неизвестный вид; файл не создаётся.
        OSError: директория недоступна для записи.
    """
    data, columns = plot_table(result, kind)
    path = Path(path)
    header = f"kind: {kind}\nconfig_hash: {config_hash}\n{columns}"
    np.savetxt(path, data, header=header, comments="# ", fmt="%.12e")
    logger.info("Данные графика %s: %s (%d строк)", kind, path, data.shape[0])
    return path


__all__ = ["PLOT_KINDS", "plot_table", "emit_plot_data"]
