"""Модели данных фазового пространства: расширенное состояние, траектория, плотность."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError


def _as_vector(values: Any, name: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != 1 or array.size % 2:
        raise DimensionMismatchError(f"{name}: ожидался вектор чётной длины, получена форма {array.shape}")
    return array


def _component_labels(n: int) -> Tuple[List[str], List[str]]:
    if n == 1:
        return ["q"], ["p"]
    return [f"q{i + 1}" for i in range(n)], [f"p{i + 1}" for i in range(n)]


@dataclass(frozen=True)
class ExtendedState:
    """Точка расширенного пространства (φ, λ, J, J̄) в момент t."""

    t: float
    phi: np.ndarray
    lam: np.ndarray
    jac: np.ndarray
    jac_bar: np.ndarray

    def __post_init__(self):
        phi = _as_vector(self.phi, "phi")
        dim = phi.size
        lam = _as_vector(self.lam, "lam")
        jac = np.array(self.jac, dtype=float)
        jac_bar = np.array(self.jac_bar, dtype=float)
        if lam.size != dim or jac.shape != (dim, dim) or jac_bar.shape != (dim, dim):
            raise DimensionMismatchError(
                f"Несогласованные размерности: φ {phi.shape}, λ {lam.shape}, J {jac.shape}, J̄ {jac_bar.shape}"
            )
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "jac", jac)
        object.__setattr__(self, "jac_bar", jac_bar)

    @classmethod
    def initial(cls, phi: Sequence[float], lam: Optional[Sequence[float]] = None, t: float = 0.0) -> "ExtendedState":
        phi = _as_vector(phi, "phi")
        dim = phi.size
        lam = np.zeros(dim) if lam is None else lam
        return cls(t=t, phi=phi, lam=lam, jac=np.eye(dim), jac_bar=np.eye(dim))

    @property
    def n(self) -> int:
        return self.phi.size // 2

    def det_jac(self) -> float:
        return float(np.linalg.det(self.jac))

    def pairing_residual(self) -> float:
        """max |J̄ᵀJ − I|."""
        return float(np.max(np.abs(self.jac_bar.T @ self.jac - np.eye(self.phi.size))))

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "phi": self.phi.tolist(),
            "lambda": self.lam.tolist(),
            "J": self.jac.tolist(),
            "J_bar": self.jac_bar.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExtendedState":
        return cls(
            t=data.get("t", 0.0),
            phi=data["phi"],
            lam=data.get("lambda", [0.0] * len(data["phi"])),
            jac=data.get("J", np.eye(len(data["phi"]))),
            jac_bar=data.get("J_bar", np.eye(len(data["phi"]))),
        )


@dataclass
class Trajectory:
    """
    Записанная траектория.

    ``phi`` имеет форму (M, 2n); ``lam``, ``jac``, ``jac_bar`` заполняются
    только для расширенного потока.
    """

    times: np.ndarray
    phi: np.ndarray
    lam: Optional[np.ndarray] = None
    jac: Optional[np.ndarray] = None
    jac_bar: Optional[np.ndarray] = None
    model_name: str = ""
    integrator: str = ""
    step: float = 0.0
    energy_drift: float = 0.0
    det_residual: float = 0.0
    pairing_residual: float = 0.0

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.phi = np.asarray(self.phi, dtype=float)
        if self.times.ndim != 1 or self.phi.shape[0] != self.times.size:
            raise DimensionMismatchError("Число моментов времени не совпадает с числом состояний")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Моменты времени траектории должны строго возрастать")

    def __len__(self) -> int:
        return self.times.size

    @property
    def n(self) -> int:
        return self.phi.shape[1] // 2

    @property
    def is_extended(self) -> bool:
        return self.jac is not None

    @property
    def final_phi(self) -> np.ndarray:
        return self.phi[-1].copy()

    def state(self, index: int) -> ExtendedState:
        if not self.is_extended:
            return ExtendedState.initial(self.phi[index], t=self.times[index])
        return ExtendedState(
            t=self.times[index],
            phi=self.phi[index],
            lam=self.lam[index],
            jac=self.jac[index],
            jac_bar=self.jac_bar[index],
        )

    def final_state(self) -> ExtendedState:
        return self.state(len(self) - 1)

    def states(self) -> Iterator[ExtendedState]:
        for index in range(len(self)):
            yield self.state(index)

    def det_jacobians(self) -> np.ndarray:
        if not self.is_extended:
            return np.ones(len(self))
        return np.linalg.det(self.jac)

    def csv_header(self) -> List[str]:
        qs, ps = _component_labels(self.n)
        header = ["t"] + qs + ps
        if self.is_extended:
            header += [f"λ_{name}" for name in qs + ps]
            dim = 2 * self.n
            header += [f"J{i + 1}{j + 1}" for i in range(dim) for j in range(dim)]
            header.append("detJ")
        return header

    def csv_rows(self) -> List[List[float]]:
        rows = []
        dets = self.det_jacobians()
        for index in range(len(self)):
            row = [float(self.times[index])] + self.phi[index].tolist()
            if self.is_extended:
                row += self.lam[index].tolist()
                row += self.jac[index].ravel().tolist()
                row.append(float(dets[index]))
            rows.append(row)
        return rows


@dataclass(frozen=True)
class PropagatorRecord:
    """
    Классический пропагатор: P(φ_f, t_f | φ_i, t_i) как дельта-функция
    в конечной точке классической траектории.
    """

    phi_i: np.ndarray
    phi_f: np.ndarray
    t_i: float
    t_f: float
    model_name: str
    representation: str = "delta"

    def density(self, phi: Any, epsilon: float) -> Any:
        """
        Регуляризованная дельта: нормированная гауссиана ширины ε вокруг φ_f.

        Args:
            phi: точка или массив точек формы (2n, ...)
            epsilon: ширина регуляризации

        Returns:
            Значение плотности.
        """
        if epsilon <= 0:
            raise ValueError("Ширина регуляризации должна быть положительной")
        phi = np.asarray(phi, dtype=float)
        dim = self.phi_f.size
        center = self.phi_f.reshape((dim,) + (1,) * (phi.ndim - 1))
        squared = np.sum((phi - center) ** 2, axis=0)
        return np.exp(-squared / (2 * epsilon ** 2)) / (2 * math.pi * epsilon ** 2) ** (dim / 2)

    def to_dict(self) -> dict:
        return {
            "model": self.model_name,
            "representation": self.representation,
            "t_i": self.t_i,
            "t_f": self.t_f,
            "phi_i": np.asarray(self.phi_i).tolist(),
            "phi_f": np.asarray(self.phi_f).tolist(),
        }


@dataclass
class EnsembleResult:
    """Конечные точки ансамбля и сведения о неудачных образцах."""

    endpoints: np.ndarray
    indices: np.ndarray
    failures: List[Tuple[int, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return int(self.endpoints.shape[0])


@dataclass
class LyapunovResult:
    """Спектр Ляпунова и история конечных по времени оценок."""

    exponents: np.ndarray
    total: float
    T: float
    renorm_interval: float
    history_times: np.ndarray
    history: np.ndarray

    def to_dict(self) -> dict:
        return {
            "exponents": self.exponents.tolist(),
            "sum": self.total,
            "T": self.T,
            "renorm_interval": self.renorm_interval,
        }


@dataclass
class Distribution:
    """
    Плотность на прямоугольной сетке (q, p).

    ``values[i, j]`` задаёт плотность в центре ячейки (q_i, p_j).
    """

    q_bounds: Tuple[float, float]
    p_bounds: Tuple[float, float]
    values: np.ndarray

    def __post_init__(self):
        self.q_bounds = (float(self.q_bounds[0]), float(self.q_bounds[1]))
        self.p_bounds = (float(self.p_bounds[0]), float(self.p_bounds[1]))
        self.values = np.array(self.values, dtype=float)
        if self.q_bounds[1] <= self.q_bounds[0] or self.p_bounds[1] <= self.p_bounds[0]:
            raise ValueError("Границы окна должны возрастать")
        if self.values.ndim != 2 or min(self.values.shape) < 2:
            raise DimensionMismatchError(f"Ожидалась двумерная сетка, получена форма {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Плотность содержит нефинитные значения")
        if np.any(self.values < 0):
            raise ValueError("Плотность должна быть неотрицательной")

    @classmethod
    def gaussian(
        cls,
        center: Sequence[float],
        sigma: float,
        q_bounds: Tuple[float, float],
        p_bounds: Tuple[float, float],
        shape: Tuple[int, int],
    ) -> "Distribution":
        """Изотропная гауссиана ширины σ, нормированная на всей плоскости."""
        if sigma <= 0:
            raise ValueError("Ширина гауссианы должна быть положительной")
        empty = cls(q_bounds, p_bounds, np.zeros(shape))
        Q, P = empty.mesh()
        squared = (Q - center[0]) ** 2 + (P - center[1]) ** 2
        values = np.exp(-squared / (2 * sigma ** 2)) / (2 * math.pi * sigma ** 2)
        return cls(q_bounds, p_bounds, values)

    @classmethod
    def from_samples(cls, points: Any, like: "Distribution") -> "Distribution":
        """
        Гистограмма выборки на сетке ``like``.

        Args:
            points: массив формы (M, 2)
            like: распределение, задающее окно и разрешение

        Returns:
            Плотность: доля образцов в ячейке, делённая на площадь ячейки.
        """
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if points.shape[0] == 0:
            return cls(like.q_bounds, like.p_bounds, np.zeros(like.shape))
        counts, _, _ = np.histogram2d(
            points[:, 0], points[:, 1], bins=[like.q_edges, like.p_edges]
        )
        return cls(like.q_bounds, like.p_bounds, counts / (points.shape[0] * like.cell_area))

    # --- геометрия сетки ----------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    @property
    def dq(self) -> float:
        return (self.q_bounds[1] - self.q_bounds[0]) / self.shape[0]

    @property
    def dp(self) -> float:
        return (self.p_bounds[1] - self.p_bounds[0]) / self.shape[1]

    @property
    def cell_area(self) -> float:
        return self.dq * self.dp

    @property
    def q_edges(self) -> np.ndarray:
        return np.linspace(self.q_bounds[0], self.q_bounds[1], self.shape[0] + 1)

    @property
    def p_edges(self) -> np.ndarray:
        return np.linspace(self.p_bounds[0], self.p_bounds[1], self.shape[1] + 1)

    @property
    def q_centers(self) -> np.ndarray:
        return self.q_bounds[0] + (np.arange(self.shape[0]) + 0.5) * self.dq

    @property
    def p_centers(self) -> np.ndarray:
        return self.p_bounds[0] + (np.arange(self.shape[1]) + 0.5) * self.dp

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.q_centers, self.p_centers, indexing="ij")

    # --- интегральные характеристики ---------------------------------------

    def mass(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def mean(self) -> Tuple[float, float]:
        Q, P = self.mesh()
        total = self.values.sum()
        return float((Q * self.values).sum() / total), float((P * self.values).sum() / total)

    def peak(self) -> Tuple[float, float]:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.shape)
        return float(self.q_centers[i]), float(self.p_centers[j])

    def cell_masses(self) -> np.ndarray:
        return self.values * self.cell_area

    def binned_masses(self, bins: Tuple[int, int] = (16, 16)) -> np.ndarray:
        nq, np_ = self.shape
        bq, bp = bins
        if nq % bq or np_ % bp:
            raise DimensionMismatchError(f"Сетка {self.shape} не делится на блоки {bins}")
        masses = self.cell_masses()
        return masses.reshape(bq, nq // bq, bp, np_ // bp).sum(axis=(1, 3))

    def _check_same_grid(self, other: "Distribution") -> None:
        if self.shape != other.shape or self.q_bounds != other.q_bounds or self.p_bounds != other.p_bounds:
            raise DimensionMismatchError("Распределения заданы на разных сетках")

    def l2_distance(self, other: "Distribution") -> float:
        self._check_same_grid(other)
        return float(np.sqrt(np.sum((self.values - other.values) ** 2) * self.cell_area))

    def binned_mass_rms(self, other: "Distribution", bins: Tuple[int, int] = (16, 16)) -> float:
        """Среднеквадратичная разность масс по укрупнённым ячейкам."""
        self._check_same_grid(other)
        difference = self.binned_masses(bins) - other.binned_masses(bins)
        return float(np.sqrt(np.mean(difference ** 2)))

    def with_values(self, values: np.ndarray) -> "Distribution":
        return Distribution(self.q_bounds, self.p_bounds, values)

    def to_dict(self) -> dict:
        return {
            "q_bounds": list(self.q_bounds),
            "p_bounds": list(self.p_bounds),
            "shape": list(self.shape),
            "cell_area": self.cell_area,
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Distribution":
        return cls(tuple(data["q_bounds"]), tuple(data["p_bounds"]), np.asarray(data["values"], dtype=float))


@dataclass
class LiouvilleResult:
    """Результат эволюции плотности."""

    distribution: Distribution
    mass_drift: float
    lost_mass: float = 0.0
    clipped_mass: float = 0.0
    outside_fraction: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mass_drift": self.mass_drift,
            "lost_mass": self.lost_mass,
            "clipped_mass": self.clipped_mass,
            "outside_fraction": self.outside_fraction,
            "distribution": self.distribution.to_dict(),
        }


__all__ = [
    "ExtendedState",
    "Trajectory",
    "PropagatorRecord",
    "EnsembleResult",
    "LyapunovResult",
    "Distribution",
    "LiouvilleResult",
]
