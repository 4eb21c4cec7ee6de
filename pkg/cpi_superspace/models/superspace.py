"""Модели суперпространства: симплектическая форма, суперполе, решёточный путь."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..algebra.grassmann import GeneratorRole, GeneratorTable, GrassmannElement
from ..errors import DimensionMismatchError, TableMismatchError


@dataclass(frozen=True)
class SymplecticForm:
    """Стандартная симплектическая матрица ω = [[0, I], [−I, 0]] в порядке (q, p)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatchError("Число степеней свободы должно быть положительным")

    @classmethod
    def standard(cls, n: int) -> "SymplecticForm":
        return cls(n)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def matrix(self) -> np.ndarray:
        eye = np.eye(self.n, dtype=int)
        zero = np.zeros((self.n, self.n), dtype=int)
        return np.block([[zero, eye], [-eye, zero]])

    def entry(self, a: int, b: int) -> int:
        n = self.n
        if b == a + n and a < n:
            return 1
        if a == b + n and b < n:
            return -1
        return 0

    def partner(self, a: int) -> Tuple[int, int]:
        """Единственный ненулевой элемент строки a: (b, ω^{ab})."""
        if a < self.n:
            return a + self.n, 1
        return a - self.n, -1

    def apply(self, vector: Sequence[Any]) -> List[Any]:
        """(ωv)^a = ω^{ab} v_b без умножения на нули (годится для грассмановых элементов)."""
        if len(vector) != self.dim:
            raise DimensionMismatchError(f"Ожидался вектор длины {self.dim}, получено {len(vector)}")
        result = []
        for a in range(self.dim):
            b, sign = self.partner(a)
            result.append(vector[b] if sign > 0 else -vector[b])
        return result


def ghost_names(n: int, label: str = "") -> Tuple[List[str], List[str]]:
    """Имена духов c^a и c̄_a для n степеней свободы (с меткой слоя)."""
    if n == 1:
        coords = ["q", "p"]
    else:
        coords = [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)]
    c = [f"c{label}^{x}" for x in coords]
    cbar = [f"c̄{label}_{x}" for x in coords]
    return c, cbar


@dataclass(frozen=True)
class SuperField:
    """
    Суперполе Φ^a = φ^a + θ c^a + θ̄ ω^{ab} c̄_b + i θ̄θ ω^{ab} λ_b.

    ``c`` и ``cbar`` хранят имена генераторов таблицы; ``phi`` и ``lam`` могут
    быть числами или грассмановыми элементами той же таблицы.
    """

    table: GeneratorTable
    omega: SymplecticForm
    phi: Tuple[Any, ...]
    c: Tuple[str, ...]
    cbar: Tuple[str, ...]
    lam: Tuple[Any, ...]

    def __post_init__(self):
        dim = self.omega.dim
        for name, values in (("phi", self.phi), ("c", self.c), ("cbar", self.cbar), ("lam", self.lam)):
            if len(values) != dim:
                raise DimensionMismatchError(f"{name}: ожидалось {dim} компонент, получено {len(values)}")
        for name in self.c + self.cbar:
            self.table.index(name)
        object.__setattr__(self, "phi", tuple(self.phi))
        object.__setattr__(self, "c", tuple(self.c))
        object.__setattr__(self, "cbar", tuple(self.cbar))
        object.__setattr__(self, "lam", tuple(self.lam))

    @property
    def n(self) -> int:
        return self.omega.n

    @property
    def theta(self) -> GrassmannElement:
        return self.table.generator(self.table.name_with_role(GeneratorRole.THETA))

    @property
    def thetabar(self) -> GrassmannElement:
        return self.table.generator(self.table.name_with_role(GeneratorRole.THETABAR))

    def c_elements(self) -> List[GrassmannElement]:
        return self.table.generators(self.c)

    def cbar_elements(self) -> List[GrassmannElement]:
        return self.table.generators(self.cbar)

    def base_component(self, a: int) -> Any:
        return self.phi[a]

    def theta_component(self, a: int) -> GrassmannElement:
        return self.table.generator(self.c[a])

    def thetabar_component(self, a: int) -> GrassmannElement:
        return self.omega.apply(self.cbar_elements())[a]

    def top_component(self, a: int) -> Any:
        """Коэффициент при θ̄θ: i ω^{ab} λ_b."""
        weighted = self.table.scalar(0) + self.omega.apply(list(self.lam))[a]
        return weighted * self.table.field.imag_unit

    def assemble(self) -> List[GrassmannElement]:
        theta, thetabar = self.theta, self.thetabar
        theta_bar_theta = thetabar * theta
        result = []
        for a in range(self.omega.dim):
            element = (
                self.base_component(a)
                + self.table.scalar(0)
                + theta * self.theta_component(a)
                + thetabar * self.thetabar_component(a)
                + theta_bar_theta * self.top_component(a)
            )
            result.append(element)
        return result


@dataclass
class SuperActionComponents:
    """
    Компоненты элемента по θ, θ̄: F = base + θ·theta + θ̄·thetabar + θθ̄·top.

    Все четыре компоненты не содержат θ и θ̄.
    """

    table: GeneratorTable
    base: GrassmannElement
    theta: GrassmannElement
    thetabar: GrassmannElement
    top: GrassmannElement

    def recombine(self) -> GrassmannElement:
        table = self.table
        theta = table.generator(table.name_with_role(GeneratorRole.THETA))
        thetabar = table.generator(table.name_with_role(GeneratorRole.THETABAR))
        return self.base + theta * self.theta + thetabar * self.thetabar + theta * thetabar * self.top

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "theta": self.theta.to_dict(),
            "thetabar": self.thetabar.to_dict(),
            "top": self.top.to_dict(),
        }


@dataclass
class LatticeSlice:
    """Переменные одного временного слоя решётки."""

    phi: List[Any]
    lam: List[Any]
    c: List[str]
    cbar: List[str]


@dataclass
class LatticePath:
    """
    Путь на временной решётке: слои k = 0..N с общим шагом dt.

    Все слои используют одну таблицу генераторов; θ и θ̄ входят в неё
    только для построения суперполей.
    """

    table: GeneratorTable
    omega: SymplecticForm
    dt: Any
    slices: List[LatticeSlice] = field(default_factory=list)

    def __post_init__(self):
        if len(self.slices) < 2:
            raise DimensionMismatchError("Путь должен содержать хотя бы один интервал (N ≥ 1)")
        if not self.dt > 0:
            raise ValueError("Шаг решётки должен быть положительным")
        dim = self.omega.dim
        for k, item in enumerate(self.slices):
            if len(item.phi) != dim or len(item.lam) != dim or len(item.c) != dim or len(item.cbar) != dim:
                raise DimensionMismatchError(f"Слой {k}: ожидалось {dim} компонент")
            for name in item.c + item.cbar:
                if name not in self.table:
                    raise TableMismatchError(f"Слой {k}: генератор {name!r} отсутствует в общей таблице")

    @property
    def N(self) -> int:
        return len(self.slices) - 1

    @property
    def n(self) -> int:
        return self.omega.n

    def superfield(self, k: int) -> SuperField:
        item = self.slices[k]
        return SuperField(self.table, self.omega, tuple(item.phi), tuple(item.c), tuple(item.cbar), tuple(item.lam))

    def with_shift(self, kind: str, k: int, a: int, shift: Any) -> "LatticePath":
        """Копия пути, в которой φ^a_k или λ_{a,k} сдвинуто на ``shift``."""
        if kind not in ("phi", "lam"):
            raise ValueError(f"Неизвестная переменная сдвига: {kind!r}")
        slices = [LatticeSlice(list(s.phi), list(s.lam), list(s.c), list(s.cbar)) for s in self.slices]
        values = getattr(slices[k], kind)
        values[a] = values[a] + shift
        return LatticePath(self.table, self.omega, self.dt, slices)

    def boundary(self, which: str) -> LatticeSlice:
        return self.slices[0] if which == "initial" else self.slices[-1]

    def describe(self) -> Dict[str, Any]:
        return {"N": self.N, "n": self.n, "dt": str(self.dt), "generators": len(self.table)}


__all__ = [
    "SymplecticForm",
    "SuperField",
    "SuperActionComponents",
    "LatticeSlice",
    "LatticePath",
    "ghost_names",
]
