"""Конфигурация запуска: секции по модулям, разбор JSON и переопределение флагами"""

from __future__ import annotations

import math
from dataclasses import MISSING, asdict, dataclass, field, fields, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple

from ..errors import ConfigError
from .hamiltonian import canonical_model_name

CONFIG_VERSION = 1
COMMANDS = ("verify", "evolve", "liouville", "quantum", "lyapunov", "eq5-check")
SUITES = ("grassmann", "superspace", "all")
SWEEPS = ("N", "hbar", "group")
INTEGRATOR_NAMES = ("auto", "yoshida4", "leapfrog", "rk4")


@dataclass(frozen=True)
class ModelSection:
    name: str = "harmonic"

    def __post_init__(self):
        try:
            canonical = canonical_model_name(self.name)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        object.__setattr__(self, "name", canonical)


@dataclass(frozen=True)
class InitialSection:
    """Начальная точка (q, p) для одной степени свободы."""

    q: float = 0.1
    p: float = 0.0

    @property
    def phi(self) -> Tuple[float, float]:
        return (self.q, self.p)


@dataclass(frozen=True)
class SpanSection:
    t_i: float = 0.0
    T: float = 1.0

    def __post_init__(self):
        if self.T < 0:
            raise ConfigError("Длительность T должна быть неотрицательной")


@dataclass(frozen=True)
class IntegratorSection:
    """Параметры интегратора (см. ``physics.dynamics.IntegratorOptions``)."""

    integrator: str = "auto"
    dt: float = 1e-3
    strict_invariants: bool = False
    invariant_tolerance: float = 1e-8
    record_every: int = 1

    def __post_init__(self):
        if self.integrator not in INTEGRATOR_NAMES:
            raise ConfigError(f"Неизвестный интегратор {self.integrator!r}; доступны: {', '.join(INTEGRATOR_NAMES)}")
        if not self.dt > 0:
            raise ConfigError("Шаг интегрирования должен быть положительным")
        if self.record_every < 1:
            raise ConfigError("record_every должен быть не меньше 1")


@dataclass(frozen=True)
class VerifySection:
    """
    Наборы проверок тождеств.

    Attributes:
        suite: ``grassmann``, ``superspace`` или ``all``
        models: модели для тождеств разложения и решётки
        slices: числа интервалов решётки
        hbars: значения ħ для проектора квантования (рациональные строки)
        kinetic_forms: кинетические формы решёточного действия
        random_elements: число случайных элементов для аксиом алгебры
    """

    suite: str = "all"
    models: List[str] = field(default_factory=lambda: ["free", "harmonic", "quartic", "cubic"])
    slices: List[int] = field(default_factory=lambda: [1, 2, 4, 8])
    hbars: List[str] = field(default_factory=lambda: ["1", "1/2"])
    kinetic_forms: List[str] = field(default_factory=lambda: ["pq", "symmetric"])
    random_elements: int = 8

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"Неизвестный набор проверок {self.suite!r}; доступны: {', '.join(SUITES)}")
        if any(k < 1 for k in self.slices):
            raise ConfigError("Число интервалов решётки должно быть не меньше 1")


@dataclass(frozen=True)
class LiouvilleSection:
    sigma: float = 0.05
    grid: int = 256
    dt: float = 1e-2
    samples: int = 10000
    compare_ensemble: bool = True
    periodic_q: bool = False
    margin: float = 8.0
    distance_tolerance: float = 5e-3

    def __post_init__(self):
        if self.sigma <= 0:
            raise ConfigError("Ширина пакета σ должна быть положительной")
        if self.grid < 2:
            raise ConfigError("Сетка должна содержать хотя бы две ячейки по оси")


@dataclass(frozen=True)
class QuantumSection:
    """Параметры квантовых свипов."""

    sweep: str = "N"
    q_i: float = 0.3
    q_f: float = 0.7
    hbar: float = 1.0
    slices: List[int] = field(default_factory=lambda: [2, 4, 8, 16, 32, 64, 128, 256, 512])
    hbars: List[float] = field(default_factory=lambda: [1.0, 0.1, 0.01])
    relative_tolerance: float = 1e-3

    def __post_init__(self):
        if self.sweep not in SWEEPS:
            raise ConfigError(f"Неизвестный свип {self.sweep!r}; доступны: {', '.join(SWEEPS)}")


@dataclass(frozen=True)
class LyapunovSection:
    T: float = 1000.0
    renorm_interval: float = 1.0
    dt: float = 1e-2
    sum_tolerance: float = 1e-3

    def __post_init__(self):
        if not (self.T > 0 and self.renorm_interval > 0 and self.dt > 0):
            raise ConfigError("T, renorm_interval и dt должны быть положительными")
        if self.renorm_interval > self.T:
            raise ConfigError("Интервал переортонормировки больше полного времени")


@dataclass(frozen=True)
class GhostKernelSection:
    N: int = 2
    epsilon: float = 1e-2
    times: List[float] = field(default_factory=lambda: [0.5, 1.0, 1.5])
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.N < 1:
            raise ConfigError("Число интервалов решётки духов должно быть не меньше 1")
        if self.epsilon <= 0:
            raise ConfigError("Ширина регуляризации должна быть положительной")


SECTIONS = {
    "model": ModelSection,
    "initial": InitialSection,
    "span": SpanSection,
    "integrator": IntegratorSection,
    "verify": VerifySection,
    "liouville": LiouvilleSection,
    "quantum": QuantumSection,
    "lyapunov": LyapunovSection,
    "ghost_kernel": GhostKernelSection,
}


def _check_value(path: str, value: Any, default: Any) -> Any:
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: ожидалось логическое значение, получено {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: ожидалось целое число, получено {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: ожидалось число, получено {value!r}")
        if not math.isfinite(value):
            raise ConfigError(f"{path}: значение должно быть конечным, получено {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{path}: ожидалась строка, получено {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list):
            raise ConfigError(f"{path}: ожидался список, получено {value!r}")
        if not value:
            raise ConfigError(f"{path}: список не должен быть пустым")
        if default:
            return [_check_value(f"{path}[{i}]", item, default[0]) for i, item in enumerate(value)]
        return list(value)
    return value


def _section_from_dict(cls, data: Any, path: str):
    if not isinstance(data, Mapping):
        raise ConfigError(f"{path}: ожидался объект, получено {type(data).__name__}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"{path}: неизвестные ключи {', '.join(unknown)}")
    values = {}
    for name, value in data.items():
        item = known[name]
        default = item.default if item.default is not MISSING else item.default_factory()
        values[name] = _check_value(f"{path}.{name}", value, default)
    try:
        return cls(**values)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


@dataclass(frozen=True)
class RunConfig:
    """
    Полная конфигурация запуска.

    Секции соответствуют модулям; ``seed`` обязателен для команд со
    случайными данными (``verify`` и ``liouville`` со сравнением ансамбля).
    """

    command: str = "evolve"
    seed: Optional[int] = None
    output_dir: str = "results"
    tolerance_scale: float = 1.0
    version: int = CONFIG_VERSION
    model: ModelSection = field(default_factory=ModelSection)
    initial: InitialSection = field(default_factory=InitialSection)
    span: SpanSection = field(default_factory=SpanSection)
    integrator: IntegratorSection = field(default_factory=IntegratorSection)
    verify: VerifySection = field(default_factory=VerifySection)
    liouville: LiouvilleSection = field(default_factory=LiouvilleSection)
    quantum: QuantumSection = field(default_factory=QuantumSection)
    lyapunov: LyapunovSection = field(default_factory=LyapunovSection)
    ghost_kernel: GhostKernelSection = field(default_factory=GhostKernelSection)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"Неизвестная команда {self.command!r}; доступны: {', '.join(COMMANDS)}")
        if self.version != CONFIG_VERSION:
            raise ConfigError(f"Неподдерживаемая версия конфигурации {self.version}")
        if not (math.isfinite(self.tolerance_scale) and self.tolerance_scale > 0):
            raise ConfigError("tolerance_scale должен быть положительным конечным числом")
        if self.requires_seed and self.seed is None:
            raise ConfigError(f"Для команды {self.command!r} обязателен seed")

    @property
    def requires_seed(self) -> bool:
        if self.command == "verify":
            return True
        return self.command == "liouville" and self.liouville.compare_ensemble

    def tolerance(self, base: float) -> float:
        """Допуск проверки с учётом ``tolerance_scale``."""
        return base * self.tolerance_scale

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def fingerprint(self) -> Dict[str, Any]:
        """Словарь для хеша: всё, кроме директории результатов."""
        data = self.to_dict()
        del data["output_dir"]
        return data

    @classmethod
    def from_dict(cls, data: Any) -> "RunConfig":
        """
        Разобрать словарь конфигурации.

        Raises:
            ConfigError: неизвестные ключи, неверные типы, нефинитные числа,
                отсутствующий seed.
        """
        if not isinstance(data, Mapping):
            raise ConfigError("Конфигурация должна быть JSON-объектом")
        top = {"command", "seed", "output_dir", "tolerance_scale", "version"}
        unknown = sorted(set(data) - top - set(SECTIONS))
        if unknown:
            raise ConfigError(f"Неизвестные ключи конфигурации: {', '.join(unknown)}")
        values: Dict[str, Any] = {}
        if "command" in data:
            values["command"] = _check_value("command", data["command"], "")
        if data.get("seed") is not None:
            values["seed"] = _check_value("seed", data["seed"], 0)
        if "output_dir" in data:
            values["output_dir"] = _check_value("output_dir", data["output_dir"], "")
        if "tolerance_scale" in data:
            values["tolerance_scale"] = _check_value("tolerance_scale", data["tolerance_scale"], 1.0)
        if "version" in data:
            values["version"] = _check_value("version", data["version"], 0)
        for name, section in SECTIONS.items():
            if name in data:
                values[name] = _section_from_dict(section, data[name], name)
        return cls(**values)

    def with_command(self, command: str) -> "RunConfig":
        return replace(self, command=command)


def merge_overrides(data: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Наложить переопределения вида ``"section.key": value`` на словарь конфигурации.

    Значения ``None`` пропускаются.
    """
    merged: Dict[str, Any] = {key: dict(value) if isinstance(value, Mapping) else value for key, value in data.items()}
    for dotted, value in overrides.items():
        if value is None:
            continue
        if "." in dotted:
            section, key = dotted.split(".", 1)
            target = merged.setdefault(section, {})
            if not isinstance(target, dict):
                raise ConfigError(f"{section}: ожидался объект")
            target[key] = value
        else:
            merged[dotted] = value
    return merged


__all__ = [
    "CONFIG_VERSION",
    "COMMANDS",
    "SUITES",
    "SWEEPS",
    "INTEGRATOR_NAMES",
    "ModelSection",
    "InitialSection",
    "SpanSection",
    "IntegratorSection",
    "VerifySection",
    "LiouvilleSection",
    "QuantumSection",
    "LyapunovSection",
    "GhostKernelSection",
    "RunConfig",
    "merge_overrides",
]
