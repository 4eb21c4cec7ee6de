"""
Разреженная грассманова (внешняя) алгебра над упорядоченным набором генераторов.

Моном хранится как битовая маска ``int``: бит ``i`` соответствует генератору
с индексом ``i`` в таблице. Каноничный порядок сомножителей в мономе совпадает
с порядком таблицы.

Соглашения о знаках:
    * произведение мономов A·B получает знак (−1)^{#(i∈A, j∈B): i > j};
    * левая производная ∂_g сначала переносит g в начало монома;
    * ∫dg совпадает с ∂_g, в итерированном интеграле первым берётся
      последний из перечисленных генераторов: ∫dθ dθ̄ F = ∂_θ(∂_θ̄ F);
    * ∫dθ dθ̄ θθ̄ = −1, поэтому составная мера i∫dθ dθ̄ даёт ∫ i dθ dθ̄ (iθθ̄) = 1.
"""

from __future__ import annotations

import cmath
import logging
import math
import numbers
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import (
    CoefficientModeError,
    GeneratorTableError,
    MissingDerivativeError,
    SerializationError,
    TableMismatchError,
    UnknownGeneratorError,
)
from .coefficients import (
    DEFAULT_ZERO_THRESHOLD,
    CoefficientField,
    CoefficientMode,
    make_field,
)

logger = logging.getLogger(__name__)

DEFAULT_CAPACITY = 64

Monomial = int
GeneratorRef = Union[str, int]


class GeneratorRole(str, Enum):
    """Роль генератора в таблице."""

    THETA = "theta"
    THETABAR = "thetabar"
    GHOST_C = "ghost_c"
    GHOST_CBAR = "ghost_cbar"
    AUXILIARY = "auxiliary"


def _infer_role(name: str) -> GeneratorRole:
    if name == "θ":
        return GeneratorRole.THETA
    if name == "θ̄":
        return GeneratorRole.THETABAR
    if name.startswith("c̄"):
        return GeneratorRole.GHOST_CBAR
    if name.startswith("c"):
        return GeneratorRole.GHOST_C
    return GeneratorRole.AUXILIARY


# ---------------------------------------------------------------------------
# Мономы
# ---------------------------------------------------------------------------

def monomial_degree(mask: Monomial) -> int:
    return bin(mask).count("1")


def monomial_indices(mask: Monomial) -> Tuple[int, ...]:
    """Индексы генераторов монома в порядке возрастания."""
    indices = []
    index = 0
    while mask:
        if mask & 1:
            indices.append(index)
        mask >>= 1
        index += 1
    return tuple(indices)


def monomial_from_indices(indices: Iterable[int]) -> Monomial:
    mask = 0
    for index in indices:
        bit = 1 << int(index)
        if mask & bit:
            raise GeneratorTableError(f"Повтор индекса {index} в мономе")
        mask |= bit
    return mask


@lru_cache(maxsize=1 << 16)
def merge_sign(left: Monomial, right: Monomial) -> int:
    """
    Знак слияния двух непересекающихся мономов.

    Args:
        left: левый моном
        right: правый моном

    Returns:
        +1 или −1 по чётности числа транспозиций.
    """
    swaps = 0
    remaining = right
    while remaining:
        low = remaining & -remaining
        position = low.bit_length() - 1
        swaps += monomial_degree(left >> (position + 1))
        remaining ^= low
    return -1 if swaps & 1 else 1


def _permutation_sign(sequence: Sequence[int]) -> int:
    inversions = 0
    for i in range(len(sequence)):
        for j in range(i + 1, len(sequence)):
            if sequence[i] > sequence[j]:
                inversions += 1
    return -1 if inversions & 1 else 1


# ---------------------------------------------------------------------------
# Таблица генераторов
# ---------------------------------------------------------------------------

class GeneratorTable:
    """
    Упорядоченная таблица антикоммутирующих генераторов.

    Порядок фиксируется при создании. Режим коэффициентов (точный или
    плавающий) является свойством таблицы.
    """

    __slots__ = ("_names", "_roles", "_index", "_mode", "_field", "_capacity", "_zero_threshold")

    def __init__(
        self,
        generators: Sequence[Union[str, Tuple[str, Union[GeneratorRole, str]]]],
        mode: Union[CoefficientMode, str] = CoefficientMode.EXACT,
        capacity: int = DEFAULT_CAPACITY,
        zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
    ):
        if capacity <= 0:
            raise GeneratorTableError(f"Ёмкость таблицы должна быть положительной: {capacity}")
        if not generators:
            raise GeneratorTableError("Список генераторов пуст")

        names: List[str] = []
        roles: List[GeneratorRole] = []
        for entry in generators:
            if isinstance(entry, str):
                name, role = entry, _infer_role(entry)
            else:
                name, role = entry
            names.append(str(name))
            roles.append(GeneratorRole(role))

        seen = set()
        duplicates = [name for name in names if name in seen or seen.add(name)]
        if duplicates:
            raise GeneratorTableError(f"Повторяющиеся имена генераторов: {', '.join(duplicates)}")
        if len(names) > capacity:
            raise GeneratorTableError(
                f"Превышена ёмкость таблицы: {len(names)} генераторов при ёмкости {capacity}"
            )

        self._names = tuple(names)
        self._roles = tuple(roles)
        self._index = {name: i for i, name in enumerate(names)}
        self._mode = CoefficientMode(mode)
        self._field = make_field(self._mode, zero_threshold)
        self._capacity = int(capacity)
        self._zero_threshold = float(zero_threshold)

    # --- свойства ---------------------------------------------------------

    @property
    def names(self) -> Tuple[str, ...]:
        return self._names

    @property
    def roles(self) -> Tuple[GeneratorRole, ...]:
        return self._roles

    @property
    def mode(self) -> CoefficientMode:
        return self._mode

    @property
    def field(self) -> CoefficientField:
        return self._field

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def zero_threshold(self) -> float:
        return self._zero_threshold

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorTable):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self) -> int:
        return hash(self._signature())

    def __repr__(self) -> str:
        return f"GeneratorTable({list(self._names)!r}, mode={self._mode.value!r})"

    def _signature(self) -> tuple:
        return (self._names, self._roles, self._mode, self._capacity, self._zero_threshold)

    # --- доступ к генераторам --------------------------------------------

    def index(self, generator: GeneratorRef) -> int:
        if isinstance(generator, numbers.Integral):
            if 0 <= int(generator) < len(self._names):
                return int(generator)
            raise UnknownGeneratorError(f"Индекс генератора вне таблицы: {generator}")
        try:
            return self._index[generator]
        except KeyError:
            raise UnknownGeneratorError(f"Неизвестный генератор: {generator}") from None

    def role_of(self, generator: GeneratorRef) -> GeneratorRole:
        return self._roles[self.index(generator)]

    def names_with_role(self, role: Union[GeneratorRole, str]) -> Tuple[str, ...]:
        role = GeneratorRole(role)
        return tuple(name for name, r in zip(self._names, self._roles) if r is role)

    def name_with_role(self, role: Union[GeneratorRole, str]) -> str:
        """Единственный генератор с ролью (θ или θ̄)."""
        found = self.names_with_role(role)
        if len(found) != 1:
            raise UnknownGeneratorError(
                f"В таблице ожидался ровно один генератор с ролью {GeneratorRole(role).value}, найдено {len(found)}"
            )
        return found[0]

    def monomial(self, generators: Iterable[GeneratorRef]) -> Monomial:
        return monomial_from_indices(self.index(g) for g in generators)

    def monomial_names(self, mask: Monomial) -> Tuple[str, ...]:
        return tuple(self._names[i] for i in monomial_indices(mask))

    # --- конструкторы элементов ------------------------------------------

    def scalar(self, value: Any) -> "GrassmannElement":
        return GrassmannElement(self, {0: value})

    def zero(self) -> "GrassmannElement":
        return GrassmannElement._trusted(self, {})

    def one(self) -> "GrassmannElement":
        return GrassmannElement._trusted(self, {0: self._field.one})

    def generator(self, generator: GeneratorRef) -> "GrassmannElement":
        return GrassmannElement._trusted(self, {1 << self.index(generator): self._field.one})

    def generators(self, names: Iterable[GeneratorRef]) -> List["GrassmannElement"]:
        return [self.generator(name) for name in names]

    def product(self, generators: Iterable[GeneratorRef]) -> "GrassmannElement":
        """Произведение генераторов в указанном порядке."""
        result = self.one()
        for name in generators:
            result = result * self.generator(name)
        return result


def create_algebra(
    names: Sequence[Union[str, Tuple[str, Union[GeneratorRole, str]]]],
    mode: Union[CoefficientMode, str] = CoefficientMode.EXACT,
    capacity: int = DEFAULT_CAPACITY,
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
) -> GeneratorTable:
    """
    Создать таблицу генераторов.

    Args:
        names: пары (имя, роль) или имена (роль выводится из имени)
        mode: режим коэффициентов
        capacity: максимальное число генераторов

    Returns:
        Таблица с заданным порядком генераторов.
    """
    return GeneratorTable(names, mode=mode, capacity=capacity, zero_threshold=zero_threshold)


# ---------------------------------------------------------------------------
# Элемент алгебры
# ---------------------------------------------------------------------------

class GrassmannElement:
    """
    Элемент грассмановой алгебры: отображение моном → коэффициент.

    Неизменяем после создания. Коэффициенты ниже порога обнуления не хранятся.
    """

    __slots__ = ("_table", "_terms")

    # numpy не должен разворачивать элемент в массив при смешанной арифметике
    __array_ufunc__ = None

    def __init__(self, table: GeneratorTable, terms: Optional[Mapping[Monomial, Any]] = None):
        field = table.field
        limit = 1 << len(table)
        cleaned: Dict[Monomial, Any] = {}
        for mono, coeff in (terms or {}).items():
            mono = int(mono)
            if mono < 0 or mono >= limit:
                raise GeneratorTableError(f"Моном {mono:#b} ссылается на генератор вне таблицы")
            value = field.convert(coeff)
            if mono in cleaned:
                value = cleaned[mono] + value
            cleaned[mono] = value
        self._table = table
        self._terms = {m: c for m, c in cleaned.items() if not field.is_zero(c)}

    @classmethod
    def _trusted(cls, table: GeneratorTable, terms: Dict[Monomial, Any]) -> "GrassmannElement":
        element = object.__new__(cls)
        element._table = table
        element._terms = terms
        return element

    @classmethod
    def _pruned(cls, table: GeneratorTable, terms: Dict[Monomial, Any]) -> "GrassmannElement":
        is_zero = table.field.is_zero
        return cls._trusted(table, {m: c for m, c in terms.items() if not is_zero(c)})

    # --- доступ -----------------------------------------------------------

    @property
    def table(self) -> GeneratorTable:
        return self._table

    @property
    def terms(self) -> Mapping[Monomial, Any]:
        return MappingProxyType(self._terms)

    @property
    def field(self) -> CoefficientField:
        return self._table.field

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def body(self) -> Any:
        """Коэффициент пустого монома."""
        return self._terms.get(0, self.field.zero)

    def soul(self) -> "GrassmannElement":
        return GrassmannElement._trusted(self._table, {m: c for m, c in self._terms.items() if m})

    def degree(self) -> int:
        return max((monomial_degree(m) for m in self._terms), default=0)

    def grade(self, k: int) -> "GrassmannElement":
        return GrassmannElement._trusted(
            self._table, {m: c for m, c in self._terms.items() if monomial_degree(m) == k}
        )

    def homogeneous_degree(self) -> Optional[int]:
        degrees = {monomial_degree(m) for m in self._terms}
        if len(degrees) == 1:
            return degrees.pop()
        return 0 if not degrees else None

    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree() is not None

    def is_even(self) -> bool:
        return all(monomial_degree(m) % 2 == 0 for m in self._terms)

    def filter_terms(self, predicate: Callable[[Monomial], bool]) -> "GrassmannElement":
        """Оставить только мономы, удовлетворяющие условию на битовую маску."""
        return GrassmannElement._trusted(
            self._table, {m: c for m, c in self._terms.items() if predicate(m)}
        )

    def coefficient_of(self, monomial: Union[Monomial, Iterable[GeneratorRef]]) -> Any:
        """
        Коэффициент при мономе.

        Args:
            monomial: битовая маска или последовательность генераторов
                (в каноничном порядке таблицы)

        Returns:
            Хранимый коэффициент или ноль поля.
        """
        if not isinstance(monomial, numbers.Integral):
            monomial = self._table.monomial(monomial)
        return self._terms.get(int(monomial), self.field.zero)

    def complex_coefficient(self, monomial: Union[Monomial, Iterable[GeneratorRef]]) -> complex:
        return self.field.to_complex(self.coefficient_of(monomial))

    def max_abs_coefficient(self) -> float:
        magnitude = self.field.magnitude
        return max((magnitude(c) for c in self._terms.values()), default=0.0)

    # --- арифметика ------------------------------------------------------

    def _coerce(self, other: Any) -> Optional["GrassmannElement"]:
        if isinstance(other, GrassmannElement):
            if other._table is not self._table and other._table != self._table:
                if other._table.names == self._table.names and other._table.mode != self._table.mode:
                    raise CoefficientModeError("Смешение точного и плавающего режимов коэффициентов")
                raise TableMismatchError("Операнды построены на разных таблицах генераторов")
            return other
        try:
            return self._table.scalar(other)
        except (TypeError, ValueError):
            return None

    def __add__(self, other: Any) -> "GrassmannElement":
        other_element = self._coerce(other)
        if other_element is None:
            return NotImplemented
        terms = dict(self._terms)
        for mono, coeff in other_element._terms.items():
            terms[mono] = terms[mono] + coeff if mono in terms else coeff
        return GrassmannElement._pruned(self._table, terms)

    __radd__ = __add__

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement._trusted(self._table, {m: -c for m, c in self._terms.items()})

    def __pos__(self) -> "GrassmannElement":
        return self

    def __sub__(self, other: Any) -> "GrassmannElement":
        other_element = self._coerce(other)
        if other_element is None:
            return NotImplemented
        return self + (-other_element)

    def __rsub__(self, other: Any) -> "GrassmannElement":
        other_element = self._coerce(other)
        if other_element is None:
            return NotImplemented
        return other_element + (-self)

    def __mul__(self, other: Any) -> "GrassmannElement":
        other_element = self._coerce(other)
        if other_element is None:
            return NotImplemented
        table = self._table
        result: Dict[Monomial, Any] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other_element._terms.items():
                if ma & mb:
                    continue
                product = ca * cb
                if merge_sign(ma, mb) < 0:
                    product = -product
                key = ma | mb
                result[key] = result[key] + product if key in result else product
        return GrassmannElement._pruned(table, result)

    def __rmul__(self, other: Any) -> "GrassmannElement":
        # скаляр слева коммутирует со всеми мономами
        other_element = self._coerce(other)
        if other_element is None:
            return NotImplemented
        return other_element * self

    def __truediv__(self, other: Any) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            return NotImplemented
        scale = self.field.divide(self.field.one, other)
        return GrassmannElement._pruned(self._table, {m: c * scale for m, c in self._terms.items()})

    def __pow__(self, exponent: int) -> "GrassmannElement":
        if not isinstance(exponent, numbers.Integral) or exponent < 0:
            raise ValueError("Показатель степени должен быть неотрицательным целым")
        result = self._table.one()
        for _ in range(int(exponent)):
            result = result * self
            if result.is_zero():
                break
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GrassmannElement):
            if other._table != self._table:
                return False
            return self._terms == other._terms
        try:
            other_element = self._coerce(other)
        except TableMismatchError:
            return False
        if other_element is None:
            return NotImplemented
        return self._terms == other_element._terms

    __hash__ = None  # type: ignore[assignment]

    def is_close(self, other: Any, tolerance: float = 1e-12) -> bool:
        difference = self - other
        return difference.max_abs_coefficient() <= tolerance

    # --- производные и интегралы ------------------------------------------

    def left_derivative(self, generator: GeneratorRef) -> "GrassmannElement":
        """
        Левая производная ∂/∂g.

        Args:
            generator: имя или индекс генератора

        Returns:
            Элемент, в котором g перенесён в начало каждого монома и удалён.
        """
        index = self._table.index(generator)
        bit = 1 << index
        below = bit - 1
        result: Dict[Monomial, Any] = {}
        for mono, coeff in self._terms.items():
            if not mono & bit:
                continue
            if monomial_degree(mono & below) % 2:
                coeff = -coeff
            result[mono ^ bit] = coeff
        return GrassmannElement._trusted(self._table, result)

    def berezin_integrate(self, generators: Sequence[GeneratorRef]) -> "GrassmannElement":
        return berezin_integrate(self, generators)

    # --- функции от элементов --------------------------------------------

    def conjugate(self) -> "GrassmannElement":
        conjugate = self.field.conjugate
        return GrassmannElement._trusted(self._table, {m: conjugate(c) for m, c in self._terms.items()})

    def _inverse_factorial(self, k: int) -> Any:
        return self.field.convert(Fraction(1, math.factorial(k)))

    def exp(self) -> "GrassmannElement":
        """Экспонента через конечный нильпотентный ряд."""
        field = self.field
        body = self.body()
        soul = self.soul()
        if self._table.mode is CoefficientMode.EXACT:
            if not field.is_zero(body):
                raise ValueError("В точном режиме экспонента определена только для элемента с нулевым телом")
            prefactor = field.one
        else:
            prefactor = cmath.exp(body)

        total = self._table.one()
        power = self._table.one()
        k = 0
        while True:
            power = power * soul
            k += 1
            if power.is_zero():
                break
            total = total + power * self._inverse_factorial(k)
        return total * prefactor

    def compose(self, derivatives: Sequence[Any]) -> "GrassmannElement":
        """
        Аналитическая функция от элемента: f(b + s) = Σ f⁽ᵏ⁾(b) sᵏ / k!.

        Args:
            derivatives: значения f, f', f'', ... в точке тела элемента

        Returns:
            Элемент f(self).
        """
        if not derivatives:
            raise MissingDerivativeError("Не переданы производные функции")
        soul = self.soul()
        total = self._table.scalar(derivatives[0])
        power = self._table.one()
        k = 0
        while True:
            power = power * soul
            k += 1
            if power.is_zero():
                break
            if k >= len(derivatives):
                raise MissingDerivativeError(
                    f"Ряд Тейлора требует производную порядка {k}, передано {len(derivatives)}"
                )
            total = total + power * (self.field.convert(derivatives[k]) * self._inverse_factorial(k))
        return total

    def relabel(
        self,
        target: GeneratorTable,
        mapping: Optional[Mapping[str, str]] = None,
    ) -> "GrassmannElement":
        """
        Перенести элемент на другую таблицу.

        Args:
            target: целевая таблица
            mapping: имя в исходной таблице → имя в целевой (по умолчанию то же имя)

        Returns:
            Элемент на целевой таблице; знак учитывает смену порядка генераторов.
        """
        mapping = mapping or {}
        source_names = self._table.names
        convert = target.field.convert
        to_complex = self.field.to_complex
        same_mode = target.mode is self._table.mode
        result: Dict[Monomial, Any] = {}
        for mono, coeff in self._terms.items():
            indices = [target.index(mapping.get(source_names[i], source_names[i])) for i in monomial_indices(mono)]
            new_mono = monomial_from_indices(indices)
            value = coeff if same_mode else convert(to_complex(coeff))
            if _permutation_sign(indices) < 0:
                value = -value
            result[new_mono] = result[new_mono] + value if new_mono in result else value
        return GrassmannElement._pruned(target, result)

    # --- сериализация ----------------------------------------------------

    def to_dict(self) -> dict:
        terms = []
        for mono in sorted(self._terms):
            re, im = self.field.to_json(self._terms[mono])
            terms.append({"mono": list(monomial_indices(mono)), "re": re, "im": im})
        return {
            "generators": list(self._table.names),
            "roles": [role.value for role in self._table.roles],
            "mode": self._table.mode.value,
            "terms": terms,
        }

    @classmethod
    def from_dict(cls, data: dict, table: Optional[GeneratorTable] = None) -> "GrassmannElement":
        """
        Восстановить элемент из JSON-словаря.

        Args:
            data: словарь формата to_dict
            table: таблица для элемента; если не задана, строится из словаря

        Returns:
            Элемент алгебры.
        """
        if not isinstance(data, dict):
            raise SerializationError("Ожидался JSON-объект")
        names = data.get("generators")
        if not isinstance(names, list) or not names:
            raise SerializationError("Отсутствует список generators")
        if table is None:
            roles = data.get("roles") or [_infer_role(str(name)).value for name in names]
            if len(roles) != len(names):
                raise SerializationError("Длины generators и roles не совпадают")
            mode = data.get("mode", CoefficientMode.EXACT.value)
            try:
                table = GeneratorTable(list(zip(names, roles)), mode=mode)
            except ValueError as exc:
                raise SerializationError(f"Некорректная таблица генераторов: {exc}") from exc
        elif list(table.names) != [str(name) for name in names]:
            raise SerializationError("Генераторы документа не совпадают с таблицей")

        terms: Dict[Monomial, Any] = {}
        for entry in data.get("terms", []):
            try:
                indices = [int(i) for i in entry["mono"]]
                re, im = entry.get("re", 0), entry.get("im", 0)
            except (KeyError, TypeError, ValueError) as exc:
                raise SerializationError(f"Некорректный терм: {entry!r}") from exc
            if any(b <= a for a, b in zip(indices, indices[1:])):
                raise SerializationError(f"Индексы монома не в каноничном порядке: {indices}")
            if any(i < 0 or i >= len(table) for i in indices):
                raise SerializationError(f"Индекс монома вне таблицы: {indices}")
            mono = monomial_from_indices(indices)
            if mono in terms:
                raise SerializationError(f"Моном повторяется: {indices}")
            try:
                terms[mono] = table.field.from_json(re, im)
            except ValueError as exc:
                raise SerializationError(str(exc)) from exc
        return cls(table, terms)

    # --- представление ---------------------------------------------------

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=lambda m: (monomial_degree(m), m)):
            coeff = self.field.to_complex(self._terms[mono])
            text = f"{coeff.real:g}" if coeff.imag == 0 else f"({coeff.real:g}{coeff.imag:+g}i)"
            if mono:
                text += "·" + "".join(self._table.monomial_names(mono))
            parts.append(text)
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Свободные функции
# ---------------------------------------------------------------------------

def mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def left_derivative(e: GrassmannElement, generator: GeneratorRef) -> GrassmannElement:
    return e.left_derivative(generator)


def coefficient_of(e: GrassmannElement, monomial: Union[Monomial, Iterable[GeneratorRef]]) -> Any:
    return e.coefficient_of(monomial)


def berezin_integrate(e: GrassmannElement, generators: Sequence[GeneratorRef]) -> GrassmannElement:
    """
    Итерированный интеграл Березина ∫dg₁…dgₖ e.

    Args:
        e: подынтегральный элемент
        generators: генераторы меры; последний из них интегрируется первым

    Returns:
        Элемент без перечисленных генераторов.
    """
    result = e
    for generator in reversed(list(generators)):
        result = result.left_derivative(generator)
    return result


def berezin_measure(e: GrassmannElement) -> GrassmannElement:
    """Составная мера i∫dθ dθ̄, нормированная условием ∫ i dθ dθ̄ (iθθ̄) = 1."""
    table = e.table
    theta = table.name_with_role(GeneratorRole.THETA)
    thetabar = table.name_with_role(GeneratorRole.THETABAR)
    return berezin_integrate(e, [theta, thetabar]) * table.field.imag_unit


def delta_pair(table: GeneratorTable) -> GrassmannElement:
    """Элемент D = δ(θ)δ(θ̄) с нормировкой ∫dθ dθ̄ D = 1, то есть D = θ̄θ."""
    theta = table.name_with_role(GeneratorRole.THETA)
    thetabar = table.name_with_role(GeneratorRole.THETABAR)
    return table.generator(thetabar) * table.generator(theta)


def berezin_sign_table(mode: Union[CoefficientMode, str] = CoefficientMode.EXACT) -> Dict[str, complex]:
    """
    Таблица знаков принятого соглашения для θ, θ̄.

    Returns:
        Словарь «выражение → значение».
    """
    table = create_algebra([("θ", GeneratorRole.THETA), ("θ̄", GeneratorRole.THETABAR)], mode=mode)
    theta, thetabar = table.generator("θ"), table.generator("θ̄")
    i = table.field.imag_unit

    def value(element: GrassmannElement) -> complex:
        return element.field.to_complex(element.body())

    return {
        "∫dθ θ": value(berezin_integrate(theta, ["θ"])),
        "∫dθ dθ̄ θθ̄": value(berezin_integrate(theta * thetabar, ["θ", "θ̄"])),
        "∫dθ̄ dθ θθ̄": value(berezin_integrate(theta * thetabar, ["θ̄", "θ"])),
        "∫ i dθ dθ̄ (iθθ̄)": value(berezin_measure(theta * thetabar * i)),
        "∫dθ dθ̄ δ(θ)δ(θ̄)": value(berezin_integrate(delta_pair(table), ["θ", "θ̄"])),
    }


__all__ = [
    "DEFAULT_CAPACITY",
    "Monomial",
    "GeneratorRole",
    "GeneratorTable",
    "GrassmannElement",
    "create_algebra",
    "mul",
    "left_derivative",
    "coefficient_of",
    "berezin_integrate",
    "berezin_measure",
    "delta_pair",
    "berezin_sign_table",
    "merge_sign",
    "monomial_degree",
    "monomial_indices",
    "monomial_from_indices",
]
