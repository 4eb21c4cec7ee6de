"""
Суперполевое исчисление на временной решётке.

Разложение функций суперполя по θ, θ̄, решёточное супердействие, редукция
Березина к весу классического интеграла по путям, поверхностный член и
проектор квантования.

Соглашение о знаке: i∫dθ dθ̄ S_lat[Φ] = S̃_lat + σ·(s.t.) с σ = −1 для обеих
кинетических форм (``pq`` и ``symmetric``).
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from ..algebra.coefficients import CoefficientMode
from ..algebra.grassmann import (
    DEFAULT_CAPACITY,
    GeneratorRole,
    GeneratorTable,
    GrassmannElement,
    berezin_measure,
    create_algebra,
    delta_pair,
)
from ..errors import DimensionMismatchError, UnknownGeneratorError
from ..models.hamiltonian import HamiltonianModel
from ..models.superspace import (
    LatticePath,
    LatticeSlice,
    SuperActionComponents,
    SuperField,
    SymplecticForm,
    ghost_names,
)

logger = logging.getLogger(__name__)

SURFACE_TERM_SIGN = -1

KINETIC_FORMS = ("pq", "symmetric")

# поляризация поверхностного члена, которую порождает каждая кинетическая форма
KINETIC_POLARIZATION = {"pq": "q", "symmetric": "symmetric"}

AUXILIARY_PAIR = ("η", "η̄")


def _is_zero(value: Any) -> bool:
    if isinstance(value, GrassmannElement):
        return value.is_zero()
    return value == 0


def _lift(table: GeneratorTable, value: Any) -> GrassmannElement:
    if isinstance(value, GrassmannElement):
        return value
    return table.scalar(value)


def _check_kinetic(kinetic: str) -> str:
    if kinetic not in KINETIC_FORMS:
        raise ValueError(f"Неизвестная кинетическая форма {kinetic!r}; доступны: {', '.join(KINETIC_FORMS)}")
    return kinetic


def _theta_names(table: GeneratorTable):
    try:
        return table.name_with_role(GeneratorRole.THETA), table.name_with_role(GeneratorRole.THETABAR)
    except UnknownGeneratorError as exc:
        raise UnknownGeneratorError(f"В таблице нет пары θ, θ̄: {exc}") from exc


# ---------------------------------------------------------------------------
# Таблицы и пути
# ---------------------------------------------------------------------------

def superfield_table(
    n: int = 1,
    mode: CoefficientMode = CoefficientMode.EXACT,
    auxiliary: bool = False,
) -> GeneratorTable:
    """Таблица одного слоя: θ, θ̄, c^a, c̄_a (и при необходимости пара η, η̄)."""
    c, cbar = ghost_names(n)
    names = [("θ", GeneratorRole.THETA), ("θ̄", GeneratorRole.THETABAR)]
    names += [(name, GeneratorRole.GHOST_C) for name in c]
    names += [(name, GeneratorRole.GHOST_CBAR) for name in cbar]
    if auxiliary:
        names += [(name, GeneratorRole.AUXILIARY) for name in AUXILIARY_PAIR]
    return create_algebra(names, mode=mode)


def lattice_table(
    n: int,
    N: int,
    mode: CoefficientMode = CoefficientMode.EXACT,
    auxiliary: bool = False,
) -> GeneratorTable:
    """
    Общая таблица решётки: θ, θ̄ и независимые духи каждого слоя k = 0..N.

    Ёмкость расширяется сверх 64, если генераторов больше.
    """
    if N < 1:
        raise DimensionMismatchError("Число интервалов решётки должно быть не меньше 1")
    names = [("θ", GeneratorRole.THETA), ("θ̄", GeneratorRole.THETABAR)]
    for k in range(N + 1):
        c, cbar = ghost_names(n, label=str(k))
        names += [(name, GeneratorRole.GHOST_C) for name in c]
        names += [(name, GeneratorRole.GHOST_CBAR) for name in cbar]
    if auxiliary:
        names += [(name, GeneratorRole.AUXILIARY) for name in AUXILIARY_PAIR]
    return create_algebra(names, mode=mode, capacity=max(DEFAULT_CAPACITY, len(names)))


def build_superfield(
    phi: Sequence[Any],
    c: Sequence[str],
    cbar: Sequence[str],
    lam: Sequence[Any],
    omega: SymplecticForm,
    table: GeneratorTable,
) -> SuperField:
    """
    Собрать суперполе Φ^a = φ^a + θc^a + θ̄ω^{ab}c̄_b + iθ̄θ ω^{ab}λ_b.

    Args:
        phi: базовые компоненты φ^a
        c: имена генераторов c^a
        cbar: имена генераторов c̄_a
        lam: вспомогательные импульсы λ_a
        omega: симплектическая форма
        table: таблица генераторов, содержащая θ, θ̄ и духи

    Returns:
        Суперполе.
    """
    _theta_names(table)
    return SuperField(table, omega, tuple(phi), tuple(c), tuple(cbar), tuple(lam))


def build_lattice_path(
    phi_rows: Sequence[Sequence[Any]],
    lam_rows: Sequence[Sequence[Any]],
    dt: Any,
    mode: CoefficientMode = CoefficientMode.EXACT,
    auxiliary: bool = False,
    table: Optional[GeneratorTable] = None,
) -> LatticePath:
    """
    Построить решёточный путь из значений φ_k и λ_k (k = 0..N).

    Духи каждого слоя берутся из общей таблицы ``lattice_table``.
    """
    if len(phi_rows) != len(lam_rows):
        raise DimensionMismatchError("Число слоёв φ и λ не совпадает")
    if len(phi_rows) < 2:
        raise DimensionMismatchError("Путь должен содержать хотя бы один интервал (N ≥ 1)")
    dim = len(phi_rows[0])
    if dim % 2:
        raise DimensionMismatchError("Размерность фазового пространства должна быть чётной")
    n = dim // 2
    N = len(phi_rows) - 1
    if table is None:
        table = lattice_table(n, N, mode=mode, auxiliary=auxiliary)
    slices = []
    for k, (phi, lam) in enumerate(zip(phi_rows, lam_rows)):
        c, cbar = ghost_names(n, label=str(k))
        slices.append(LatticeSlice(list(phi), list(lam), c, cbar))
    return LatticePath(table, SymplecticForm.standard(n), dt, slices)


def _random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))


def random_lattice_path(
    n: int,
    N: int,
    rng: np.random.Generator,
    dt: Any = Fraction(1, 10),
    auxiliary: bool = False,
) -> LatticePath:
    """Путь с независимыми случайными рациональными φ_k, λ_k (точный режим)."""
    dim = 2 * n
    phi_rows = [[_random_rational(rng) for _ in range(dim)] for _ in range(N + 1)]
    lam_rows = [[_random_rational(rng) for _ in range(dim)] for _ in range(N + 1)]
    return build_lattice_path(phi_rows, lam_rows, dt, mode=CoefficientMode.EXACT, auxiliary=auxiliary)


# ---------------------------------------------------------------------------
# Разложение по θ, θ̄
# ---------------------------------------------------------------------------

def decompose(element: GrassmannElement) -> SuperActionComponents:
    """
    Разложить F = base + θ·theta + θ̄·thetabar + θθ̄·top.

    Args:
        element: элемент над таблицей с θ и θ̄

    Returns:
        Четыре компоненты, не содержащие θ и θ̄.
    """
    table = element.table
    theta, thetabar = _theta_names(table)
    bit_t = 1 << table.index(theta)
    bit_tb = 1 << table.index(thetabar)
    no_thetabar = element.filter_terms(lambda m: not m & bit_tb)
    no_theta = element.filter_terms(lambda m: not m & bit_t)
    return SuperActionComponents(
        table=table,
        base=no_thetabar.filter_terms(lambda m: not m & bit_t),
        theta=no_thetabar.left_derivative(theta),
        thetabar=no_theta.left_derivative(thetabar),
        top=element.left_derivative(theta).left_derivative(thetabar),
    )


def tilde_hamiltonian(
    model: HamiltonianModel,
    phi: Sequence[Any],
    lam: Sequence[Any],
    c: Optional[Sequence[Any]] = None,
    cbar: Optional[Sequence[Any]] = None,
) -> Any:
    """
    H̃ = λ_a ω^{ab} ∂_bH + i c̄_a ω^{ac} ∂_c∂_bH c^b.

    Args:
        model: гамильтониан
        phi: точка φ (числа или элементы)
        lam: λ_a
        c: духи c^a (элементы); ``None`` отключает духовую часть
        cbar: духи c̄_a (элементы)

    Returns:
        Грассманов элемент или число, если духи не заданы.
    """
    omega = SymplecticForm.standard(model.n)
    if len(phi) != omega.dim or len(lam) != omega.dim:
        raise DimensionMismatchError(f"Ожидались φ и λ длины {omega.dim}")
    grad = model.gradient_terms(phi)
    flow = omega.apply(grad)
    result: Any = 0
    for a in range(omega.dim):
        if not (_is_zero(lam[a]) or _is_zero(flow[a])):
            result = result + lam[a] * flow[a]
    if c is None or cbar is None:
        return result

    if len(c) != omega.dim or len(cbar) != omega.dim:
        raise DimensionMismatchError(f"Ожидались духи длины {omega.dim}")
    hess = model.hessian_terms(phi)
    ghost: Any = 0
    for a in range(omega.dim):
        partner, sign = omega.partner(a)
        for b in range(omega.dim):
            weight = hess[partner][b]
            if _is_zero(weight):
                continue
            term = cbar[a] * c[b] * weight
            ghost = ghost + term if sign > 0 else ghost - term
    if _is_zero(ghost):
        return result
    return ghost * ghost.table.field.imag_unit + result


def expand_function(model: HamiltonianModel, superfield: SuperField) -> SuperActionComponents:
    """
    Компоненты H(Φ) по производным H в точке φ.

    base = H(φ), theta = ∂_aH c^a, thetabar = ∂_aH ω^{ab} c̄_b, top = iH̃.
    Члены порядка ≥ 3 по ΔΦ тождественно обращаются в нуль.
    """
    table = superfield.table
    phi = list(superfield.phi)
    grad = model.gradient_terms(phi)
    c = superfield.c_elements()
    cbar = superfield.cbar_elements()
    omega_cbar = superfield.omega.apply(cbar)

    theta_part = table.zero()
    thetabar_part = table.zero()
    for a in range(superfield.omega.dim):
        if _is_zero(grad[a]):
            continue
        theta_part = theta_part + c[a] * grad[a]
        thetabar_part = thetabar_part + omega_cbar[a] * grad[a]
    top = _lift(table, tilde_hamiltonian(model, phi, list(superfield.lam), c, cbar)) * table.field.imag_unit
    return SuperActionComponents(
        table=table,
        base=_lift(table, model.energy(phi)),
        theta=theta_part,
        thetabar=thetabar_part,
        top=top,
    )


def substitute(model: HamiltonianModel, superfield: SuperField) -> GrassmannElement:
    """H(Φ) прямой подстановкой суперполя в энергию модели."""
    return _lift(superfield.table, model.energy(superfield.assemble()))


def taylor_remainder(model: HamiltonianModel, superfield: SuperField) -> GrassmannElement:
    """Член третьего порядка (1/6)∂_a∂_b∂_cH δ^aδ^bδ^c, δ = Φ − φ."""
    table = superfield.table
    deltas = [component.soul() for component in superfield.assemble()]
    third = model.third_terms(list(superfield.phi))
    total = table.zero()
    dim = superfield.omega.dim
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                if _is_zero(third[a][b][c]):
                    continue
                total = total + deltas[a] * deltas[b] * deltas[c] * third[a][b][c]
    return total / 6


def expansion_residual(model: HamiltonianModel, superfield: SuperField) -> GrassmannElement:
    """Разность прямой подстановки и пересобранных компонент разложения."""
    return substitute(model, superfield) - expand_function(model, superfield).recombine()


# ---------------------------------------------------------------------------
# Решёточные действия
# ---------------------------------------------------------------------------

def lattice_superaction(model: HamiltonianModel, path: LatticePath, kinetic: str = "pq") -> GrassmannElement:
    """
    S_lat[Φ] = Σ_k [K_k − H(Φ_k) dt].

    ``pq``: K_k = Φ^p_k(Φ^q_{k+1} − Φ^q_k);
    ``symmetric``: K_k = ½(Φ^p_kΔΦ^q_k − Φ^q_kΔΦ^p_k).
    """
    _check_kinetic(kinetic)
    table = path.table
    n = path.n
    fields = [path.superfield(k).assemble() for k in range(path.N + 1)]
    total = table.zero()
    for k in range(path.N):
        current, following = fields[k], fields[k + 1]
        for i in range(n):
            q_now, p_now = current[i], current[n + i]
            dq = following[i] - q_now
            if kinetic == "pq":
                total = total + p_now * dq
            else:
                dp = following[n + i] - p_now
                total = total + (p_now * dq - q_now * dp) / 2
        total = total - _lift(table, model.energy(current)) * path.dt
    logger.debug("Супердействие: N=%d, %d термов", path.N, len(total))
    return total


def lattice_base_action(model: HamiltonianModel, path: LatticePath, kinetic: str = "pq") -> Any:
    """Обычное решёточное действие S_lat[φ] на базовых компонентах."""
    _check_kinetic(kinetic)
    n = path.n
    total: Any = 0
    for k in range(path.N):
        current, following = path.slices[k].phi, path.slices[k + 1].phi
        for i in range(n):
            dq = following[i] - current[i]
            if kinetic == "pq":
                total = total + current[n + i] * dq
            else:
                dp = following[n + i] - current[n + i]
                total = total + (current[n + i] * dq - current[i] * dp) / 2
        total = total - model.energy(current) * path.dt
    return total


def lattice_tilde_action(model: HamiltonianModel, path: LatticePath, kinetic: str = "pq") -> GrassmannElement:
    """
    Независимая запись S̃_lat = Σ_k [λ·Δφ + i c̄·Δc − H̃_k dt].

    ``pq``: q-компоненты λ и c̄ берутся в слое k, p-компоненты в слое k+1;
    ``symmetric``: λ и c̄ усредняются по концам интервала.
    """
    _check_kinetic(kinetic)
    table = path.table
    n = path.n
    dim = 2 * n
    imag = table.field.imag_unit
    total = table.zero()
    for k in range(path.N):
        now, nxt = path.slices[k], path.slices[k + 1]
        c_now, c_next = table.generators(now.c), table.generators(nxt.c)
        cbar_now, cbar_next = table.generators(now.cbar), table.generators(nxt.cbar)
        for a in range(dim):
            dphi = nxt.phi[a] - now.phi[a]
            dc = c_next[a] - c_now[a]
            if kinetic == "pq":
                take_next = a >= n
                lam = nxt.lam[a] if take_next else now.lam[a]
                cbar = cbar_next[a] if take_next else cbar_now[a]
            else:
                lam = (now.lam[a] + nxt.lam[a]) / 2
                cbar = (cbar_now[a] + cbar_next[a]) / 2
            total = total + _lift(table, lam * dphi) + cbar * dc * imag
        h_tilde = tilde_hamiltonian(model, now.phi, now.lam, c_now, cbar_now)
        total = total - _lift(table, h_tilde) * path.dt
    return total


def surface_term(
    initial: LatticeSlice,
    final: LatticeSlice,
    table: GeneratorTable,
    polarization: str = "symmetric",
) -> GrassmannElement:
    """
    Поверхностный член (s.t.) = F(t_f) − F(t_i).

    ``symmetric``: F = ½(λ_aφ^a + i c̄_a c^a);
    ``q``: F = λ_{p}p + i c̄_{p}c^{p} (сумма по импульсным индексам).

    Args:
        initial: граничный слой t_i
        final: граничный слой t_f
        table: таблица духов
        polarization: ``symmetric`` или ``q``

    Returns:
        Элемент таблицы.
    """
    if polarization not in ("symmetric", "q"):
        raise ValueError(f"Неизвестная поляризация {polarization!r}")
    if len(initial.phi) != len(final.phi):
        raise DimensionMismatchError("Граничные слои разной размерности")
    dim = len(final.phi)
    n = dim // 2
    imag = table.field.imag_unit
    indices = range(dim) if polarization == "symmetric" else range(n, dim)

    def bracket(item: LatticeSlice) -> GrassmannElement:
        value = table.zero()
        for a in indices:
            value = value + _lift(table, item.lam[a] * item.phi[a])
            value = value + table.generator(item.cbar[a]) * table.generator(item.c[a]) * imag
        return value / 2 if polarization == "symmetric" else value

    return bracket(final) - bracket(initial)


def berezin_reduce(superaction: GrassmannElement) -> GrassmannElement:
    """
    Редукция i∫dθ dθ̄ S[Φ]: возвращает S̃ + σ·(s.t.), элемент без θ и θ̄.

    Raises:
        UnknownGeneratorError: в таблице нет θ или θ̄.
    """
    _theta_names(superaction.table)
    return berezin_measure(superaction)


def quantize_projector(superaction: GrassmannElement, hbar: Any) -> GrassmannElement:
    """
    Вставка −(i/ħ)δ(θ)δ(θ̄) под мерой i∫dθ dθ̄.

    Args:
        superaction: элемент над θ, θ̄ и духами
        hbar: постоянная Планка, ħ > 0

    Returns:
        Чистое тело S[φ]/ħ; все θ, θ̄ и духовые вклады аннулируются.
    """
    if not hbar > 0:
        raise ValueError(f"ħ должна быть положительной, получено {hbar!r}")
    table = superaction.table
    _theta_names(table)
    field = table.field
    weight = field.divide(-field.imag_unit, hbar)
    inserted = delta_pair(table) * superaction * weight
    projected = berezin_measure(inserted)
    return projected.filter_terms(lambda m: m == 0)


def reduction_residual(model: HamiltonianModel, path: LatticePath, kinetic: str = "pq") -> GrassmannElement:
    """berezin_reduce(S_lat) − σ·(s.t.) − S̃_lat; тождественно нулевой элемент."""
    reduced = berezin_reduce(lattice_superaction(model, path, kinetic))
    st = surface_term(path.slices[0], path.slices[-1], path.table, KINETIC_POLARIZATION[kinetic])
    return reduced - st * SURFACE_TERM_SIGN - lattice_tilde_action(model, path, kinetic)


def projector_residual(model: HamiltonianModel, path: LatticePath, hbar: Any, kinetic: str = "pq") -> GrassmannElement:
    projected = quantize_projector(lattice_superaction(model, path, kinetic), hbar)
    expected = path.table.scalar(lattice_base_action(model, path, kinetic)) / hbar
    return projected - expected


# ---------------------------------------------------------------------------
# Уравнения Эйлера–Лагранжа на решётке
# ---------------------------------------------------------------------------

def _interior(path: LatticePath, k: int) -> None:
    if not 0 < k < path.N:
        raise ValueError(f"Вариация берётся во внутреннем слое 0 < k < N, получено k={k}")


def ghost_variation(model: HamiltonianModel, path: LatticePath, a: int, k: int, kinetic: str = "pq") -> GrassmannElement:
    """∂S̃_lat/∂c̄_{a,k} (левая производная)."""
    _interior(path, k)
    return lattice_tilde_action(model, path, kinetic).left_derivative(path.slices[k].cbar[a])


def expected_ghost_equation(
    model: HamiltonianModel, path: LatticePath, a: int, k: int, kinetic: str = "pq"
) -> GrassmannElement:
    """Дискретное уравнение Якоби i[Δc^a − dt(ω∂∂H c)^a] в слое k."""
    _interior(path, k)
    table = path.table
    omega = path.omega
    n = path.n
    c = [table.generators(item.c) for item in path.slices]
    if kinetic == "symmetric":
        difference = (c[k + 1][a] - c[k - 1][a]) / 2
    elif a < n:
        difference = c[k + 1][a] - c[k][a]
    else:
        difference = c[k][a] - c[k - 1][a]
    hess = model.hessian_terms(path.slices[k].phi)
    partner, sign = omega.partner(a)
    drift = table.zero()
    for b in range(omega.dim):
        if not _is_zero(hess[partner][b]):
            drift = drift + c[k][b] * (hess[partner][b] * sign)
    return (difference - drift * path.dt) * table.field.imag_unit


def bosonic_variation(
    model: HamiltonianModel, path: LatticePath, kind: str, a: int, k: int, kinetic: str = "pq"
) -> GrassmannElement:
    """
    ∂S̃_lat/∂φ^a_k или ∂S̃_lat/∂λ_{a,k} через чётный нильпотентный сдвиг ε = ηη̄.

    Требует пары η, η̄ в таблице пути.
    """
    _interior(path, k)
    table = path.table
    eta, eta_bar = AUXILIARY_PAIR
    epsilon = table.generator(eta) * table.generator(eta_bar)
    shifted = path.with_shift(kind, k, a, epsilon)
    action = lattice_tilde_action(model, shifted, kinetic)
    return action.left_derivative(eta).left_derivative(eta_bar)


def expected_bosonic_equation(
    model: HamiltonianModel, path: LatticePath, kind: str, a: int, k: int, kinetic: str = "pq"
) -> GrassmannElement:
    """
    Ожидаемая форма вариации.

    λ-вариация: Δφ^a − dt(ω∇H)^a.
    φ-вариация: −Δλ_a − dt[λ_b(ω∂∂H)^b_a + i c̄_b(ω∂∂∂H)^b_{da} c^d].
    """
    _interior(path, k)
    table = path.table
    omega = path.omega
    n = path.n
    dim = omega.dim
    now = path.slices[k]
    phi = [item.phi for item in path.slices]
    lam = [item.lam for item in path.slices]

    if kind == "lam":
        if kinetic == "symmetric":
            difference = Fraction(1, 2) * (phi[k + 1][a] - phi[k - 1][a])
        elif a < n:
            difference = phi[k + 1][a] - phi[k][a]
        else:
            difference = phi[k][a] - phi[k - 1][a]
        flow = omega.apply(model.gradient_terms(now.phi))[a]
        return table.scalar(difference - flow * path.dt)

    if kind != "phi":
        raise ValueError(f"Неизвестная переменная вариации: {kind!r}")
    if kinetic == "symmetric":
        difference = Fraction(1, 2) * (lam[k + 1][a] - lam[k - 1][a])
    elif a < n:
        difference = lam[k][a] - lam[k - 1][a]
    else:
        difference = lam[k + 1][a] - lam[k][a]

    hess = model.hessian_terms(now.phi)
    third = model.third_terms(now.phi)
    c = table.generators(now.c)
    cbar = table.generators(now.cbar)
    force = table.zero()
    source = table.zero()
    for b in range(dim):
        partner, sign = omega.partner(b)
        if not _is_zero(hess[partner][a]) and not _is_zero(now.lam[b]):
            force = force + table.scalar(now.lam[b] * hess[partner][a] * sign)
        for d in range(dim):
            weight = third[partner][d][a]
            if _is_zero(weight):
                continue
            source = source + cbar[b] * c[d] * (weight * sign)
    derivative = force + source * table.field.imag_unit
    return table.scalar(-difference) - derivative * path.dt


__all__ = [
    "SURFACE_TERM_SIGN",
    "KINETIC_FORMS",
    "KINETIC_POLARIZATION",
    "superfield_table",
    "lattice_table",
    "build_superfield",
    "build_lattice_path",
    "random_lattice_path",
    "decompose",
    "tilde_hamiltonian",
    "expand_function",
    "substitute",
    "taylor_remainder",
    "expansion_residual",
    "lattice_superaction",
    "lattice_base_action",
    "lattice_tilde_action",
    "surface_term",
    "berezin_reduce",
    "quantize_projector",
    "reduction_residual",
    "projector_residual",
    "ghost_variation",
    "expected_ghost_equation",
    "bosonic_variation",
    "expected_bosonic_equation",
]
