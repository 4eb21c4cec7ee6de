"""
Численная классическая механика в расширенном пространстве (φ, λ, J, J̄).

Для сепарабельных гамильтонианов используется симметричная композиция
Йошиды четвёртого порядка из шагов «толчок–дрейф–толчок»; касательные
матрицы переносятся точными унипотентными отображениями подшагов, так что
det J = 1 и J̄ᵀJ = I выполняются с точностью округления. Для
несепарабельных гамильтонианов используется классический RK4.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import IntegrationError, InvariantViolationError, UnsupportedModelError
from ..models.hamiltonian import HamiltonianModel
from ..models.phase_space import (
    EnsembleResult,
    ExtendedState,
    LyapunovResult,
    PropagatorRecord,
    Trajectory,
)

logger = logging.getLogger(__name__)

INTEGRATORS = ("auto", "yoshida4", "leapfrog", "rk4")
LAMBDA_MODES = ("homogeneous", "sourced")

_CBRT2 = 2.0 ** (1.0 / 3.0)
YOSHIDA_W1 = 1.0 / (2.0 - _CBRT2)
YOSHIDA_W0 = -_CBRT2 / (2.0 - _CBRT2)

KICK, DRIFT = "kick", "drift"

# три шага KDK с весами w1, w0, w1; соседние толчки слиты
YOSHIDA_SEQUENCE: Tuple[Tuple[str, float], ...] = (
    (KICK, YOSHIDA_W1 / 2),
    (DRIFT, YOSHIDA_W1),
    (KICK, (YOSHIDA_W1 + YOSHIDA_W0) / 2),
    (DRIFT, YOSHIDA_W0),
    (KICK, (YOSHIDA_W0 + YOSHIDA_W1) / 2),
    (DRIFT, YOSHIDA_W1),
    (KICK, YOSHIDA_W1 / 2),
)

LEAPFROG_SEQUENCE: Tuple[Tuple[str, float], ...] = ((KICK, 0.5), (DRIFT, 1.0), (KICK, 0.5))


@dataclass(frozen=True)
class IntegratorOptions:
    """
    Параметры интегрирования.

    Attributes:
        integrator: ``auto``, ``yoshida4``, ``leapfrog`` или ``rk4``
        dt: максимальный шаг; фактический шаг делит промежуток нацело
        min_dt: нижняя граница шага
        lambda_mode: ``homogeneous`` или ``sourced`` (только квадратичные H)
        strict_invariants: бросать исключение при нарушении det J = 1, J̄ᵀJ = I
        invariant_tolerance: допуск инвариантов
        record_every: записывать каждый k-й шаг
    """

    integrator: str = "auto"
    dt: float = 1e-3
    min_dt: float = 1e-12
    lambda_mode: str = "homogeneous"
    strict_invariants: bool = False
    invariant_tolerance: float = 1e-8
    record_every: int = 1

    def __post_init__(self):
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"Неизвестный интегратор {self.integrator!r}; доступны: {', '.join(INTEGRATORS)}")
        if self.lambda_mode not in LAMBDA_MODES:
            raise ValueError(f"Неизвестный режим λ {self.lambda_mode!r}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError("Шаг интегрирования должен быть положительным и конечным")
        if self.min_dt <= 0:
            raise ValueError("Минимальный шаг должен быть положительным")
        if self.record_every < 1:
            raise ValueError("record_every должен быть не меньше 1")

    def with_dt(self, dt: float) -> "IntegratorOptions":
        return replace(self, dt=dt)


class FlowIntegrator:
    """Интегратор гамильтонова потока и касательных матриц для одной модели."""

    def __init__(self, model: HamiltonianModel, options: Optional[IntegratorOptions] = None):
        self.model = model
        self.options = options or IntegratorOptions()
        self.method = self._resolve_method()

    def _resolve_method(self) -> str:
        method = self.options.integrator
        if method == "auto":
            return "yoshida4" if self.model.separable else "rk4"
        if method in ("yoshida4", "leapfrog") and not self.model.separable:
            raise UnsupportedModelError(
                f"Симплектический интегратор {method} требует сепарабельного H; модель {self.model.name!r} несепарабельна"
            )
        return method

    @property
    def sequence(self) -> Tuple[Tuple[str, float], ...]:
        return YOSHIDA_SEQUENCE if self.method == "yoshida4" else LEAPFROG_SEQUENCE

    # --- шаги ---------------------------------------------------------------

    def steps_for(self, span: float) -> Tuple[int, float]:
        """Число шагов и шаг, делящий промежуток нацело (span может быть отрицательным)."""
        if span == 0:
            return 0, 0.0
        count = max(1, math.ceil(abs(span) / self.options.dt - 1e-9))
        h = span / count
        if abs(h) < self.options.min_dt:
            raise IntegrationError(f"Шаг {abs(h):.3e} меньше допустимого {self.options.min_dt:.3e}")
        return count, h

    def _kick(self, phi: np.ndarray, c: float, h: float) -> None:
        n = self.model.n
        grad = self.model.gradient(phi)
        phi[n:] -= c * h * grad[:n]

    def _drift(self, phi: np.ndarray, c: float, h: float) -> None:
        n = self.model.n
        grad = self.model.gradient(phi)
        phi[:n] += c * h * grad[n:]

    def _symplectic_step(self, phi, h, jac=None, jac_bar=None, lam=None) -> None:
        n = self.model.n
        for kind, c in self.sequence:
            if jac is not None:
                hess = self.model.hessian(phi)
            if kind == KICK:
                if jac is not None:
                    kick = -c * h * hess[:n, :n]
                    jac[n:] += kick @ jac[:n]
                    if jac_bar is not None:
                        jac_bar[:n] -= kick.T @ jac_bar[n:]
                    if lam is not None:
                        lam[:n] -= kick.T @ lam[n:]
                self._kick(phi, c, h)
            else:
                if jac is not None:
                    drift = c * h * hess[n:, n:]
                    jac[:n] += drift @ jac[n:]
                    if jac_bar is not None:
                        jac_bar[n:] -= drift.T @ jac_bar[:n]
                    if lam is not None:
                        lam[n:] -= drift.T @ lam[:n]
                self._drift(phi, c, h)

    def _generator(self, phi: np.ndarray) -> np.ndarray:
        """A = ω·Hess(H)."""
        n = self.model.n
        hess = self.model.hessian(phi)
        return np.concatenate([hess[n:], -hess[:n]], axis=0)

    def _rk4_points(self, phi: np.ndarray, h: float) -> np.ndarray:
        field = self.model.vector_field
        k1 = field(phi)
        k2 = field(phi + 0.5 * h * k1)
        k3 = field(phi + 0.5 * h * k2)
        k4 = field(phi + h * k3)
        return phi + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    def _rk4_extended(self, phi, jac, jac_bar, lam, h):
        model = self.model

        def rhs(p, j, jb, lm):
            a = self._generator(p)
            return model.vector_field(p), a @ j, -a.T @ jb, -a.T @ lm

        k1 = rhs(phi, jac, jac_bar, lam)
        k2 = rhs(*(x + 0.5 * h * k for x, k in zip((phi, jac, jac_bar, lam), k1)))
        k3 = rhs(*(x + 0.5 * h * k for x, k in zip((phi, jac, jac_bar, lam), k2)))
        k4 = rhs(*(x + h * k for x, k in zip((phi, jac, jac_bar, lam), k3)))
        return tuple(
            x + h / 6.0 * (a + 2 * b + 2 * c + d)
            for x, a, b, c, d in zip((phi, jac, jac_bar, lam), k1, k2, k3, k4)
        )

    # --- публичные операции -----------------------------------------------

    def advance(self, phi: np.ndarray, span: float) -> np.ndarray:
        """
        Перенести фазовые точки на время ``span`` без касательных матриц.

        Args:
            phi: точка формы (2n,) или набор точек формы (2n, M)
            span: промежуток времени (отрицательный для обратного хода)

        Returns:
            Новый массив той же формы.
        """
        state = np.array(phi, dtype=float)
        count, h = self.steps_for(span)
        for _ in range(count):
            if self.method == "rk4":
                state = self._rk4_points(state, h)
            else:
                self._symplectic_step(state, h)
        return state

    def propagate_tangent(
        self,
        phi: np.ndarray,
        jac: np.ndarray,
        span: float,
        jac_bar: Optional[np.ndarray] = None,
        lam: Optional[np.ndarray] = None,
    ) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray], Optional[np.ndarray]]:
        """Перенести точку и касательные величины без записи траектории."""
        phi = np.array(phi, dtype=float)
        jac = np.array(jac, dtype=float)
        jac_bar = None if jac_bar is None else np.array(jac_bar, dtype=float)
        lam = None if lam is None else np.array(lam, dtype=float)
        count, h = self.steps_for(span)
        for _ in range(count):
            if self.method == "rk4":
                jb = jac_bar if jac_bar is not None else np.eye(jac.shape[0])
                lm = lam if lam is not None else np.zeros(jac.shape[0])
                phi, jac, jb, lm = self._rk4_extended(phi, jac, jb, lm, h)
                jac_bar = jb if jac_bar is not None else None
                lam = lm if lam is not None else None
            else:
                self._symplectic_step(phi, h, jac, jac_bar, lam)
            self._check_finite(phi)
        return phi, jac, jac_bar, lam

    def run(self, state: ExtendedState, span: float, extended: bool = True) -> Trajectory:
        """
        Проинтегрировать от состояния ``state`` на время ``span`` с записью.

        Args:
            state: начальное расширенное состояние
            span: длительность, span ≥ 0
            extended: переносить ли λ, J, J̄

        Returns:
            Траектория с остатками инвариантов и дрейфом энергии.
        """
        if span < 0:
            raise ValueError("Длительность интегрирования должна быть неотрицательной")
        count, h = self.steps_for(span)
        stride = self.options.record_every
        phi = state.phi.copy()
        jac, jac_bar, lam = state.jac.copy(), state.jac_bar.copy(), state.lam.copy()

        times = [state.t]
        phis = [phi.copy()]
        lams, jacs, jac_bars = [lam.copy()], [jac.copy()], [jac_bar.copy()]
        for step in range(1, count + 1):
            if self.method == "rk4":
                if extended:
                    phi, jac, jac_bar, lam = self._rk4_extended(phi, jac, jac_bar, lam, h)
                else:
                    phi = self._rk4_points(phi, h)
            elif extended:
                self._symplectic_step(phi, h, jac, jac_bar, lam)
            else:
                self._symplectic_step(phi, h)
            self._check_finite(phi)
            if step % stride == 0 or step == count:
                times.append(state.t + step * h)
                phis.append(phi.copy())
                if extended:
                    lams.append(lam.copy())
                    jacs.append(jac.copy())
                    jac_bars.append(jac_bar.copy())

        trajectory = Trajectory(
            times=np.asarray(times),
            phi=np.asarray(phis),
            lam=np.asarray(lams) if extended else None,
            jac=np.asarray(jacs) if extended else None,
            jac_bar=np.asarray(jac_bars) if extended else None,
            model_name=self.model.name,
            integrator=self.method,
            step=h,
        )
        energies = self.model.energy_value(trajectory.phi.T)
        trajectory.energy_drift = float(np.max(np.abs(np.atleast_1d(energies) - np.atleast_1d(energies)[0])))
        if extended:
            self._record_invariants(trajectory)
        logger.debug(
            "%s: %d шагов %s, h=%.3e, дрейф энергии %.3e",
            self.model.name, count, self.method, h, trajectory.energy_drift,
        )
        return trajectory

    def _check_finite(self, phi: np.ndarray) -> None:
        if not np.all(np.isfinite(phi)):
            raise IntegrationError(f"Нефинитное состояние при интегрировании модели {self.model.name!r}")

    def _record_invariants(self, trajectory: Trajectory) -> None:
        dim = trajectory.phi.shape[1]
        trajectory.det_residual = float(np.max(np.abs(np.linalg.det(trajectory.jac) - 1.0)))
        pairing = np.einsum("kba,kbc->kac", trajectory.jac_bar, trajectory.jac) - np.eye(dim)
        trajectory.pairing_residual = float(np.max(np.abs(pairing)))
        tolerance = self.options.invariant_tolerance
        worst = max(trajectory.det_residual, trajectory.pairing_residual)
        if worst <= tolerance:
            return
        message = (
            f"Инварианты нарушены для {self.model.name!r}: |det J − 1| = {trajectory.det_residual:.3e}, "
            f"|J̄ᵀJ − I| = {trajectory.pairing_residual:.3e}, допуск {tolerance:.1e}"
        )
        if self.options.strict_invariants:
            raise InvariantViolationError(message)
        logger.warning(message)


# ---------------------------------------------------------------------------
# Операции модуля
# ---------------------------------------------------------------------------

def hamilton_flow(
    model: HamiltonianModel,
    phi0: Sequence[float],
    t_i: float,
    t_f: float,
    options: Optional[IntegratorOptions] = None,
) -> Trajectory:
    """
    Решение уравнений Гамильтона φ̇ = ω∇H на [t_i, t_f].

    Args:
        model: гамильтониан
        phi0: начальная точка
        t_i: начальный момент
        t_f: конечный момент, t_f ≥ t_i
        options: параметры интегрирования

    Returns:
        Траектория без касательных матриц; дрейф энергии в ``energy_drift``.
    """
    if t_f < t_i:
        raise ValueError(f"Ожидалось t_f ≥ t_i, получено t_i={t_i}, t_f={t_f}")
    state = ExtendedState.initial(phi0, t=t_i)
    _check_dimension(model, state)
    return FlowIntegrator(model, options).run(state, t_f - t_i, extended=False)


def extended_flow(
    model: HamiltonianModel,
    state0: ExtendedState,
    t_f: float,
    options: Optional[IntegratorOptions] = None,
) -> Trajectory:
    """
    Совместный перенос φ, J (сектор c), J̄ (сектор c̄) и λ.

    J̇ = AJ, J̄̇ = −AᵀJ̄, λ̇ = −Aᵀλ, A = ω·Hess(H). Режим ``sourced``
    допустим только для квадратичных H, где источник i c̄ω∂∂∂H c исчезает.
    """
    options = options or IntegratorOptions()
    if options.lambda_mode == "sourced" and not model.quadratic:
        raise UnsupportedModelError(
            f"Перенос λ с грассмановым источником не поддерживается для неквадратичной модели {model.name!r}"
        )
    _check_dimension(model, state0)
    return FlowIntegrator(model, options).run(state0, t_f - state0.t, extended=True)


def classical_propagator(
    model: HamiltonianModel,
    phi_i: Sequence[float],
    t_i: float,
    t_f: float,
    options: Optional[IntegratorOptions] = None,
) -> PropagatorRecord:
    """P(φ_f, t_f | φ_i, t_i) = δ(φ_f − φ_cl(t_f; φ_i, t_i)) как запись о конечной точке."""
    phi_i = np.array(phi_i, dtype=float)
    if t_f == t_i:
        phi_f = phi_i.copy()
    else:
        phi_f = hamilton_flow(model, phi_i, t_i, t_f, options).final_phi
    return PropagatorRecord(phi_i=phi_i, phi_f=phi_f, t_i=float(t_i), t_f=float(t_f), model_name=model.name)


def ensemble_evolve(
    samples: Iterable[Sequence[float]],
    model: HamiltonianModel,
    T: float,
    options: Optional[IntegratorOptions] = None,
) -> EnsembleResult:
    """
    Перенести выборку фазовых точек по классическому потоку.

    Образцы интегрируются одним векторизованным проходом; образцы с
    нефинитным результатом собираются в ``failures`` и не прерывают расчёт.
    """
    points = np.asarray(list(samples), dtype=float)
    dim = 2 * model.n
    if points.size == 0:
        return EnsembleResult(endpoints=np.empty((0, dim)), indices=np.empty(0, dtype=int))
    points = points.reshape(-1, dim)
    finite = np.all(np.isfinite(points), axis=1)
    failures: List[Tuple[int, str]] = [(int(i), "нефинитная начальная точка") for i in np.flatnonzero(~finite)]

    integrator = FlowIntegrator(model, options)
    with np.errstate(over="ignore", invalid="ignore"):
        moved = integrator.advance(points[finite].T, T).T
    ok = np.all(np.isfinite(moved), axis=1)
    source = np.flatnonzero(finite)
    failures += [(int(i), "нефинитное состояние при интегрировании") for i in source[~ok]]
    if failures:
        logger.warning("Ансамбль %s: %d образцов не удалось перенести", model.name, len(failures))
    return EnsembleResult(endpoints=moved[ok], indices=source[ok], failures=sorted(failures))


def lyapunov_spectrum(
    model: HamiltonianModel,
    phi0: Sequence[float],
    T: float,
    renorm_interval: float,
    options: Optional[IntegratorOptions] = None,
) -> LyapunovResult:
    """
    Спектр Ляпунова по Бенеттину: QR-переортонормировка столбцов J.

    Args:
        model: гамильтониан
        phi0: начальная точка
        T: полное время
        renorm_interval: интервал переортонормировки, T ≫ renorm_interval
        options: параметры интегрирования

    Returns:
        Показатели по убыванию, их сумма и история конечных по времени оценок.
    """
    if renorm_interval <= 0 or T <= 0:
        raise ValueError("T и интервал переортонормировки должны быть положительными")
    if renorm_interval > T:
        raise ValueError("Интервал переортонормировки больше полного времени")
    integrator = FlowIntegrator(model, options)
    dim = 2 * model.n
    phi = np.array(phi0, dtype=float)
    basis = np.eye(dim)
    sums = np.zeros(dim)
    chunks = max(1, int(round(T / renorm_interval)))
    interval = T / chunks
    times, history = [], []
    for chunk in range(1, chunks + 1):
        phi, basis, _, _ = integrator.propagate_tangent(phi, basis, interval)
        basis, upper = np.linalg.qr(basis)
        diagonal = np.diag(upper)
        signs = np.sign(diagonal)
        signs[signs == 0] = 1.0
        basis = basis * signs
        sums += np.log(np.abs(diagonal))
        times.append(chunk * interval)
        history.append(sums / (chunk * interval))
    exponents = np.sort(sums / T)[::-1]
    logger.info("Спектр Ляпунова %s: %s, сумма %.3e", model.name, exponents, exponents.sum())
    return LyapunovResult(
        exponents=exponents,
        total=float(exponents.sum()),
        T=float(T),
        renorm_interval=float(interval),
        history_times=np.asarray(times),
        history=np.asarray(history),
    )


def finite_difference_jacobian(
    model: HamiltonianModel,
    phi0: Sequence[float],
    T: float,
    bump: float = 1e-6,
    options: Optional[IntegratorOptions] = None,
) -> np.ndarray:
    """∂φ(T)/∂φ(0) центральными разностями по начальной точке."""
    integrator = FlowIntegrator(model, options)
    phi0 = np.asarray(phi0, dtype=float)
    dim = phi0.size
    columns = []
    for b in range(dim):
        shift = np.zeros(dim)
        shift[b] = bump
        columns.append((integrator.advance(phi0 + shift, T) - integrator.advance(phi0 - shift, T)) / (2 * bump))
    return np.stack(columns, axis=1)


def _check_dimension(model: HamiltonianModel, state: ExtendedState) -> None:
    if state.phi.size != 2 * model.n:
        raise ValueError(f"Модель {model.name!r} ожидает точку размерности {2 * model.n}, получено {state.phi.size}")


__all__ = [
    "INTEGRATORS",
    "IntegratorOptions",
    "FlowIntegrator",
    "hamilton_flow",
    "extended_flow",
    "classical_propagator",
    "ensemble_evolve",
    "lyapunov_spectrum",
    "finite_difference_jacobian",
]
