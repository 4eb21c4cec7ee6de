"""Сервис выполнения запуска: диспетчеризация команд, проверки и запись артефактов"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Optional

import numpy as np

from ..models.hamiltonian import get_model
from ..models.phase_space import Distribution, ExtendedState
from ..models.quantum import PropagatorRequest
from ..models.run_config import RunConfig
from ..models.verification import CheckResult, RunSummary
from ..physics.dynamics import IntegratorOptions, classical_propagator, extended_flow, lyapunov_spectrum
from ..physics.liouville import (
    LiouvilleOptions,
    default_window,
    ensemble_histogram,
    liouville_evolve,
    peak_offset_cells,
    sample_gaussian,
)
from ..physics.quantum import convergence_order, group_law_residual, semiclassical_concentration, slicing_sweep
from ..repositories import IResultRepository
from ..utils.hashing import config_hash
from .verification_service import VerificationService

logger = logging.getLogger(__name__)

INVARIANT_TOLERANCE = 1e-8
ENERGY_TOLERANCE = 1e-6
MASS_TOLERANCE = 1e-3
FREE_SLICING_TOLERANCE = 1e-12
ORDER_TARGET = 2.0
ORDER_TOLERANCE = 0.3
SCALING_TOLERANCE = 0.2
PEAK_FRACTION = 0.1
GROUP_TOLERANCE = 1e-10


class RunService:
    """
    Сервис запуска.

    Зависит от абстракции репозитория (IResultRepository); сводка
    summary.json записывается при любом исходе проверок.
    """

    def __init__(self, repository: IResultRepository, verification: Optional[VerificationService] = None):
        """
        Args:
            repository: репозиторий результатов (внедрение зависимости)
            verification: сервис проверки тождеств (по умолчанию на том же репозитории)
        """
        self._repository = repository
        self._verification = verification or VerificationService(repository)
        self._commands: Dict[str, Callable[[RunConfig, str], List[CheckResult]]] = {
            "verify": lambda config, _: self._verification.verify(config),
            "eq5-check": lambda config, _: self._verification.ghost_kernel(config),
            "evolve": self.evolve,
            "liouville": self.liouville,
            "quantum": self.quantum,
            "lyapunov": self.lyapunov,
        }

    def run(self, config: RunConfig) -> RunSummary:
        """
        Выполнить команду конфигурации.

        Returns:
            Сводка; ``summary.passed`` истинно, если все проверки в допусках.
        """
        digest = config_hash(config.fingerprint())
        logger.info("Запуск %s, хеш конфигурации %s", config.command, digest[:12])
        checks = self._commands[config.command](config, digest)
        summary = RunSummary(command=config.command, config_hash=digest, checks=list(checks))
        self._repository.save_summary(summary)
        for check in summary.failed():
            logger.warning("Проверка %s не пройдена: %.3e > %.3e", check.check, check.residual, check.tolerance)
        logger.info("Запуск %s завершён: %s (%d проверок)", config.command, summary.status, len(summary.checks))
        return summary

    @staticmethod
    def integrator_options(config: RunConfig, dt: Optional[float] = None) -> IntegratorOptions:
        section = config.integrator
        return IntegratorOptions(
            integrator=section.integrator,
            dt=dt if dt is not None else section.dt,
            strict_invariants=section.strict_invariants,
            invariant_tolerance=section.invariant_tolerance,
            record_every=section.record_every,
        )

    # --- команды --------------------------------------------------------------

    def evolve(self, config: RunConfig, digest: str) -> List[CheckResult]:
        model = get_model(config.model.name)
        state = ExtendedState.initial(config.initial.phi, t=config.span.t_i)
        trajectory = extended_flow(model, state, config.span.t_i + config.span.T, self.integrator_options(config))
        self._repository.save_csv("trajectory.csv", trajectory.csv_header(), trajectory.csv_rows())
        self._repository.save_plot_data("trajectory.dat", trajectory, "trajectory", digest)
        return [
            CheckResult.evaluate("evolve.det_jacobian", trajectory.det_residual, config.tolerance(INVARIANT_TOLERANCE)),
            CheckResult.evaluate("evolve.pairing", trajectory.pairing_residual, config.tolerance(INVARIANT_TOLERANCE)),
            CheckResult.evaluate("evolve.energy_drift", trajectory.energy_drift, config.tolerance(ENERGY_TOLERANCE)),
        ]

    def liouville(self, config: RunConfig, digest: str) -> List[CheckResult]:
        section = config.liouville
        model = get_model(config.model.name)
        center = config.initial.phi
        T = config.span.T
        q_bounds, p_bounds = default_window(center, section.sigma, section.margin)
        if section.periodic_q:
            q_bounds = (-math.pi, math.pi)
        dist = Distribution.gaussian(center, section.sigma, q_bounds, p_bounds, (section.grid, section.grid))
        result = liouville_evolve(dist, model, T, LiouvilleOptions(dt=section.dt, periodic_q=section.periodic_q))
        endpoint = classical_propagator(model, center, 0.0, T, IntegratorOptions(dt=section.dt)).phi_f

        checks = [
            CheckResult.evaluate("liouville.peak_offset_cells", peak_offset_cells(result.distribution, endpoint), 1.0),
            CheckResult.evaluate("liouville.mass_drift", abs(result.mass_drift), config.tolerance(MASS_TOLERANCE)),
        ]
        report = result.to_dict()
        report["classical_endpoint"] = endpoint.tolist()
        if section.compare_ensemble:
            rng = np.random.default_rng(config.seed)
            samples = sample_gaussian(center, section.sigma, section.samples, rng)
            histogram = ensemble_histogram(samples, model, T, result.distribution, IntegratorOptions(dt=section.dt))
            distance = result.distribution.binned_mass_rms(histogram)
            report["ensemble_binned_mass_rms"] = distance
            checks.append(
                CheckResult.evaluate("liouville.ensemble_binned_mass_rms", distance, config.tolerance(section.distance_tolerance))
            )
        self._repository.save_json("distribution.json", report)
        self._repository.save_plot_data("distribution.dat", result.distribution, "distribution", digest)
        return checks

    def quantum(self, config: RunConfig, digest: str) -> List[CheckResult]:
        sweep = config.quantum.sweep
        if sweep == "N":
            return self._slicing(config, digest)
        if sweep == "hbar":
            return self._concentration(config, digest)
        return self._group_law(config)

    def _slicing(self, config: RunConfig, digest: str) -> List[CheckResult]:
        section = config.quantum
        request = PropagatorRequest(config.model.name, section.q_i, section.q_f, config.span.T, section.hbar)
        rows = slicing_sweep(request, section.slices)
        self._repository.save_csv("sweep_N.csv", ["N", "relative_error", "modulus", "phase"], [row.as_row() for row in rows])
        self._repository.save_plot_data("sweep_N.dat", rows, "n_sweep", digest)
        errors = [row.relative_error for row in rows]
        if request.model == "free":
            return [CheckResult.evaluate("quantum.free_slicing_exact", max(errors), config.tolerance(FREE_SLICING_TOLERANCE))]
        order = convergence_order([row.N for row in rows], errors)
        monotone = all(later < earlier for earlier, later in zip(errors, errors[1:]))
        return [
            CheckResult.evaluate("quantum.relative_error_at_max_N", errors[-1], config.tolerance(section.relative_tolerance)),
            CheckResult.evaluate("quantum.convergence_order", abs(order - ORDER_TARGET), config.tolerance(ORDER_TOLERANCE)),
            CheckResult.condition("quantum.monotone_convergence", monotone),
        ]

    def _concentration(self, config: RunConfig, digest: str) -> List[CheckResult]:
        section = config.quantum
        rows = semiclassical_concentration(config.model.name, config.initial.phi, config.span.T, section.hbars)
        self._repository.save_csv(
            "sweep_hbar.csv", ["hbar", "spread", "mean", "classical_q", "offset"], [row.as_row() for row in rows]
        )
        self._repository.save_plot_data("sweep_hbar.dat", rows, "hbar_sweep", digest)
        ratios = [row.spread / math.sqrt(row.hbar) for row in rows]
        scaling = max(abs(ratio / ratios[0] - 1.0) for ratio in ratios)
        smallest = min(rows, key=lambda row: row.hbar)
        return [
            CheckResult.evaluate("quantum.sqrt_hbar_scaling", scaling, config.tolerance(SCALING_TOLERANCE)),
            CheckResult.evaluate(
                "quantum.peak_offset_over_spread", smallest.offset / smallest.spread, config.tolerance(PEAK_FRACTION)
            ),
        ]

    def _group_law(self, config: RunConfig) -> List[CheckResult]:
        section = config.quantum
        T = config.span.T
        points = [(section.q_f, section.q_i), (0.0, 0.0), (-section.q_f, section.q_i)]
        rows = []
        for T1 in (T / 3, T / 2):
            rows.append([T1, T - T1, group_law_residual(config.model.name, T1, T - T1, section.hbar, points)])
        self._repository.save_csv("sweep_group.csv", ["T1", "T2", "relative_residual"], rows)
        worst = max(row[2] for row in rows)
        return [CheckResult.evaluate("quantum.group_law", worst, config.tolerance(GROUP_TOLERANCE))]

    def lyapunov(self, config: RunConfig, digest: str) -> List[CheckResult]:
        section = config.lyapunov
        model = get_model(config.model.name)
        result = lyapunov_spectrum(
            model, config.initial.phi, section.T, section.renorm_interval, self.integrator_options(config, section.dt)
        )
        dim = result.history.shape[1]
        header = ["t"] + [f"lambda{a}" for a in range(dim)]
        rows = [[float(t)] + history.tolist() for t, history in zip(result.history_times, result.history)]
        self._repository.save_csv("lyapunov.csv", header, rows)
        self._repository.save_plot_data("lyapunov.dat", result, "lyapunov", digest)
        return [CheckResult.evaluate("lyapunov.sum", abs(result.total), config.tolerance(section.sum_tolerance))]


__all__ = ["RunService"]
