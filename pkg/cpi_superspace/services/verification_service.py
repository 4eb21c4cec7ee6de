"""Сервис проверки тождеств грассмановой алгебры, суперпространства и духового ядра"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..algebra.coefficients import CoefficientMode
from ..algebra.grassmann import (
    GeneratorRole,
    GeneratorTable,
    GrassmannElement,
    berezin_integrate,
    berezin_sign_table,
    create_algebra,
)
from ..models.hamiltonian import HamiltonianModel, get_model
from ..models.run_config import RunConfig
from ..models.superspace import SymplecticForm, ghost_names
from ..models.verification import CheckResult, IdentityRecord
from ..physics.ghost_kernel import probability_amplitude_check
from ..physics.superspace import (
    KINETIC_POLARIZATION,
    SURFACE_TERM_SIGN,
    berezin_reduce,
    bosonic_variation,
    build_superfield,
    expansion_residual,
    expected_bosonic_equation,
    expected_ghost_equation,
    ghost_variation,
    lattice_base_action,
    lattice_superaction,
    lattice_tilde_action,
    quantize_projector,
    random_lattice_path,
    superfield_table,
    surface_term,
    taylor_remainder,
)
from ..repositories import IResultRepository

logger = logging.getLogger(__name__)

IDENTITIES_FILE = "identities.json"
GHOST_KERNEL_FILE = "ghost_kernel_report.json"

EXPECTED_SIGNS = {
    "∫dθ θ": 1,
    "∫dθ dθ̄ θθ̄": -1,
    "∫dθ̄ dθ θθ̄": 1,
    "∫ i dθ dθ̄ (iθθ̄)": 1,
    "∫dθ dθ̄ δ(θ)δ(θ̄)": 1,
}
AXIOM_GENERATORS = 4
NONPOLYNOMIAL_TOLERANCE = 1e-12
REPRESENTATION_TOLERANCE = 1e-12
TRANSPORT_TOLERANCE = 1e-3


def _random_fraction(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))


def random_element(table: GeneratorTable, rng: np.random.Generator, density: float = 0.5) -> GrassmannElement:
    """Случайный элемент с рациональными коэффициентами при части мономов."""
    terms = {}
    for mask in range(1 << len(table)):
        if rng.random() < density:
            terms[mask] = _random_fraction(rng)
    return GrassmannElement(table, terms)


def _parity_parts(element: GrassmannElement) -> Tuple[GrassmannElement, GrassmannElement]:
    even = element.filter_terms(lambda m: bin(m).count("1") % 2 == 0)
    return even, element - even


def _residual(element: GrassmannElement) -> float:
    return float(element.max_abs_coefficient())


def _sign_table_json(table: Dict[str, complex]) -> Dict[str, List[float]]:
    return {key: [value.real, value.imag] for key, value in table.items()}


class VerificationService:
    """
    Сервис проверки символьных тождеств.

    Зависит от абстракции репозитория (IResultRepository), в который
    записываются отчёты тождеств и духового ядра.
    """

    def __init__(self, repository: IResultRepository):
        """
        Args:
            repository: репозиторий результатов (внедрение зависимости)
        """
        self._repository = repository

    # --- аксиомы алгебры ----------------------------------------------------

    def grassmann_suite(self, rng: np.random.Generator, count: int = 8) -> List[CheckResult]:
        """
        Аксиомы алгебры на случайных элементах в точном режиме.

        Args:
            rng: генератор случайных чисел
            count: число случайных троек элементов

        Returns:
            Результаты проверок с нулевым допуском.
        """
        table = create_algebra(
            [(f"g{i}", GeneratorRole.AUXILIARY) for i in range(AXIOM_GENERATORS)], mode=CoefficientMode.EXACT
        )
        worst = dict.fromkeys(
            ["associativity", "distributivity", "graded_commutativity", "leibniz", "exp_homomorphism"], 0.0
        )
        for _ in range(count):
            a, b, c = (random_element(table, rng) for _ in range(3))
            worst["associativity"] = max(worst["associativity"], _residual((a * b) * c - a * (b * c)))
            worst["distributivity"] = max(worst["distributivity"], _residual(a * (b + c) - (a * b + a * c)))

            a_even, a_odd = _parity_parts(a)
            b_even, b_odd = _parity_parts(b)
            graded = (a_odd * b_odd + b_odd * a_odd) + (a_even * b_odd - b_odd * a_even)
            worst["graded_commutativity"] = max(worst["graded_commutativity"], _residual(graded))

            for name in table.names:
                leibniz = (a_even * b).left_derivative(name) - (
                    a_even.left_derivative(name) * b + a_even * b.left_derivative(name)
                )
                leibniz = leibniz + (a_odd * b).left_derivative(name) - (
                    a_odd.left_derivative(name) * b - a_odd * b.left_derivative(name)
                )
                worst["leibniz"] = max(worst["leibniz"], _residual(leibniz))

            x, y = a_even.soul(), b_even.soul()
            worst["exp_homomorphism"] = max(worst["exp_homomorphism"], _residual((x + y).exp() - x.exp() * y.exp()))

        generators = table.generators(table.names)
        anticommutation = 0.0
        for g, h in product(generators, repeat=2):
            anticommutation = max(anticommutation, _residual(g * h + h * g))

        k = len(table)
        top = berezin_integrate(table.product(table.names), list(table.names))
        expected_top = (-1) ** (k * (k - 1) // 2)
        top_residual = abs(top.field.to_complex(top.body()) - expected_top)

        signs = berezin_sign_table()
        sign_residual = max(abs(signs[key] - value) for key, value in EXPECTED_SIGNS.items())

        checks = [CheckResult.evaluate(f"grassmann.{name}", value, 0.0) for name, value in worst.items()]
        checks.append(CheckResult.evaluate("grassmann.anticommutation", anticommutation, 0.0))
        checks.append(CheckResult.evaluate("grassmann.berezin_top", top_residual, 0.0))
        checks.append(CheckResult.evaluate("grassmann.sign_table", sign_residual, 0.0))
        logger.info("Аксиомы алгебры: %d проверок", len(checks))
        return checks

    # --- суперпространство --------------------------------------------------

    def expansion_records(self, model: HamiltonianModel, rng: np.random.Generator) -> List[IdentityRecord]:
        """Разложение H(Φ) по θ, θ̄ и обрыв ряда Тейлора на третьем порядке."""
        table = superfield_table(model.n)
        c, cbar = ghost_names(model.n)
        dim = 2 * model.n
        phi = [_random_fraction(rng) for _ in range(dim)]
        lam = [_random_fraction(rng) for _ in range(dim)]
        superfield = build_superfield(phi, c, cbar, lam, SymplecticForm.standard(model.n), table)
        records = []
        for identity, residual in (
            ("expansion", expansion_residual(model, superfield)),
            ("taylor_remainder", taylor_remainder(model, superfield)),
        ):
            records.append(
                IdentityRecord(identity, model.name, len(residual), _residual(residual), exact=model.polynomial)
            )
        return records

    def lattice_records(
        self,
        model: HamiltonianModel,
        N: int,
        kinetic: str,
        hbars: Sequence[Fraction],
        rng: np.random.Generator,
    ) -> List[IdentityRecord]:
        """Редукция решёточного супердействия и проектор квантования на случайном пути."""
        path = random_lattice_path(model.n, N, rng)
        superaction = lattice_superaction(model, path, kinetic)
        st = surface_term(path.slices[0], path.slices[-1], path.table, KINETIC_POLARIZATION[kinetic])
        reduction = berezin_reduce(superaction) - st * SURFACE_TERM_SIGN - lattice_tilde_action(model, path, kinetic)
        records = [
            IdentityRecord("lattice_reduction", model.name, len(reduction), _residual(reduction), N, kinetic, model.polynomial)
        ]
        base = path.table.scalar(lattice_base_action(model, path, kinetic))
        for hbar in hbars:
            projected = quantize_projector(superaction, hbar) - base / hbar
            records.append(
                IdentityRecord(
                    f"quantize_projector[hbar={hbar}]",
                    model.name,
                    len(projected),
                    _residual(projected),
                    N,
                    kinetic,
                    model.polynomial,
                )
            )
        return records

    def variation_records(self, model: HamiltonianModel, kinetic: str, rng: np.random.Generator) -> List[IdentityRecord]:
        """Уравнения Эйлера–Лагранжа решёточного S̃ во внутреннем слое k = 1 пути с N = 2."""
        path = random_lattice_path(model.n, 2, rng, auxiliary=True)
        dim = 2 * model.n
        worst = {"euler_lagrange.ghost": 0.0, "euler_lagrange.lambda": 0.0, "euler_lagrange.phi": 0.0}
        terms = dict.fromkeys(worst, 0)
        for a in range(dim):
            pairs = {
                "euler_lagrange.ghost": (
                    ghost_variation(model, path, a, 1, kinetic),
                    expected_ghost_equation(model, path, a, 1, kinetic),
                ),
                "euler_lagrange.lambda": (
                    bosonic_variation(model, path, "lam", a, 1, kinetic),
                    expected_bosonic_equation(model, path, "lam", a, 1, kinetic),
                ),
                "euler_lagrange.phi": (
                    bosonic_variation(model, path, "phi", a, 1, kinetic),
                    expected_bosonic_equation(model, path, "phi", a, 1, kinetic),
                ),
            }
            for name, (actual, expected) in pairs.items():
                residual = actual - expected
                worst[name] = max(worst[name], _residual(residual))
                terms[name] += len(residual)
        return [
            IdentityRecord(name, model.name, terms[name], worst[name], 2, kinetic, model.polynomial)
            for name in worst
        ]

    def superspace_suite(self, config: RunConfig, rng: np.random.Generator) -> Tuple[List[CheckResult], List[IdentityRecord]]:
        """
        Тождества суперпространства для набора моделей.

        Returns:
            Проверки для сводки и подробные записи для identities.json.
        """
        section = config.verify
        hbars = [Fraction(value) for value in section.hbars]
        records: List[IdentityRecord] = []
        for name in section.models:
            model = get_model(name)
            records += self.expansion_records(model, rng)
            for kinetic in section.kinetic_forms:
                for N in section.slices:
                    records += self.lattice_records(model, N, kinetic, hbars, rng)
                records += self.variation_records(model, kinetic, rng)
            logger.info("Тождества суперпространства для %s проверены", model.name)

        checks = []
        for record in records:
            tolerance = 0.0 if record.exact else config.tolerance(NONPOLYNOMIAL_TOLERANCE)
            label = ",".join(str(part) for part in (record.model, record.kinetic, record.N) if part is not None)
            checks.append(CheckResult.evaluate(f"superspace.{record.identity}[{label}]", record.max_residual, tolerance))
        return checks, records

    def verify(self, config: RunConfig) -> List[CheckResult]:
        """
        Выполнить выбранный набор проверок и записать identities.json.

        Все случайные данные берутся из одного генератора с ``config.seed``.
        """
        rng = np.random.default_rng(config.seed)
        suite = config.verify.suite
        checks: List[CheckResult] = []
        records: List[IdentityRecord] = []
        if suite in ("grassmann", "all"):
            checks += self.grassmann_suite(rng, config.verify.random_elements)
        if suite in ("superspace", "all"):
            superspace_checks, records = self.superspace_suite(config, rng)
            checks += superspace_checks
        self._repository.save_json(
            IDENTITIES_FILE,
            {
                "suite": suite,
                "sign_table": _sign_table_json(berezin_sign_table()),
                "surface_term_sign": SURFACE_TERM_SIGN,
                "identities": [record.to_dict() for record in records],
            },
        )
        return checks

    # --- духовое ядро -------------------------------------------------------

    def ghost_kernel(self, config: RunConfig) -> List[CheckResult]:
        """Связь вероятности и амплитуды для квадратичной модели при нескольких T."""
        section = config.ghost_kernel
        model = get_model(config.model.name)
        reports = [
            probability_amplitude_check(model, N=section.N, epsilon=section.epsilon, T=T, phi_i=config.initial.phi)
            for T in section.times
        ]
        checks: List[CheckResult] = []
        constants = np.array([report.constant for report in reports])
        nonzero = all(abs(report.ghost_integral) > 0 for report in reports) and bool(np.all(np.isfinite(constants)))
        checks.append(CheckResult.condition("ghost_kernel.nonzero_constant", nonzero, float(np.min(np.abs(constants)))))
        variation = float((constants.max() - constants.min()) / abs(constants.mean()))
        checks.append(CheckResult.evaluate("ghost_kernel.time_independence", variation, config.tolerance(section.tolerance)))
        for report in reports:
            label = f"[T={report.T:g}]"
            checks += [
                CheckResult.evaluate(
                    f"ghost_kernel.analytic_constant{label}", report.constant_deviation, config.tolerance(section.tolerance)
                ),
                CheckResult.evaluate(
                    f"ghost_kernel.liouville_probability{label}", report.transport_deviation, config.tolerance(TRANSPORT_TOLERANCE)
                ),
                CheckResult.evaluate(
                    f"ghost_kernel.delta_representation{label}", report.delta_residual, config.tolerance(REPRESENTATION_TOLERANCE)
                ),
                CheckResult.evaluate(
                    f"ghost_kernel.mixed_representation{label}", report.mixed_residual, config.tolerance(REPRESENTATION_TOLERANCE)
                ),
                CheckResult.evaluate(f"ghost_kernel.peak_offset{label}", report.peak_offset, config.tolerance(section.epsilon)),
            ]
        self._repository.save_json(
            GHOST_KERNEL_FILE,
            {"K": float(constants.mean()), "reports": [report.to_dict() for report in reports]},
        )
        return checks


__all__ = ["VerificationService", "random_element", "EXPECTED_SIGNS"]
