"""Результаты проверок и сводка запуска"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = 1
PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class CheckResult:
    """
    Результат одной численной проверки.

    Attributes:
        check: имя проверки
        status: ``pass`` или ``fail``
        residual: остаток (для точных тождеств 0)
        tolerance: допуск
    """

    check: str
    status: str
    residual: float
    tolerance: float

    @classmethod
    def evaluate(cls, check: str, residual: float, tolerance: float) -> "CheckResult":
        residual = float(residual)
        passed = math.isfinite(residual) and residual <= tolerance
        return cls(check=check, status=PASS if passed else FAIL, residual=residual, tolerance=float(tolerance))

    @classmethod
    def condition(cls, check: str, ok: bool, residual: float = 0.0) -> "CheckResult":
        """Логическая проверка (например, монотонность) без числового допуска."""
        return cls(check=check, status=PASS if ok else FAIL, residual=float(residual), tolerance=0.0)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict[str, Any]:
        residual = self.residual if math.isfinite(self.residual) else str(self.residual)
        return {"check": self.check, "status": self.status, "residual": residual, "tolerance": self.tolerance}


@dataclass(frozen=True)
class IdentityRecord:
    """Запись о проверке символьного тождества."""

    identity: str
    model: str
    residual_terms: int
    max_residual: float
    N: Optional[int] = None
    kinetic: Optional[str] = None
    exact: bool = True

    @property
    def holds(self) -> bool:
        return self.residual_terms == 0

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "identity": self.identity,
            "model": self.model,
            "residual_terms": self.residual_terms,
            "max_residual": self.max_residual,
            "exact": self.exact,
        }
        if self.N is not None:
            data["N"] = self.N
        if self.kinetic is not None:
            data["kinetic"] = self.kinetic
        return data


@dataclass
class RunSummary:
    """Машиночитаемая сводка запуска, схема версии 1."""

    command: str
    config_hash: str
    checks: List[CheckResult] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def status(self) -> str:
        return PASS if self.passed else FAIL

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config_hash": self.config_hash,
            "status": self.status,
            "checks": [check.to_dict() for check in self.checks],
        }


__all__ = ["SCHEMA_VERSION", "PASS", "FAIL", "CheckResult", "IdentityRecord", "RunSummary"]
