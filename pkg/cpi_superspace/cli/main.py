#!/usr/bin/env python3
"""
Пакетный запуск проверок и расчётов.

Коды завершения: 0 все проверки в допусках, 1 проверка не пройдена
(сводка записана), 2 ошибка конфигурации или ввода-вывода.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from ..errors import ConfigError, CpiError
from ..models.run_config import COMMANDS, SUITES, SWEEPS, RunConfig, merge_overrides
from ..repositories import FileResultRepository
from ..services import RunService
from ..utils.settings_path import get_settings_path

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="cpi-superspace",
        description="Проверка тождеств суперпространства, классическая и квантовая эволюция.",
    )
    parser.add_argument(
        "command",
        nargs="?",
        choices=COMMANDS,
        help="Команда. Если не передана, берётся из конфигурации.",
    )
    parser.add_argument("--config", type=Path, help="JSON-конфигурация (по умолчанию settings.json).")
    parser.add_argument("--output-dir", help="Директория для результатов.")
    parser.add_argument("--seed", type=int, help="Начальное значение генератора случайных чисел.")
    parser.add_argument("--tolerance-scale", type=float, help="Множитель всех допусков.")
    parser.add_argument("--model", help="Модель: free, harmonic (ho), quartic, pendulum, cubic.")
    parser.add_argument("--q", type=float, help="Начальная координата q.")
    parser.add_argument("--p", type=float, help="Начальный импульс p.")
    parser.add_argument("--T", type=float, help="Длительность эволюции.")
    parser.add_argument("--suite", choices=SUITES, help="Набор проверок для verify.")
    parser.add_argument("--sweep", choices=SWEEPS, help="Свип для quantum: N, hbar или group.")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Уровень логирования.",
    )
    return parser.parse_args(argv)


def load_config_data(path: Optional[Path]) -> Dict[str, Any]:
    """
    Прочитать JSON-конфигурацию.

    Без явного пути используется settings.json, если он существует.
    """
    if path is None:
        path = get_settings_path()
        if not path.exists():
            return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Некорректный JSON в {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Конфигурация {path} должна быть JSON-объектом")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Конфигурация из файла с переопределениями флагами командной строки."""
    overrides = {
        "command": args.command,
        "seed": args.seed,
        "output_dir": args.output_dir,
        "tolerance_scale": args.tolerance_scale,
        "model.name": args.model,
        "initial.q": args.q,
        "initial.p": args.p,
        "span.T": args.T,
        "verify.suite": args.suite,
        "quantum.sweep": args.sweep,
    }
    return RunConfig.from_dict(merge_overrides(load_config_data(args.config), overrides))


def main(argv: Optional[list[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        config = build_config(args)
        repository = FileResultRepository(Path(config.output_dir))
        summary = RunService(repository).run(config)
    except (CpiError, ValueError, OSError) as exc:
        print(f"Ошибка: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    failed = summary.failed()
    print(
        f"{config.command}: {summary.status}, проверок {len(summary.checks)}, не пройдено {len(failed)}; "
        f"результаты в {repository.output_dir}"
    )
    for check in failed:
        print(f"  {check.check}: {check.residual:.3e} > {check.tolerance:.3e}", file=sys.stderr)
    return EXIT_OK if summary.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
