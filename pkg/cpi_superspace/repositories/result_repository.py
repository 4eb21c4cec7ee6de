"""Репозиторий для записи результатов запуска"""

from __future__ import annotations

import csv
import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Iterable, List, Sequence

from ..errors import SerializationError
from ..models.verification import CheckResult, RunSummary
from ..utils.plot_data import emit_plot_data

logger = logging.getLogger(__name__)

SUMMARY_FILE = "summary.json"


class IResultRepository(ABC):
    """
    Интерфейс репозитория результатов.

    Определяет контракт записи артефактов запуска.
    """

    @abstractmethod
    def save_summary(self, summary: RunSummary) -> Path:
        """Записать сводку запуска"""

    @abstractmethod
    def load_summary(self) -> RunSummary:
        """Прочитать сводку запуска"""

    @abstractmethod
    def save_json(self, name: str, data: Any) -> Path:
        """Записать JSON-артефакт"""

    @abstractmethod
    def save_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """Записать таблицу CSV"""

    @abstractmethod
    def save_plot_data(self, name: str, result: Any, kind: str, config_hash: str) -> Path:
        """Записать файл данных для графика"""


class FileResultRepository(IResultRepository):
    """
    Репозиторий результатов в файловой системе.

    Все файлы пишутся в одну выходную директорию; JSON сериализуется
    с отсортированными ключами, поэтому одинаковые данные дают одинаковые байты.
    """

    def __init__(self, output_dir: Path):
        """
        Args:
            output_dir: выходная директория (создаётся при первой записи)
        """
        self._output_dir = Path(output_dir)

    @property
    def output_dir(self) -> Path:
        return self._output_dir

    def _path(self, name: str) -> Path:
        self._output_dir.mkdir(parents=True, exist_ok=True)
        return self._output_dir / name

    def save_summary(self, summary: RunSummary) -> Path:
        return self.save_json(SUMMARY_FILE, summary.to_dict())

    def load_summary(self) -> RunSummary:
        path = self._output_dir / SUMMARY_FILE
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        try:
            checks = [
                CheckResult(item["check"], item["status"], float(item["residual"]), float(item["tolerance"]))
                for item in data["checks"]
            ]
            return RunSummary(
                command=data["command"],
                config_hash=data["config_hash"],
                checks=checks,
                schema_version=int(data["schema_version"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SerializationError(f"Некорректная сводка {path}: {e}") from e

    def save_json(self, name: str, data: Any) -> Path:
        path = self._path(name)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")
        logger.debug("Записан %s", path)
        return path

    def save_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path = self._path(name)
        count = 0
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(list(header))
            for row in rows:
                writer.writerow([repr(float(value)) if isinstance(value, float) else value for value in row])
                count += 1
        logger.debug("Записан %s (%d строк)", path, count)
        return path

    def save_plot_data(self, name: str, result: Any, kind: str, config_hash: str) -> Path:
        return emit_plot_data(result, kind, self._path(name), config_hash)

    def list_artifacts(self) -> List[str]:
        if not self._output_dir.exists():
            return []
        return sorted(path.name for path in self._output_dir.iterdir() if path.is_file())
