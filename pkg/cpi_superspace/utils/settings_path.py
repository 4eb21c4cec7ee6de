"""
Утилита для определения пути к файлу конфигурации по умолчанию.

Порядок поиска: переменная окружения CPI_SUPERSPACE_SETTINGS, затем
settings.json в корне проекта (рядом с run_app.py), затем
пользовательская директория данных ОС.
"""

import os
import sys
from pathlib import Path

SETTINGS_ENV = "CPI_SUPERSPACE_SETTINGS"
SETTINGS_NAME = "settings.json"
APP_DIR_NAME = "cpi-superspace"


def get_settings_path() -> Path:
    """
    Получить путь к файлу конфигурации по умолчанию.

    Returns:
        Path: путь к settings.json (файл может не существовать)
    """
    override = os.environ.get(SETTINGS_ENV)
    if override:
        return Path(override)

    # Корень проекта на два уровня выше cpi_superspace/utils/
    project_root = Path(__file__).resolve().parent.parent.parent
    local = project_root / SETTINGS_NAME
    if local.exists():
        return local
    return get_app_data_dir() / SETTINGS_NAME


def get_app_data_dir() -> Path:
    """
    Директория пользовательских данных в зависимости от ОС.

    - Windows: %APPDATA%\\cpi-superspace
    - macOS: ~/Library/Application Support/cpi-superspace
    - Linux: ~/.local/share/cpi-superspace
    """
    home = Path.home()
    if sys.platform == "win32":
        return home / "AppData" / "Roaming" / APP_DIR_NAME
    if sys.platform == "darwin":
        return home / "Library" / "Application Support" / APP_DIR_NAME
    return home / ".local" / "share" / APP_DIR_NAME
