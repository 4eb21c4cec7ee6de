"""Утилиты и вспомогательные функции"""

from .hashing import canonical_json, config_hash
from .plot_data import PLOT_KINDS, emit_plot_data, plot_table
from .settings_path import get_app_data_dir, get_settings_path

__all__ = [
    'canonical_json',
    'config_hash',
    'PLOT_KINDS',
    'emit_plot_data',
    'plot_table',
    'get_app_data_dir',
    'get_settings_path',
]
