"""Канонический JSON и хеш конфигурации."""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(data: Any) -> str:
    """JSON с отсортированными ключами и без пробелов."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash(data: Any) -> str:
    """SHA-256 канонического JSON; ``data`` может иметь метод ``to_dict``."""
    if hasattr(data, "to_dict"):
        data = data.to_dict()
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()
