import json

import numpy as np
import pytest

from cpi_superspace.algebra import create_algebra


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def theta_table():
    return create_algebra(["θ", "θ̄"])


@pytest.fixture
def aux_table():
    return create_algebra(["g0", "g1", "g2", "g3"])


@pytest.fixture
def write_config(tmp_path):
    """Записать JSON-конфигурацию во временную директорию и вернуть путь."""

    def _write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
