# backend/tests/conftest.py

import json

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def write_json(tmp_path):
    """write_json(name, doc) -> path of a JSON file under tmp_path."""
    def _write(name: str, doc) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return _write
