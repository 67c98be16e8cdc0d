# tests/conftest.py
from __future__ import annotations

import numpy as np
import pytest

from core.config import get_settings


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Each test sees default settings, whatever the shell exports."""
    monkeypatch.delenv("QCOMM_SEED", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def dj_promise_pairs_k2() -> list[tuple[str, str]]:
    strings = [format(v, "04b") for v in range(16)]
    return [
        (x, y)
        for x in strings
        for y in strings
        if sum(a != b for a, b in zip(x, y)) in (0, 2)
    ]
