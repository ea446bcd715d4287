from __future__ import annotations

from collections.abc import Iterator

import pytest

from rurpi.config import Settings, SolveConfig, get_settings
from rurpi.executor import shutdown_executor
from rurpi.models.system import PolySystem
from rurpi.parser import parse_system

TOY_TEXT = "vars: x, y\nx + y - 3\nx*y - 2\n"


@pytest.fixture(autouse=True)
def thread_executor(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Keep every test on a small thread pool; process pools are slow to spin up."""
    monkeypatch.setenv("RUR_EXECUTOR", "thread")
    monkeypatch.setenv("RUR_THREADS", "2")
    get_settings.cache_clear()
    yield
    shutdown_executor()
    get_settings.cache_clear()


@pytest.fixture
def settings() -> Settings:
    return Settings(RUR_EXECUTOR="thread", RUR_THREADS=2)


@pytest.fixture
def solve_config() -> SolveConfig:
    return SolveConfig(threads=2, executor="thread")


@pytest.fixture
def toy_system() -> PolySystem:
    return parse_system(TOY_TEXT, "toy")
