"""Shared pytest fixtures for test isolation."""

import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from linkspace import config as config_module

FIXTURES = Path(__file__).parent / "fixtures"

# The autouse isolation fixture is function-scoped; it holds no per-example state.
settings.register_profile(
    "linkspace",
    max_examples=100,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
    deadline=None,
)
# Full-scale property runs: LINKSPACE_HYPOTHESIS_PROFILE=full pytest
settings.register_profile("full", parent=settings.get_profile("linkspace"), max_examples=1000)
settings.load_profile(os.getenv("LINKSPACE_HYPOTHESIS_PROFILE", "linkspace"))


@pytest.fixture(autouse=True)
def isolate_config_path(
    tmp_path: Path,
    monkeypatch: pytest.MonkeyPatch,
    request: pytest.FixtureRequest,
) -> None:
    """Point config path and data dir to temp locations so user state doesn't affect tests."""
    monkeypatch.setenv("LINKSPACE_HOME", str(tmp_path / "home"))
    for name in (
        "LINKSPACE_SEED",
        "LINKSPACE_RESTARTS",
        "LINKSPACE_RESOLUTION",
        "LINKSPACE_WORKERS",
        "LINKSPACE_SAMPLES",
    ):
        monkeypatch.delenv(name, raising=False)
    if "test_config_cli.py" in request.node.nodeid:
        return
    path = tmp_path / "config.json"
    monkeypatch.setattr(config_module, "CONFIG_PATH", path)


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding the JSON graph and lengths fixtures."""
    return FIXTURES
