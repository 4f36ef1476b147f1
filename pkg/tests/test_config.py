import logging
import os
from pathlib import Path

import pytest

from codelattice.config import AppConfig, load_config, validate_config


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in (
        "CODELATTICE_LOG_LEVEL",
        "CODELATTICE_LOG_FILE",
        "CODELATTICE_MAX_CODEWORDS",
        "CODELATTICE_MAX_CLASSIFY_LENGTH",
        "CODELATTICE_MAX_CANONICAL_LENGTH",
        "CODELATTICE_THREADS",
        "CODELATTICE_OUTPUT_DIR",
    ):
        monkeypatch.delenv(name, raising=False)


def test_defaults_are_valid(tmp_path: Path) -> None:
    config = load_config(str(tmp_path / "missing.env"))
    assert config.limits.max_classify_length == 32
    assert config.limits.max_syndrome_bits == 24
    assert config.runtime.threads >= 1
    assert validate_config(config)


def test_environment_overrides(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setenv("CODELATTICE_LOG_LEVEL", "debug")
    monkeypatch.setenv("CODELATTICE_MAX_CLASSIFY_LENGTH", "24")
    monkeypatch.setenv("CODELATTICE_MAX_CANONICAL_LENGTH", "48")
    monkeypatch.setenv("CODELATTICE_THREADS", "3")
    config = load_config(str(tmp_path / "missing.env"))
    assert config.logging.level == "DEBUG"
    assert config.limits.max_classify_length == 24
    assert config.limits.max_canonical_length == 48
    assert config.runtime.threads == 3


def test_dotenv_file_is_read(tmp_path: Path) -> None:
    env_file = tmp_path / ".env"
    env_file.write_text("CODELATTICE_MAX_CODEWORDS=1024\n")
    try:
        config = load_config(str(env_file))
        assert config.limits.max_codewords == 1024
    finally:
        os.environ.pop("CODELATTICE_MAX_CODEWORDS", None)


def test_bad_integer_keeps_default(monkeypatch: pytest.MonkeyPatch, tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    monkeypatch.setenv("CODELATTICE_THREADS", "many")
    with caplog.at_level(logging.WARNING):
        config = load_config(str(tmp_path / "missing.env"))
    assert config.runtime.threads == AppConfig().runtime.threads
    assert "CODELATTICE_THREADS" in caplog.text


def test_validate_rejects_bad_values() -> None:
    config = AppConfig()
    config.logging.level = "LOUD"
    assert not validate_config(config)

    config = AppConfig()
    config.limits.max_search_nodes = 0
    assert not validate_config(config)

    config = AppConfig()
    config.limits.max_canonical_length = 65
    assert not validate_config(config)
