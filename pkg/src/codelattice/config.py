"""Configuration management for the code-lattice toolkit."""

import logging
import os
from dataclasses import dataclass, field
from typing import Optional

from dotenv import load_dotenv


logger = logging.getLogger(__name__)


@dataclass
class LoggingConfig:
    """Logging configuration settings."""

    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file: Optional[str] = None


@dataclass
class LimitsConfig:
    """Resource caps for exhaustive computations."""

    max_codewords: int = 1 << 24  # exhaustive codeword enumeration
    max_classify_length: int = 32  # generate() refuses above this without force
    max_syndrome_bits: int = 24  # covering radius / coset tables
    max_canonical_length: int = 64
    max_search_nodes: int = 5_000_000  # canonical search tree
    max_lattice_nodes: int = 50_000_000  # short-vector enumeration tree


@dataclass
class RuntimeConfig:
    """Execution settings."""

    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    output_dir: str = "results"


@dataclass
class AppConfig:
    """Main application configuration."""

    logging: LoggingConfig = field(default_factory=LoggingConfig)
    limits: LimitsConfig = field(default_factory=LimitsConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)


_INT_SETTINGS: dict[str, tuple[str, str]] = {
    "CODELATTICE_MAX_CODEWORDS": ("limits", "max_codewords"),
    "CODELATTICE_MAX_CLASSIFY_LENGTH": ("limits", "max_classify_length"),
    "CODELATTICE_MAX_SYNDROME_BITS": ("limits", "max_syndrome_bits"),
    "CODELATTICE_MAX_CANONICAL_LENGTH": ("limits", "max_canonical_length"),
    "CODELATTICE_MAX_SEARCH_NODES": ("limits", "max_search_nodes"),
    "CODELATTICE_MAX_LATTICE_NODES": ("limits", "max_lattice_nodes"),
    "CODELATTICE_THREADS": ("runtime", "threads"),
}


def load_config(config_path: Optional[str] = None) -> AppConfig:
    """Load configuration from environment variables and an optional .env file.

    Args:
        config_path: Optional path to a dotenv file; the default search applies if None.

    Returns:
        AppConfig with all settings loaded.
    """
    load_dotenv(config_path)
    config = AppConfig()

    for env_name, (section, attr) in _INT_SETTINGS.items():
        raw = os.environ.get(env_name)
        if not raw:
            continue
        try:
            setattr(getattr(config, section), attr, int(raw))
        except ValueError:
            logger.warning(f"Invalid {env_name} value: {raw}, using default")

    log_level = os.environ.get("CODELATTICE_LOG_LEVEL")
    if log_level:
        config.logging.level = log_level.upper()

    log_file = os.environ.get("CODELATTICE_LOG_FILE")
    if log_file:
        config.logging.file = log_file

    output_dir = os.environ.get("CODELATTICE_OUTPUT_DIR")
    if output_dir:
        config.runtime.output_dir = os.path.expanduser(output_dir)

    return config


def setup_logging(config: LoggingConfig) -> None:
    """Configure logging based on the provided configuration.

    Args:
        config: Logging configuration settings.
    """
    log_level = getattr(logging, config.level, logging.INFO)

    handlers: list[logging.Handler] = []

    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter(config.format))
    handlers.append(console_handler)

    if config.file:
        try:
            file_handler = logging.FileHandler(config.file)
            file_handler.setLevel(log_level)
            file_handler.setFormatter(logging.Formatter(config.format))
            handlers.append(file_handler)
        except OSError as e:
            logger.error(f"Failed to create log file {config.file}: {e}")

    logging.basicConfig(
        level=log_level,
        format=config.format,
        handlers=handlers,
        force=True,
    )

    logger.debug(f"Logging configured with level: {config.level}")


def validate_config(config: AppConfig) -> bool:
    """Validate that the configuration is complete and valid.

    Args:
        config: Application configuration to validate.

    Returns:
        True if configuration is valid.
    """
    valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
    if config.logging.level not in valid_log_levels:
        logger.error(f"Invalid log level: {config.logging.level}")
        return False

    for name, value in vars(config.limits).items():
        if value < 1:
            logger.error(f"Limit {name} must be at least 1")
            return False

    if config.limits.max_canonical_length > 64:
        logger.error("max_canonical_length cannot exceed 64")
        return False

    if config.runtime.threads < 1:
        logger.error("threads must be at least 1")
        return False

    return True
