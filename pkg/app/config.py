"""
Configuration management for the Signed Qubit Entropy toolkit
Environment-driven defaults, optional key=value run files, command-line overrides
"""

import os
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values, load_dotenv

# Load environment variables
basedir = os.path.abspath(os.path.dirname(__file__))
load_dotenv(os.path.join(basedir, '.env'))

ENV_PREFIX = 'SIGNED_QUBIT_'


def _env_float(name: str, default: float) -> float:
    return float(os.environ.get(ENV_PREFIX + name, default))


def _env_int(name: str, default: int) -> int:
    return int(os.environ.get(ENV_PREFIX + name, default))


class Config:
    """Base configuration class with common settings."""

    # Representation tolerances
    TOL_SUM = _env_float('TOL_SUM', 1e-12)
    TOL_HERM = _env_float('TOL_HERM', 1e-12)
    TOL_PSD = _env_float('TOL_PSD', 1e-12)

    # Solver tolerances
    TOL_GRAD = _env_float('TOL_GRAD', 1e-12)
    TOL_GAP = _env_float('TOL_GAP', 1e-9)
    TOL_FEAS = _env_float('TOL_FEAS', 1e-10)
    TOL_KKT = _env_float('TOL_KKT', 1e-8)
    MAX_ITER = _env_int('MAX_ITER', 200)

    # Oracle configuration
    TOL_ENTROPY = _env_float('TOL_ENTROPY', 1e-9)
    TOL_BISECT = _env_float('TOL_BISECT', 1e-8)
    K_MAX = _env_int('K_MAX', 5)

    # Multistart configuration
    SEED = _env_int('SEED', 42)
    N_STARTS = _env_int('N_STARTS', 100)

    # Output configuration
    OUTPUT_FORMAT = os.environ.get(ENV_PREFIX + 'OUTPUT_FORMAT', 'json')
    SCHEMA_VERSION = '1.0'

    # Logging Configuration
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'WARNING')
    LOG_FORMAT = os.environ.get('LOG_FORMAT', 'json')
    SENTRY_DSN = os.environ.get('SENTRY_DSN')
    ENVIRONMENT = os.environ.get('SIGNED_QUBIT_ENV', 'production')


class DevelopmentConfig(Config):
    """Development environment configuration."""
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'DEBUG')
    LOG_FORMAT = 'console'
    ENVIRONMENT = 'development'


class TestingConfig(Config):
    """Testing environment configuration."""
    LOG_LEVEL = 'WARNING'
    SENTRY_DSN = None
    ENVIRONMENT = 'testing'


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'default': Config
}


def select_config(name: Optional[str] = None) -> type:
    """Config class for ``name``, by default the SIGNED_QUBIT_ENV environment variable."""
    name = name if name is not None else os.environ.get('SIGNED_QUBIT_ENV', 'default')
    return config.get(name, Config)


@dataclass(frozen=True)
class RunConfig:
    """Settings of a single command-line run."""
    tol_entropy: float
    tol_gap: float
    tol_feas: float
    k_max: int
    seed: int
    output_format: str = 'json'
    timestamp: bool = True


def _defaults(base: type) -> Dict[str, Any]:
    return {
        'tol_entropy': base.TOL_ENTROPY,
        'tol_gap': base.TOL_GAP,
        'tol_feas': base.TOL_FEAS,
        'k_max': base.K_MAX,
        'seed': base.SEED,
        'output_format': base.OUTPUT_FORMAT,
        'timestamp': True,
    }


def load_run_config(config_file: Optional[str] = None,
                    overrides: Optional[Mapping[str, Any]] = None,
                    base: type = Config) -> RunConfig:
    """
    Build a validated RunConfig.

    Precedence: explicit overrides (command-line flags), then the key=value
    config file, then the environment-backed ``base`` defaults.

    Args:
        config_file: Optional path to a file of ``key=value`` lines
        overrides: Values given on the command line; ``None`` entries are ignored
        base: Config class supplying defaults

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: on unknown keys or values failing validation
    """
    from marshmallow import ValidationError

    from app.exceptions import ConfigError
    from app.schemas import RunConfigSchema

    values: Dict[str, Any] = _defaults(base)

    if config_file:
        try:
            file_values = dotenv_values(config_file)
        except OSError as e:
            raise ConfigError(f"Cannot read config file {config_file}: {e}")
        values.update({key.strip().lower(): value for key, value in file_values.items()
                       if value is not None})

    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})

    try:
        loaded = RunConfigSchema().load(values)
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {e.messages}", errors=e.messages)

    return RunConfig(**loaded)
