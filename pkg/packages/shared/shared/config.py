"""
Runtime configuration.

Ceilings and defaults come from the environment (a local .env file is honoured),
so a sweep can be re-tuned without touching code.
"""

import os
from dotenv import load_dotenv

from .errors import WorkCeilingExceeded

load_dotenv()

DEFAULT_WORK_CEILING = 1_000_000_000
DEFAULT_FIELD_CEILING = 65_536
DEFAULT_MAX_EXTENSION = 2
DEFAULT_WORKERS = 1


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw.replace('_', ''))
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def get_work_ceiling() -> int:
    """Largest number of elementary evaluations one enumeration may perform."""
    return _env_int('SYMCENSUS_WORK_CEILING', DEFAULT_WORK_CEILING)


def get_field_ceiling() -> int:
    """Largest field cardinality build_field accepts."""
    return _env_int('SYMCENSUS_FIELD_CEILING', DEFAULT_FIELD_CEILING)


def get_max_extension() -> int:
    return _env_int('SYMCENSUS_MAX_EXTENSION', DEFAULT_MAX_EXTENSION)


def get_default_workers() -> int:
    return _env_int('SYMCENSUS_WORKERS', DEFAULT_WORKERS)


def check_work(units: int, what: str) -> int:
    """Refuse an enumeration of `units` evaluations if it exceeds the ceiling."""
    ceiling = get_work_ceiling()
    if units > ceiling:
        raise WorkCeilingExceeded(
            f"{what}: {units} work units exceeds ceiling {ceiling} "
            f"(raise SYMCENSUS_WORK_CEILING or --work-ceiling)"
        )
    return units
