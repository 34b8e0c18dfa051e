"""
Shared utilities package for Symmetric Census.

Contains error types, environment configuration, report serialization and the
partitioned process-pool helper.
"""

from .config import check_work, get_default_workers, get_field_ceiling, get_max_extension, get_work_ceiling
from .errors import ContractError
from .reports import build_report, render_csv, render_json, write_atomic
from .workers import map_partitions

__all__ = [
    # Configuration
    'check_work',
    'get_default_workers',
    'get_field_ceiling',
    'get_max_extension',
    'get_work_ceiling',

    # Errors
    'ContractError',

    # Reports
    'build_report',
    'render_csv',
    'render_json',
    'write_atomic',

    # Parallelism
    'map_partitions',
]
