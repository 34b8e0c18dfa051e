"""
Partitioned enumeration over a process pool.

Each caller splits its search space into independent partitions, maps a
top-level worker function over them and merges the partial tallies by addition.
Results are returned in partition order, so merged output never depends on the
pool size.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar('T')
R = TypeVar('R')


def map_partitions(fn: Callable[[T], R], partitions: Sequence[T], workers: int = 1) -> List[R]:
    """Apply fn to every partition, in-process when workers <= 1."""
    if workers <= 1 or len(partitions) <= 1:
        return [fn(part) for part in partitions]

    max_workers = min(workers, len(partitions))
    with ProcessPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(fn, partitions))
