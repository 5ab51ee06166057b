"""Order-preserving parallel map used by every parameter sweep.

Results always come back in input order, so output is identical for any
worker count. Threads are used when the compiled kernel is active (it drops
the GIL); the numpy fallback gets a process pool instead.
"""

import os
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor

from . import eigensolver


def default_workers():
    return os.cpu_count() or 1


def ordered_map(fn, items, workers=1, backend=None):
    items = list(items)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    workers = min(workers, len(items))
    use_threads = (backend or eigensolver.DEFAULT_BACKEND) == "compiled"
    pool_cls = ThreadPoolExecutor if use_threads else ProcessPoolExecutor
    chunk = 1 if use_threads else max(1, len(items) // (4 * workers))
    with pool_cls(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
