from concurrent.futures import ThreadPoolExecutor

import numpy as np


def replicate_map(func, reps, parallel=1, chunk=64):
    """``[func(r) for r in range(reps)]`` as a float array, optionally threaded.

    Each replicate draws from its own counter-based stream, so the result
    is identical for every worker count.
    """
    reps = int(reps)
    workers = max(1, int(parallel))
    if workers == 1 or reps <= chunk:
        return np.array([func(r) for r in range(reps)], dtype=float)

    def run(start):
        return [func(r) for r in range(start, min(start + chunk, reps))]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, range(0, reps, chunk)))
    return np.array([v for part in parts for v in part], dtype=float)
