"""Counter-based random streams: one independent generator per work item."""
import numpy as np

MASK64 = (1 << 64) - 1


def trial_rng(seed, index, stream=0):
    """Philox generator keyed by ``(seed, stream)`` and started at counter ``index``.

    The work-item index sits in the third counter word, so each stream has
    2^128 draws of room before it could meet the next one. Results depend
    only on ``(seed, stream, index)``, never on scheduling.
    """
    key = np.array([int(seed) & MASK64, int(stream) & MASK64], dtype=np.uint64)
    counter = np.array([0, 0, int(index) & MASK64, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def ordered_map(fn, items, threads=1):
    """``list(map(fn, items))`` on a thread pool; output order follows input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
