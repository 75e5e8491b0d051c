"""Worker-count control and a deterministic, order-preserving parallel map."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "COHERENCE_LAB_THREADS"


def worker_count() -> int:
    """Number of worker threads, capped by the COHERENCE_LAB_THREADS env var.

    An unset or unparsable value falls back to the CPU count.
    """
    raw = os.environ.get(ENV_THREADS, "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def ordered_map(fn, items):
    """Apply ``fn`` to every item, preserving input order in the result.

    Runs on a thread pool when more than one worker is configured. Results
    are collected positionally, so the output is identical to a serial map
    regardless of scheduling.
    """
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1 or len(items) < 4:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
