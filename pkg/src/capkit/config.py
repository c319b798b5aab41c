"""Run configuration shared by the command line and the scripts."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass
class RunConfig:
    """Defaults:

    - ``threads``: ``$CAPKIT_THREADS`` or 1.  Results never depend on it.
    - ``chunk_limit``: stop a scan after this many work chunks (None = no limit).
    - ``time_limit``: wall-clock seconds per scan (None = no limit).
    - ``catalog``: catalog directory, ``catalog``.
    - ``seed``: seed for randomized checks, 20240101.
    """

    threads: int | None = None
    chunk_limit: int | None = None
    time_limit: float | None = None
    catalog: str = "catalog"
    seed: int = 20240101

    def __post_init__(self):
        if self.threads is None:
            self.threads = int(os.environ.get("CAPKIT_THREADS", "1") or 1)
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.chunk_limit is not None and self.chunk_limit < 1:
            raise ValueError("chunk_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")

    def rng(self):
        import numpy as np

        return np.random.default_rng(self.seed)
