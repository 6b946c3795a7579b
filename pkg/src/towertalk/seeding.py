"""Deterministic per-run random streams derived from one master seed."""

from __future__ import annotations

import numpy as np


def run_rng(master_seed: int, run_index: int) -> np.random.Generator:
    """Independent generator for run `run_index` under `master_seed`.

    The split is counter-based (SeedSequence spawn keys), so streams do not
    depend on scheduling order and parallel fan-out stays reproducible.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(run_index,)))
