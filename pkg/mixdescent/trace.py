import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

import numpy as np
import pandas as pd

from .settings import MIXDESCENT

LONG_COLUMNS = ['outer_step', 'inner_step', 'metric', 'value', 'seed', 'wall_ms']


@dataclass
class StepRecord:
    outer_step: int
    inner_step: int
    weights: Optional[np.ndarray] = None
    # learning rate used by the step leaving this state
    eta: Optional[float] = None
    metrics: Dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None
    wall_ms: float = 0.0


class DescentTrace:
    """
    Per-iteration record of a descent run.

    Records are kept in insertion order which is (outer_step, inner_step) order for every runner.
    """

    def __init__(self, records: List[StepRecord] = None):
        self.records = list(records or [])

    def record(self, outer_step: int, inner_step: int, weights=None, eta: float = None, seed: int = None,
               wall_ms: float = 0.0, **metrics) -> StepRecord:
        if weights is not None:
            weights = np.array(weights, dtype=float)
        entry = StepRecord(outer_step, inner_step, weights, eta, dict(metrics), seed, wall_ms)
        self.records.append(entry)
        return entry

    def extend(self, other: 'DescentTrace'):
        self.records.extend(other.records)

    def __len__(self):
        return len(self.records)

    def __iter__(self) -> Iterator[StepRecord]:
        return iter(self.records)

    def __getitem__(self, index) -> StepRecord:
        return self.records[index]

    @property
    def weights(self) -> List[np.ndarray]:
        return [r.weights for r in self.records if r.weights is not None]

    def metric(self, name: str) -> np.ndarray:
        return np.array([r.metrics.get(name, np.nan) for r in self.records], dtype=float)

    def rows(self):
        """
        Long format rows (outer_step, inner_step, metric, value, seed, wall_ms)
        """
        for r in self.records:
            values = dict(r.metrics)
            if r.eta is not None:
                values['eta'] = r.eta
            for name in sorted(values):
                yield r.outer_step, r.inner_step, name, values[name], r.seed, r.wall_ms

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.rows()), columns=LONG_COLUMNS)

    def __repr__(self):
        return "<DescentTrace records={}>".format(len(self.records))


@contextmanager
def stopwatch():
    """
    Measures wall time in milliseconds; yields a one-item list filled on exit.
    Reports 0 unless MIXDESCENT['RECORD_WALL_TIME'] is set, so that outputs stay deterministic.
    """
    elapsed = [0.0]
    start = time.perf_counter()
    try:
        yield elapsed
    finally:
        if MIXDESCENT['RECORD_WALL_TIME']:
            elapsed[0] = (time.perf_counter() - start) * 1000.0


def seed_value(seed_sequence: np.random.SeedSequence) -> int:
    """
    64-bit integer identifying a node of the seed tree, stored along trace rows
    """
    return int(seed_sequence.generate_state(1, dtype=np.uint64)[0])


def as_seed_sequence(seed) -> np.random.SeedSequence:
    """
    Fresh copy of a seed tree node: spawning counts children on the instance, so runs sharing a node
    would otherwise get different streams
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key, pool_size=seed.pool_size)
    return np.random.SeedSequence(seed)


def make_generator(seed_sequence: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence))
