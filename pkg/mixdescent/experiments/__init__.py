"""
Replicated experiment runners

Seed tree: master_seed -> one SeedSequence per replicate (spawned) -> the outer loop of every method
run on that replicate. Methods of one replicate share its seed so comparisons between them are paired.
"""
import logging
import os
from abc import abstractmethod
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional

import numpy as np
import pandas as pd

from mixdescent.baselines import run_ais
from mixdescent.config import ExperimentConfig, MethodSpec
from mixdescent.exceptions import MixdescentError
from mixdescent.exploration import ExplorationSchedule, run_outer
from mixdescent.exporters import FileExporter
from mixdescent.plugins import Interface
from mixdescent.settings import MIXDESCENT
from mixdescent.trace import DescentTrace

logger = logging.getLogger(__name__)


def replicate_seeds(master_seed: int, count: int) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(master_seed).spawn(count)


@dataclass
class RunTask:
    """
    One (method, replicate) run; picklable so that it can be sent to a worker process
    """
    slug: str
    replicate: int
    method: MethodSpec
    target: Any
    initial_sampler: Any
    schedule: ExplorationSchedule
    seed: np.random.SeedSequence
    transform: Any = None
    carry_weights: bool = False
    skip_flagged: bool = False
    b_infty: Optional[float] = None
    override: bool = False
    metrics: Optional[Callable] = None


@dataclass
class RunResult:
    task: RunTask
    trace: DescentTrace
    error: Optional[MixdescentError] = None


def execute(task: RunTask) -> RunResult:
    """
    Runs the task; numerical failures are returned along the partial trace instead of raised
    """
    logger.info("Running %s replicate %d", task.slug, task.replicate)
    try:
        if task.method.name == 'ais':
            _, trace = run_ais(task.target, task.schedule, task.initial_sampler, task.seed, alpha=task.method.alpha,
                               metrics=task.metrics)
        else:
            _, trace = run_outer(task.target, task.schedule, task.transform, task.initial_sampler, task.seed,
                                 carry_weights=task.carry_weights, skip_flagged=task.skip_flagged,
                                 b_infty=task.b_infty, override=task.override, metrics=task.metrics)
    except MixdescentError as e:
        return RunResult(task, e.partial_trace or DescentTrace(), e)
    return RunResult(task, trace)


class Experiment(Interface):
    slug_suffix = 'Experiment'

    # trace metric -> CSV column, in column order after `replicate` and `t`
    columns: Dict[str, str] = {}

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.rows: Dict[str, List[dict]] = {}
        self.meta: Dict[str, Any] = {}

    @abstractmethod
    def tasks(self) -> Iterable[RunTask]:
        pass

    def run_tasks(self, tasks: List[RunTask]) -> Iterator[RunResult]:
        """
        Results in task order whatever the number of workers
        """
        workers = MIXDESCENT['WORKERS']
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                yield from pool.map(execute, tasks)
        else:
            yield from map(execute, tasks)

    def collect(self, result: RunResult):
        rows = self.rows.setdefault(result.task.slug, [])
        for record in result.trace:
            row = {'replicate': result.task.replicate, 't': record.outer_step}
            for metric, column in self.columns.items():
                row[column] = record.metrics.get(metric, np.nan)
            row['wall_ms'] = record.wall_ms
            rows.append(row)

    def frames(self) -> Dict[str, pd.DataFrame]:
        header = ['replicate', 't'] + list(self.columns.values()) + ['wall_ms']
        frames = {slug: pd.DataFrame(rows, columns=header) for slug, rows in self.rows.items()}
        if frames:
            frames['summary'] = self.summary(frames)
        return frames

    def summary(self, frames: Dict[str, pd.DataFrame]) -> pd.DataFrame:
        """
        Per-t means over replicates of every table
        """
        parts = []
        for slug in sorted(frames):
            means = frames[slug].drop(columns=['replicate', 'wall_ms']).groupby('t', as_index=False).mean()
            means.insert(0, 'run', slug)
            parts.append(means)
        return pd.concat(parts, ignore_index=True)

    def run(self) -> List[str]:
        """
        :return: paths of the written files
        """
        for result in self.run_tasks(list(self.tasks())):
            self.collect(result)
            if result.error is not None:
                logger.error("%s replicate %d failed: %s", result.task.slug, result.task.replicate, result.error)
                self.meta['status'] = 'failed: {}'.format(result.error)
                self.export()
                raise result.error
        self.meta['status'] = 'complete'
        return self.export()

    def export(self) -> List[str]:
        output = self.config.output_dir
        exporter_class = FileExporter.get(self.config.export_format)
        paths = exporter_class(self.frames()).export(output)
        paths.append(self.write_meta(output))
        logger.info("Wrote %d files to %s", len(paths), output)
        return paths

    def write_meta(self, output: str) -> str:
        os.makedirs(output, exist_ok=True)
        path = os.path.join(output, 'meta.txt')
        meta = {
            'experiment': self.config.experiment,
            'config_hash': self.config.hash,
            'master_seed': self.config.master_seed,
            'code_version': MIXDESCENT['CODE_VERSION'],
        }
        meta.update(self.meta)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            for key, value in meta.items():
                f.write('{}: {}\n'.format(key, value))
        return path

    def method_task(self, slug: str, replicate: int, method: MethodSpec, seed, target, initial_sampler,
                    metrics=None) -> RunTask:
        config = self.config
        return RunTask(
            slug=slug, replicate=replicate, method=method, target=target, initial_sampler=initial_sampler,
            schedule=config.schedule, seed=seed,
            transform=None if method.name == 'ais' else config.transform_config(method),
            carry_weights=config.carry_weights, skip_flagged=config.skip_flagged, b_infty=config.b_infty,
            override=config.warn_only, metrics=metrics)


def get_experiment(config: ExperimentConfig) -> Experiment:
    # imported for registration of the implementations
    from . import blr, oracle, toy  # NOQA
    return Experiment.get(config.experiment)(config)
