"""
Outer loop alternating exploitation (stochastic weight descent at fixed atoms) and exploration
(resampling atoms by their weights and perturbing them with the Gaussian kernel).

Schedules index exploitation phases t = 0..T; T explorations separate them.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .exact import require_admissible
from .exceptions import MixdescentError
from .mixture import GaussianKernel, ParticleMixture, sample_mixture, select_atoms
from .stochastic import estimate_gradient, run_inner, sample_bounds
from .trace import DescentTrace, as_seed_sequence, make_generator, seed_value, stopwatch
from .transforms import TransformConfig, validate_convergence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExplorationSchedule:
    outer_steps: int
    particles: Tuple[int, ...]
    samples: Tuple[int, ...]
    inner_steps: int
    bandwidth_scale: float = 1.0
    # samples behind the recorded bounds, M_t when None
    evaluation_samples: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'particles', tuple(int(j) for j in self.particles))
        object.__setattr__(self, 'samples', tuple(int(m) for m in self.samples))
        if self.outer_steps < 1:
            raise ValueError("at least one outer step is needed, got {}".format(self.outer_steps))
        length = self.outer_steps + 1
        if len(self.particles) != length or len(self.samples) != length:
            raise ValueError("particle and sample schedules must have {} entries".format(length))
        if min(self.particles) < 1 or min(self.samples) < 1:
            raise ValueError("particle and sample counts must be >= 1")
        if self.inner_steps < 0:
            raise ValueError("inner steps must be >= 0")
        if not self.bandwidth_scale > 0:
            raise ValueError("bandwidth scale must be positive")
        if self.evaluation_samples is not None and self.evaluation_samples < 1:
            raise ValueError("evaluation samples must be >= 1")

    @classmethod
    def build(cls, outer_steps: int, particles: int, samples: int, inner_steps: int,
              growth: int = 0, bandwidth_scale: float = 1.0,
              evaluation_samples: int = None) -> 'ExplorationSchedule':
        """
        J_t = particles + growth * t and M_t = samples + growth * t
        """
        steps = range(outer_steps + 1)
        return cls(outer_steps, tuple(particles + growth * t for t in steps),
                   tuple(samples + growth * t for t in steps), inner_steps, bandwidth_scale, evaluation_samples)

    @classmethod
    def from_dict(cls, options: dict) -> 'ExplorationSchedule':
        return cls.build(int(options['outer_steps']), int(options['particles']), int(options['samples']),
                         int(options['inner_steps']), int(options.get('growth', 0)),
                         float(options.get('bandwidth_scale', 1.0)),
                         evaluation_samples=int(options['evaluation_samples'])
                         if options.get('evaluation_samples') is not None else None)


def bandwidth(J: int, d: int, h0: float = 1.0) -> float:
    """
    h = h0 * J^(-1 / (4 + d))
    """
    if J < 1 or d < 1:
        raise ValueError("particle count and dimension must be >= 1, got J={}, d={}".format(J, d))
    if not h0 > 0:
        raise ValueError("bandwidth scale must be positive")
    return float(h0 * J ** (-1.0 / (4 + d)))


def resample(mix: ParticleMixture, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    `count` atoms drawn i.i.d. with probabilities lambda (multinomial resampling)
    """
    return mix.atoms[select_atoms(mix.weights, count, rng)]


def perturb(atoms, h: float, rng: np.random.Generator) -> np.ndarray:
    if not h > 0:
        raise ValueError("bandwidth must be positive, got {!r}".format(h))
    atoms = np.asarray(atoms, dtype=float)
    return atoms + h * rng.standard_normal(atoms.shape)


def explore(mix: ParticleMixture, count: int, h: float, rng: np.random.Generator):
    """
    Resample then perturb; returns the new atoms and the index of the atom each one was drawn from
    """
    ancestors = select_atoms(mix.weights, count, rng)
    return perturb(mix.atoms[ancestors], h, rng), ancestors


def evaluate_bounds(mix: ParticleMixture, kernel: GaussianKernel, target, count: int, alpha: float,
                    rng: np.random.Generator):
    """
    (Renyi bound at alpha, ELBO) of mu k from one fresh gradient estimate
    """
    points = sample_mixture(mix, kernel, count, rng)
    estimate = estimate_gradient(mix, kernel, target, points, alpha, rng=rng)
    return sample_bounds(estimate, mix.weights, alpha)


class OuterLoop:
    """
    Shared plumbing of the descent and importance sampling outer loops: seed tree, bandwidths,
    exploration and per outer step records. Subclasses define the weights of one phase.
    """

    def __init__(self, target, schedule: ExplorationSchedule, initial_sampler, alpha: float, metrics=None):
        """
        :param metrics: optional callable (mixture, kernel, rng) -> dict of extra values recorded per outer step
        """
        self.target = target
        self.schedule = schedule
        self.initial_sampler = initial_sampler
        self.alpha = alpha
        self.metrics = metrics

    # (mixture, kernel) of the previous exploitation phase, None during the first one
    previous = None

    def exploit(self, t: int, mix: ParticleMixture, kernel: GaussianKernel, seed) -> np.ndarray:
        raise NotImplementedError()

    def initial_weights(self, atoms, ancestors) -> np.ndarray:
        return np.full(len(atoms), 1.0 / len(atoms))

    def run(self, seed) -> Tuple[ParticleMixture, DescentTrace]:
        """
        Seed tree: run seed -> one sequence per outer step -> (exploration, bounds, exploitation) streams
        """
        seed = as_seed_sequence(seed)
        schedule = self.schedule
        trace = DescentTrace()

        initial_rng = make_generator(seed.spawn(1)[0])
        atoms = self.initial_sampler.sample(schedule.particles[0], initial_rng)
        self.previous = None
        mix = None
        ancestors = None

        for t, step_seed in enumerate(seed.spawn(schedule.outer_steps + 1)):
            explore_seed, bounds_seed, exploit_seed = step_seed.spawn(3)
            J, M = schedule.particles[t], schedule.samples[t]
            evaluated = schedule.evaluation_samples or M
            h = bandwidth(J, atoms.shape[1], schedule.bandwidth_scale)
            kernel = GaussianKernel(h)

            if t > 0:
                atoms, ancestors = explore(mix, J, self.previous[1].bandwidth, make_generator(explore_seed))

            with stopwatch() as elapsed:
                bounds_rng = make_generator(bounds_seed)
                start = ParticleMixture(atoms, self.initial_weights(atoms, ancestors))
                renyi_before, elbo_before = evaluate_bounds(start, kernel, self.target, evaluated,
                                                             self.alpha, bounds_rng)
                try:
                    weights = self.exploit(t, start, kernel, exploit_seed)
                except MixdescentError as e:
                    e.partial_trace = trace
                    raise
                mix = start.with_weights(weights)
                renyi, elbo = evaluate_bounds(mix, kernel, self.target, evaluated, self.alpha, bounds_rng)

            extra = self.metrics(mix, kernel, bounds_rng) if self.metrics else {}

            trace.record(t, 0, mix.weights, seed=seed_value(step_seed), wall_ms=elapsed[0],
                         renyi_bound_before=renyi_before, elbo_before=elbo_before,
                         renyi_bound=renyi, elbo=elbo, particles=float(J), samples=float(M), bandwidth=h, **extra)
            logger.debug("Outer step %d: J=%d h=%.4g renyi bound %.6g -> %.6g", t, J, h, renyi_before, renyi)
            self.previous = (mix, kernel)

        return mix, trace


class DescentLoop(OuterLoop):
    def __init__(self, target, schedule: ExplorationSchedule, initial_sampler, config: TransformConfig,
                 carry_weights: bool = False, skip_flagged: bool = False, metrics=None):
        super().__init__(target, schedule, initial_sampler, config.alpha, metrics)
        self.config = config
        self.carry_weights = carry_weights
        self.skip_flagged = skip_flagged

    def initial_weights(self, atoms, ancestors):
        if self.carry_weights and ancestors is not None:
            # each new atom inherits the weight of the atom it was resampled from
            weights = self.previous[0].weights[ancestors]
            return weights / weights.sum()
        return super().initial_weights(atoms, ancestors)

    def exploit(self, t, mix, kernel, seed):
        weights, _ = run_inner(mix, kernel, self.target, self.schedule.inner_steps, self.schedule.samples[t],
                               self.config, seed, outer_step=t, skip_flagged=self.skip_flagged)
        return weights


def run_outer(target, schedule: ExplorationSchedule, config: TransformConfig, initial_sampler, seed,
              carry_weights: bool = False, skip_flagged: bool = False, b_infty: float = None,
              override: bool = False, metrics=None) -> Tuple[ParticleMixture, DescentTrace]:
    """
    Alternate exploitation and exploration over the schedule

    :param initial_sampler: q_0, anything with `sample(count, rng)`
    :param seed: master SeedSequence or int of this run
    :param carry_weights: new atoms inherit the optimized weight of the atom they were resampled from
    :param override: run even when the configuration is not admissible for convergence
    :param metrics: callable (mixture, kernel, rng) -> dict evaluated after every exploitation phase
    :return: (final mixture, trace with one record per exploitation phase)
    """
    require_admissible(validate_convergence(config, b_infty), override)
    loop = DescentLoop(target, schedule, initial_sampler, config, carry_weights, skip_flagged, metrics)
    return loop.run(seed)

