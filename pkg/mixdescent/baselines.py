"""
Comparators of the descent: Adaptive Importance Sampling over the same exploration machinery and the
Population Monte Carlo weight update, both in importance-ratio form.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.special import logsumexp

from .exceptions import DegenerateWeights
from .exploration import ExplorationSchedule, OuterLoop
from .mixture import GaussianKernel, ParticleMixture, kernel_log_matrix, log_mixture_density, log_mixture_from_kernel
from .trace import DescentTrace, make_generator

logger = logging.getLogger(__name__)


def importance_weights(log_ratios) -> np.ndarray:
    """
    Normalized exp(log_ratios), computed with max-subtraction

    :raises DegenerateWeights: when every ratio is zero or a ratio is not a number
    """
    log_ratios = np.asarray(log_ratios, dtype=float)
    if np.any(np.isnan(log_ratios)) or not np.any(log_ratios > -np.inf):
        raise DegenerateWeights("importance ratios are all zero or undefined")
    if np.any(log_ratios == np.inf):
        raise DegenerateWeights("infinite importance ratio at atoms {}".format(
            np.flatnonzero(log_ratios == np.inf).tolist()))
    return np.exp(log_ratios - logsumexp(log_ratios))


def ais_weights(atoms, proposal_log_density, target, rng: np.random.Generator = None) -> np.ndarray:
    """
    lambda_j proportional to p(theta_j, D) / q(theta_j)

    :param proposal_log_density: log q at each atom
    """
    proposal_log_density = np.asarray(proposal_log_density, dtype=float)
    if not np.all(np.isfinite(proposal_log_density)):
        raise DegenerateWeights("proposal density must be positive and finite at every atom")
    return importance_weights(np.asarray(target.log_density(atoms, rng=rng), dtype=float) - proposal_log_density)


class ImportanceSamplingLoop(OuterLoop):
    """
    Weights each phase's atoms against the density they were drawn from: q_0 first, then the previous
    phase's mixture smoothed by its kernel
    """

    def exploit(self, t, mix, kernel, seed):
        if self.previous is None:
            proposal = self.initial_sampler.log_density(mix.atoms)
        else:
            previous_mix, previous_kernel = self.previous
            proposal = log_mixture_density(previous_mix, previous_kernel, mix.atoms)
        return ais_weights(mix.atoms, proposal, self.target, rng=make_generator(seed))


def run_ais(target, schedule: ExplorationSchedule, initial_sampler, seed,
            alpha: float = 1.0, metrics=None) -> Tuple[ParticleMixture, DescentTrace]:
    """
    Adaptive Importance Sampling with the schedule, seeds and trace columns of `run_outer`

    :param initial_sampler: q_0 with `sample(count, rng)` and `log_density(ys)`
    :param alpha: order of the Renyi bound reported in the trace
    :param metrics: see `run_outer`
    """
    return ImportanceSamplingLoop(target, schedule, initial_sampler, alpha, metrics).run(seed)


def pmc_update_exact(problem, weights) -> np.ndarray:
    """
    lambda_j sum_i k(theta_j, y_i) p(y_i) / mu k(y_i), normalized
    """
    weights = np.asarray(weights, dtype=float)
    mixture = weights @ problem.kernel_matrix
    updated = weights * (problem.kernel_matrix @ (problem.target_masses / mixture))
    return updated / updated.sum()


def pmc_update_samples(mix: ParticleMixture, kernel: GaussianKernel, target, samples,
                       rng: np.random.Generator = None, control_variate: bool = False) -> np.ndarray:
    """
    Sample form of the Population Monte Carlo update

        lambda_j 1/M sum_m k(theta_j, Y_m) p(Y_m) / mu k(Y_m)^2

    With `control_variate` the term lambda_j (1 - 1/M sum_m k(theta_j, Y_m) / mu k(Y_m)), which has
    expectation zero and sums to zero over atoms, is added: the update then matches power descent run
    on gradients estimated without the known kernel mass.
    """
    log_kernel = kernel_log_matrix(mix.atoms, samples, kernel)
    log_mixture = log_mixture_from_kernel(log_kernel, mix.weights)
    log_target = np.asarray(target.log_density(samples, rng=rng), dtype=float)

    responsibilities = np.exp(log_kernel - log_mixture[:, None])
    importance = np.exp(log_target - log_mixture)
    factors = np.mean(responsibilities * importance[:, None], axis=0)
    if control_variate:
        factors = factors + 1 - np.mean(responsibilities, axis=0)

    updated = mix.weights * factors
    if not updated.sum() > 0:
        raise DegenerateWeights("population monte carlo update has no mass")
    return updated / updated.sum()
