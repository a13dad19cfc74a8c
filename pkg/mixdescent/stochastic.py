"""
Stochastic descent: gradients b_j estimated by Monte Carlo from samples of the current mixture

    b^_j = 1/M sum_m [k(theta_j, Y_m) / mu k(Y_m)] f_alpha'(mu k(Y_m) / p(Y_m)),  Y_m ~ mu k

(the kernel mass term of f_alpha' is taken exact by default, see estimate_gradient) followed by the
same weight update as the exact descent.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from .divergence import _f_alpha_prime_log, _limit, elbo_renyi_bound
from .exact import apply_transform, reweight
from .exceptions import BoundUndefined, FlaggedGradient, MixdescentError
from .mixture import (GaussianKernel, ParticleMixture, kernel_log_matrix, log_mixture_from_kernel,
                      sample_mixture)
from .trace import DescentTrace, as_seed_sequence, make_generator, seed_value, stopwatch
from .transforms import Family, TransformConfig, is_kl, learning_rate

logger = logging.getLogger(__name__)


@dataclass
class GradientEstimate:
    values: np.ndarray
    sample_count: int
    undefined_mask: np.ndarray = None
    # log mu k(Y_m) - log p(Y_m) for every sample, kept for the bounds
    log_ratios: Optional[np.ndarray] = field(default=None, repr=False)
    # log((alpha - 1) b_j + 1) when the kernel mass is taken exact
    log_mass: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("gradient estimate needs at least one sample")
        self.values = np.asarray(self.values, dtype=float)
        if self.undefined_mask is None:
            self.undefined_mask = ~np.isfinite(self.values)
        self.values = np.where(self.undefined_mask, np.nan, self.values)

    @property
    def flagged(self) -> bool:
        return bool(np.any(self.undefined_mask))

    @property
    def flagged_atoms(self):
        return np.flatnonzero(self.undefined_mask).tolist()

    def summary(self) -> dict:
        if self.flagged:
            return {'b_mean': np.nan, 'b_min': np.nan, 'b_max': np.nan}
        return {'b_mean': float(self.values.mean()), 'b_min': float(self.values.min()),
                'b_max': float(self.values.max())}


def estimate_gradient(mix: ParticleMixture, kernel: GaussianKernel, target, samples, alpha: float,
                      rng: np.random.Generator = None, kernel_mass: bool = True) -> GradientEstimate:
    """
    Monte Carlo estimate of the gradient at every atom of `mix`

    For alpha != 1 the gradient splits as

        [int k(theta_j, y) (mu k / p)^(alpha - 1) dy - int k(theta_j, y) dy] / (alpha - 1)

    With `kernel_mass` the second integral takes its known value 1 and only the first one is estimated,
    in log-domain, and kept as `log_mass` = log((alpha - 1) b^_j + 1): the power update and the Renyi
    bound stay exact even when p is many orders of magnitude below mu k. Without it both integrals are
    estimated from the samples, which is the plain average of k / mu k * f_alpha'(mu k / p).

    :param target: TargetModel; `rng` is passed on to it (minibatch selection)
    :param samples: M x d points drawn from mu k
    """
    samples = np.asarray(samples, dtype=float)
    log_kernel = kernel_log_matrix(mix.atoms, samples, kernel)
    log_mixture = log_mixture_from_kernel(log_kernel, mix.weights)
    log_target = np.asarray(target.log_density(samples, rng=rng), dtype=float)

    # -inf target gives +inf log ratio: f' is finite for alpha < 1 and infinite otherwise
    log_ratios = log_mixture - log_target
    # log of k(theta_j, Y_m) / mu k(Y_m), stable since log_mixture is a logsumexp over the same row
    log_responsibilities = log_kernel - log_mixture[:, None]

    with np.errstate(invalid='ignore', over='ignore', divide='ignore'):
        if kernel_mass and _limit(alpha) != 1:
            log_terms = log_responsibilities + (alpha - 1) * log_ratios[:, None]
            log_mass = logsumexp(log_terms, axis=0) - np.log(len(samples))
            values = np.expm1(log_mass) / (alpha - 1)
        else:
            log_mass = None
            values = np.mean(np.exp(log_responsibilities) * _f_alpha_prime_log(log_ratios, alpha)[:, None], axis=0)

    return GradientEstimate(values, samples.shape[0], ~np.isfinite(values), log_ratios, log_mass)


def sample_bounds(estimate: GradientEstimate, weights, alpha: float) -> Tuple[float, float]:
    """
    (Renyi bound at alpha, ELBO) from one gradient estimate; nan where undefined
    """
    try:
        renyi = elbo_renyi_bound(weights, estimate, alpha)
    except BoundUndefined as e:
        logger.debug("Renyi bound undefined: %s", e)
        renyi = np.nan

    elbo = np.nan
    if estimate.log_ratios is not None:
        with np.errstate(invalid='ignore'):
            elbo = float(-np.mean(estimate.log_ratios))
        if not np.isfinite(elbo):
            elbo = np.nan
    if _limit(alpha) == 1 and not np.isnan(renyi):
        elbo = renyi
    return renyi, elbo


def update_weights(weights, estimate, config: TransformConfig, eta: float) -> np.ndarray:
    """
    lambda_j Gamma(b^_j + kappa) normalized; the arithmetic of the exact step

    :param estimate: GradientEstimate or a plain gradient vector
    :raises FlaggedGradient: when the estimate has non-finite entries
    """
    if isinstance(estimate, GradientEstimate):
        if estimate.flagged:
            raise FlaggedGradient(estimate.flagged_atoms)
        if estimate.log_mass is not None and config.family is Family.POWER and config.kappa == 0 \
                and not is_kl(config.alpha):
            return reweight(weights, config.transform.log_gamma_from_log_base(estimate.log_mass, eta))
        estimate = estimate.values
    return apply_transform(weights, estimate, config, eta)


class _GradientRangeWatch:
    """
    Exponential transform with alpha != 1 converges only for eta < 1 / (|alpha - 1| b_infty + 1);
    without a user supplied bound the observed gradients stand in for it.
    """

    def __init__(self, config: TransformConfig):
        self.config = config
        self.active = config.family is Family.EXPONENTIAL and not is_kl(config.alpha)
        self.warned = False

    def observe(self, estimate: GradientEstimate, eta: float):
        if not self.active or self.warned or estimate.flagged:
            return
        b_observed = float(np.max(np.abs(estimate.values + self.config.kappa)))
        limit = 1 / (abs(self.config.alpha - 1) * b_observed + 1)
        if eta >= limit:
            logger.warning("Learning rate %g above %g implied by observed |b| = %g; convergence is not guaranteed",
                           eta, limit, b_observed)
            self.warned = True


def run_inner(mix: ParticleMixture, kernel: GaussianKernel, target, steps: int, samples: int,
              config: TransformConfig, seed, outer_step: int = 0, skip_flagged: bool = False):
    """
    Exploitation: `steps` stochastic updates of the weights at fixed atoms

    :param seed: SeedSequence (or int) of this run, one child sequence is spawned per step
    :param skip_flagged: leave the weights unchanged on non-finite gradient estimates instead of aborting
    :return: (final weights, trace with one record per step)
    """
    seed = as_seed_sequence(seed)
    trace = DescentTrace()
    weights = np.array(mix.weights)
    watch = _GradientRangeWatch(config)

    for n, step_seed in enumerate(seed.spawn(steps), start=1):
        rng = make_generator(step_seed)
        eta = learning_rate(config, n, steps)
        current = mix.with_weights(weights)
        with stopwatch() as elapsed:
            points = sample_mixture(current, kernel, samples, rng)
            estimate = estimate_gradient(current, kernel, target, points, config.alpha, rng=rng)
            renyi, elbo = sample_bounds(estimate, weights, config.alpha)

            updated = weights
            if estimate.flagged:
                if not skip_flagged:
                    error = FlaggedGradient(estimate.flagged_atoms, step=n)
                    error.partial_trace = trace
                    raise error
                logger.info("Skipping step %d: gradient undefined at atoms %s", n, estimate.flagged_atoms)
            else:
                watch.observe(estimate, eta)
                try:
                    updated = update_weights(weights, estimate, config, eta)
                except MixdescentError as e:
                    e.partial_trace = trace
                    raise

        trace.record(outer_step, n, weights, eta=eta, seed=seed_value(step_seed), wall_ms=elapsed[0],
                     renyi_bound=renyi, elbo=elbo, flagged=float(estimate.flagged), **estimate.summary())
        weights = updated

    return weights, trace


def averaged_iterate(trace: DescentTrace, weights_policy: str = 'learning_rate') -> np.ndarray:
    """
    sum_n w_n lambda_n over the recorded iterates

    :param weights_policy: 'learning_rate' for w_n = eta_n / sum eta, 'uniform' for the plain average
    """
    records = [r for r in trace if r.weights is not None]
    if not records:
        raise ValueError("cannot average an empty trace")

    iterates = np.stack([r.weights for r in records])
    if weights_policy == 'uniform':
        coefficients = np.ones(len(records))
    elif weights_policy == 'learning_rate':
        coefficients = np.array([r.eta if r.eta is not None else 0.0 for r in records], dtype=float)
        if not coefficients.sum() > 0:
            coefficients = np.ones(len(records))
    else:
        raise ValueError("unknown weights policy {!r}".format(weights_policy))

    coefficients = coefficients / coefficients.sum()
    averaged = coefficients @ iterates
    return averaged / averaged.sum()
