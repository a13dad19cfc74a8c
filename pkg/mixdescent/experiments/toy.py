import logging

import numpy as np

from mixdescent.experiments import Experiment, replicate_seeds
from mixdescent.targets import GaussianMixtureTarget, GaussianSampler

logger = logging.getLogger(__name__)


class ToyExperiment(Experiment):
    """
    Gaussian mixture target with a known normalizing constant, one table per (method, dimension)
    """

    columns = {
        'renyi_bound': 'renyi_bound',
        # alpha = 1 bound from the same samples
        'elbo': 'log_likelihood_estimate',
    }

    def target(self, dim: int) -> GaussianMixtureTarget:
        return GaussianMixtureTarget(dim, float(self.config.get('target.separation', 2.0)),
                                     float(self.config.get('target.scale', 2.0)))

    def tasks(self):
        config = self.config
        seeds = replicate_seeds(config.master_seed, config.replicates)
        variance = float(config.get('initial_variance', 5.0))

        log_normalizer = self.target(1).log_normalizer
        self.meta['log_z'] = repr(log_normalizer)
        logger.info("Toy target log Z = %.6g", log_normalizer)

        for method in config.methods:
            for dim in config.dims:
                target = self.target(dim)
                sampler = GaussianSampler(dim, variance)
                slug = "{}_d{}".format(method.slug, dim)
                for replicate, seed in enumerate(seeds):
                    yield self.method_task(slug, replicate, method, seed, target, sampler)


def final_bounds(frame, column: str = 'renyi_bound') -> np.ndarray:
    """
    Value of `column` at the last outer step of every replicate, in replicate order
    """
    last = frame[frame['t'] == frame['t'].max()].sort_values('replicate')
    return last[column].to_numpy()
