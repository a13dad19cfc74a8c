import logging

import numpy as np

from mixdescent.exceptions import ConfigError
from mixdescent.experiments import Experiment, replicate_seeds
from mixdescent.importers import LibsvmImporter, standardize_features
from mixdescent.mixture import sample_mixture
from mixdescent.targets import (BayesianLogisticRegressionTarget, BlrData, BlrPriorSampler, accuracy,
                                predictive_log_likelihood)
from mixdescent.trace import make_generator

logger = logging.getLogger(__name__)


class PredictiveMetrics:
    """
    Held-out accuracy and predictive log-likelihood of points drawn from the current mixture
    """

    def __init__(self, test: BlrData, sample_count: int):
        self.test = test
        self.sample_count = sample_count

    def __call__(self, mix, kernel, rng):
        samples = sample_mixture(mix, kernel, self.sample_count, rng)
        return {
            'accuracy': accuracy(samples, self.test),
            'predictive_log_likelihood': predictive_log_likelihood(samples, self.test),
        }


def prepare_data(config) -> tuple:
    """
    Load, subsample, standardize, add the intercept column and split into (train, test)

    Subsampling and splitting use their own seed so that every replicate sees the same data.
    """
    importer = LibsvmImporter(config.get('label_map'))
    try:
        data = importer.load(config.dataset_path, standardize=False)
    except OSError as e:
        raise ConfigError("cannot read dataset {}: {}".format(config.dataset_path, e))

    subsample_seed, split_seed = np.random.SeedSequence(int(config.get('subsample_seed', 0))).spawn(2)
    subsample = config.get('subsample')
    if not config.get('full', False) and subsample and subsample < data.total_count:
        rows = make_generator(subsample_seed).choice(data.total_count, size=int(subsample), replace=False)
        data = data.subset(np.sort(rows))
        logger.info("Subsampled %d rows", data.total_count)

    if config.get('standardize', True):
        features, standardization = standardize_features(data.features)
        data = BlrData(features, data.labels, standardization)
    if config.get('intercept', True):
        data = data.with_intercept()
    return data.split(float(config.get('test_fraction', 0.2)), make_generator(split_seed))


class BlrExperiment(Experiment):
    """
    Bayesian logistic regression on a libsvm dataset, one table per method
    """

    columns = {
        'accuracy': 'accuracy',
        'predictive_log_likelihood': 'predictive_log_likelihood',
    }

    def tasks(self):
        config = self.config
        train, test = prepare_data(config)
        self.meta['train_rows'] = train.total_count
        self.meta['test_rows'] = test.total_count
        self.meta['standardized'] = train.standardization is not None
        self.meta['intercept'] = bool(config.get('intercept', True))

        shape, rate = float(config.get('prior.shape', 1.0)), float(config.get('prior.rate', 0.01))
        target = BayesianLogisticRegressionTarget(train, config.minibatch, shape, rate)
        sampler = BlrPriorSampler(train.feature_count, shape, rate)
        metrics = PredictiveMetrics(test, int(config.get('predictive_samples', 200)))

        seeds = replicate_seeds(config.master_seed, config.replicates)
        for method in config.methods:
            for replicate, seed in enumerate(seeds):
                yield self.method_task(method.slug, replicate, method, seed, target, sampler, metrics)
