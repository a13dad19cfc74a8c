"""
Unnormalized target densities p(y) = p(y, D) evaluated in log-domain on batches of points

Every target takes an M x d array and returns M log-density values, -inf outside the support.
Targets with a random component (minibatched likelihoods) draw it from the generator they are given.
"""
import logging
from abc import abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import expit, log_expit, logsumexp

from .exceptions import DimensionMismatch, DomainError
from .mixture import GaussianKernel, ParticleMixture, log_mixture_density
from .plugins import Interface

logger = logging.getLogger(__name__)


def _as_batch(ys, dim: int) -> np.ndarray:
    ys = np.asarray(ys, dtype=float)
    if ys.ndim == 1:
        ys = ys.reshape(1, -1) if dim > 1 or ys.size == 1 else ys[:, None]
    if ys.shape[1] != dim:
        raise DimensionMismatch("expected points of dimension {}, got {}".format(dim, ys.shape[1]))
    return ys


class TargetModel(Interface):
    slug_suffix = 'Target'

    dim: int

    @abstractmethod
    def log_density(self, ys, rng: np.random.Generator = None) -> np.ndarray:
        """
        Unnormalized log-density at every row of ys

        :param rng: source of randomness for stochastic targets, ignored by exact ones
        """


class GaussianMixtureTarget(TargetModel):
    """
    p(y) = Z [0.5 N(y; -s u, I) + 0.5 N(y; s u, I)] with u the all-ones vector
    """

    def __init__(self, dim: int, separation: float = 2.0, scale: float = 2.0):
        if dim < 1:
            raise DomainError("dimension must be >= 1, got {}".format(dim))
        if not scale > 0:
            raise DomainError("scale must be positive, got {!r}".format(scale))
        self.dim = dim
        self.separation = separation
        self.scale = scale

    @property
    def log_normalizer(self) -> float:
        return float(np.log(self.scale))

    def log_density(self, ys, rng=None):
        ys = _as_batch(ys, self.dim)
        components = np.stack([
            stats.norm.logpdf(ys, loc=-self.separation).sum(axis=1),
            stats.norm.logpdf(ys, loc=self.separation).sum(axis=1),
        ], axis=1)
        return np.log(self.scale) + logsumexp(components, axis=1, b=0.5)


def toy_gaussian_mixture(d: int, s: float = 2.0, Z: float = 2.0) -> GaussianMixtureTarget:
    return GaussianMixtureTarget(d, s, Z)


class ConjugateGaussianTarget(TargetModel):
    """
    Joint of a N(0, prior_variance I) prior and a N(observation; y, noise_variance I) likelihood,
    whose normalizing constant (the evidence) is known in closed form
    """

    def __init__(self, dim: int, prior_variance: float = 1.0, observation=0.0, noise_variance: float = 1.0):
        if not (prior_variance > 0 and noise_variance > 0):
            raise DomainError("variances must be positive")
        self.dim = dim
        self.prior_variance = prior_variance
        self.noise_variance = noise_variance
        self.observation = np.broadcast_to(np.asarray(observation, dtype=float), (dim,)).copy()

    def log_density(self, ys, rng=None):
        ys = _as_batch(ys, self.dim)
        prior = stats.norm.logpdf(ys, scale=np.sqrt(self.prior_variance)).sum(axis=1)
        likelihood = stats.norm.logpdf(self.observation, loc=ys, scale=np.sqrt(self.noise_variance)).sum(axis=1)
        return prior + likelihood

    @property
    def log_evidence(self) -> float:
        return float(stats.norm.logpdf(
            self.observation, scale=np.sqrt(self.prior_variance + self.noise_variance)).sum())

    @property
    def posterior_mean(self) -> np.ndarray:
        return self.prior_variance / (self.prior_variance + self.noise_variance) * self.observation

    @property
    def posterior_variance(self) -> float:
        return self.prior_variance * self.noise_variance / (self.prior_variance + self.noise_variance)


def conjugate_gaussian_target(d: int, prior_variance: float = 1.0, observation=0.0,
                              noise_variance: float = 1.0) -> ConjugateGaussianTarget:
    return ConjugateGaussianTarget(d, prior_variance, observation, noise_variance)


class MixtureTarget(TargetModel):
    """
    A smoothed particle mixture used as target, scaled by a constant
    """

    def __init__(self, mix: ParticleMixture, kernel: GaussianKernel, scale: float = 1.0):
        self.mix = mix
        self.kernel = kernel
        self.scale = scale
        self.dim = mix.dim

    def log_density(self, ys, rng=None):
        ys = _as_batch(ys, self.dim)
        return np.log(self.scale) + log_mixture_density(self.mix, self.kernel, ys)


@dataclass(frozen=True, eq=False)
class BlrData:
    features: np.ndarray
    labels: np.ndarray
    # per-feature (mean, std) removed by standardization, None if the features are raw
    standardization: tuple = None

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels, dtype=float)
        if features.ndim != 2 or labels.shape != (features.shape[0],):
            raise DimensionMismatch("features {} do not match labels {}".format(features.shape, labels.shape))
        if not np.all(np.isin(labels, (-1, 1))):
            raise DomainError("labels must be -1 or +1")
        if not np.all(np.isfinite(features)):
            raise DomainError("features must be finite")
        object.__setattr__(self, 'features', features)
        object.__setattr__(self, 'labels', labels)

    @property
    def total_count(self) -> int:
        return self.features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> 'BlrData':
        return BlrData(self.features[indices], self.labels[indices], self.standardization)

    def split(self, test_fraction: float, rng: np.random.Generator):
        """
        Random (train, test) split
        """
        order = rng.permutation(self.total_count)
        test_count = int(round(test_fraction * self.total_count))
        return self.subset(np.sort(order[test_count:])), self.subset(np.sort(order[:test_count]))

    def with_intercept(self) -> 'BlrData':
        return BlrData(np.hstack([self.features, np.ones((self.total_count, 1))]), self.labels,
                       self.standardization)


def blr_log_prior(ys, feature_count: int, a: float = 1.0, b: float = 0.01) -> np.ndarray:
    """
    log Gamma(beta; shape a, rate b) + sum_l log N(w_l; 0, 1 / beta); -inf for beta <= 0
    """
    ys = _as_batch(ys, feature_count + 1)
    weights, beta = ys[:, :-1], ys[:, -1]
    result = np.full(ys.shape[0], -np.inf)
    valid = beta > 0
    if np.any(valid):
        precision = beta[valid]
        result[valid] = (stats.gamma.logpdf(precision, a, scale=1 / b)
                         + stats.norm.logpdf(weights[valid], scale=1 / np.sqrt(precision)[:, None]).sum(axis=1))
    return result


def blr_log_likelihood(ys, data: BlrData, batch=None) -> np.ndarray:
    """
    (I / |batch|) sum_{i in batch} log sigma(c_i w.x_i) for every row y = (w, beta)
    """
    ys = _as_batch(ys, data.feature_count + 1)
    if batch is None:
        features, labels = data.features, data.labels
    else:
        batch = np.asarray(batch)
        if batch.size == 0:
            raise ValueError("minibatch must not be empty")
        features, labels = data.features[batch], data.labels[batch]

    margins = labels[:, None] * (features @ ys[:, :-1].T)
    return data.total_count / labels.size * log_expit(margins).sum(axis=0)


def blr_log_joint(y, data: BlrData, batch=None, a: float = 1.0, b: float = 0.01):
    """
    log p_0(beta) + sum_l log p_0(w_l | beta) + minibatch log-likelihood scaled to the full data set
    """
    prior = blr_log_prior(y, data.feature_count, a, b)
    result = np.full_like(prior, -np.inf)
    finite = np.isfinite(prior)
    if np.any(finite):
        result[finite] = prior[finite] + blr_log_likelihood(_as_batch(y, data.feature_count + 1)[finite], data, batch)
    return float(result[0]) if np.ndim(y) == 1 else result


class BayesianLogisticRegressionTarget(TargetModel):
    """
    Posterior of a logistic regression with a N(0, 1 / beta) prior on each weight and a Gamma prior on
    the precision beta; the latent point is y = (w, beta) of dimension L + 1
    """

    def __init__(self, data: BlrData, minibatch: int = None, shape: float = 1.0, rate: float = 0.01):
        self.data = data
        self.minibatch = minibatch
        self.shape = shape
        self.rate = rate
        self.dim = data.feature_count + 1

    def draw_batch(self, rng: np.random.Generator = None):
        if rng is None or not self.minibatch or self.minibatch >= self.data.total_count:
            return None
        return rng.choice(self.data.total_count, size=self.minibatch, replace=False)

    def log_density(self, ys, rng=None):
        ys = _as_batch(ys, self.dim)
        return blr_log_joint(ys, self.data, self.draw_batch(rng), self.shape, self.rate)


class GaussianSampler:
    """
    Initial sampler q_0 = N(mean, variance I_d)
    """

    def __init__(self, dim: int, variance: float = 1.0, mean=0.0):
        self.dim = dim
        self.variance = variance
        self.mean = np.broadcast_to(np.asarray(mean, dtype=float), (dim,)).copy()

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return self.mean + np.sqrt(self.variance) * rng.standard_normal((count, self.dim))

    def log_density(self, ys) -> np.ndarray:
        ys = _as_batch(ys, self.dim)
        return stats.norm.logpdf(ys, loc=self.mean, scale=np.sqrt(self.variance)).sum(axis=1)


class BlrPriorSampler:
    """
    Draws y = (w, beta) from the regression prior
    """

    def __init__(self, feature_count: int, shape: float = 1.0, rate: float = 0.01):
        self.feature_count = feature_count
        self.shape = shape
        self.rate = rate
        self.dim = feature_count + 1

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        beta = rng.gamma(self.shape, 1 / self.rate, size=count)
        weights = rng.standard_normal((count, self.feature_count)) / np.sqrt(beta)[:, None]
        return np.hstack([weights, beta[:, None]])

    def log_density(self, ys) -> np.ndarray:
        return blr_log_prior(ys, self.feature_count, self.shape, self.rate)


def _regression_weights(samples, feature_count: int) -> np.ndarray:
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[0] == 0:
        raise ValueError("at least one posterior sample is needed")
    return samples[:, :feature_count]


def blr_predict(samples, x_new) -> np.ndarray:
    """
    Posterior predictive probability of label +1: the average of sigma(w.x) over samples (w, beta)

    :param x_new: a feature vector or an N x L matrix
    """
    x_new = np.asarray(x_new, dtype=float)
    weights = _regression_weights(samples, x_new.shape[-1])
    probabilities = expit(np.atleast_2d(x_new) @ weights.T).mean(axis=1)
    return float(probabilities[0]) if x_new.ndim == 1 else probabilities


def accuracy(samples, data: BlrData) -> float:
    predictions = np.where(blr_predict(samples, data.features) > 0.5, 1.0, -1.0)
    return float(np.mean(predictions == data.labels))


def predictive_log_likelihood(samples, data: BlrData) -> float:
    """
    Average over data points of log (1/K sum_k sigma(c_i w_k.x_i))
    """
    weights = _regression_weights(samples, data.feature_count)
    log_terms = log_expit(data.labels[:, None] * (data.features @ weights.T))
    return float(np.mean(logsumexp(log_terms, axis=1) - np.log(weights.shape[0])))
