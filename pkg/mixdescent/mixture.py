"""
Weighted Dirac mixtures mu_lambda = sum_j lambda_j delta_{theta_j} smoothed by an isotropic Gaussian kernel.

Densities are evaluated in log-domain. Sampling uses numpy's Generator: atom selection by inverse CDF
on the cumulative weights (one uniform per sample), offsets from `Generator.standard_normal`
(ziggurat), so draws are bitwise reproducible for a given seed and numpy version.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .divergence import check_simplex
from .exceptions import DegenerateWeights, DimensionMismatch, DomainError


@dataclass(frozen=True)
class GaussianKernel:
    bandwidth: float

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise DomainError("kernel bandwidth must be positive, got {!r}".format(self.bandwidth))

    def log_normalizer(self, dim: int) -> float:
        return -0.5 * dim * np.log(2 * np.pi * self.bandwidth ** 2)


@dataclass(frozen=True, eq=False)
class ParticleMixture:
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        if atoms.ndim != 2 or atoms.shape[0] < 1 or atoms.shape[1] < 1:
            raise DimensionMismatch("atoms must be a non-empty J x d array")
        weights = check_simplex(np.array(self.weights, dtype=float), atoms.shape[0])
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def uniform(cls, atoms) -> 'ParticleMixture':
        atoms = np.asarray(atoms, dtype=float)
        count = atoms.shape[0]
        return cls(atoms, np.full(count, 1.0 / count))

    @property
    def size(self) -> int:
        return self.atoms.shape[0]

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    def with_weights(self, weights) -> 'ParticleMixture':
        return ParticleMixture(self.atoms, weights)

    def __repr__(self):
        return "<ParticleMixture J={} d={}>".format(self.size, self.dim)


def _as_points(y, dim: int) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    points = y.reshape(1, -1) if y.ndim <= 1 else y
    if points.shape[1] != dim:
        raise DimensionMismatch("expected points of dimension {}, got {}".format(dim, points.shape[1]))
    return points


def kernel_log_density(theta, y, kernel: GaussianKernel) -> float:
    """
    log k_h(y - theta) = -|y - theta|^2 / (2 h^2) - (d / 2) log(2 pi h^2)
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if theta.shape != y.shape:
        raise DimensionMismatch("theta and y dimensions differ: {} vs {}".format(theta.shape, y.shape))
    distance = np.sum((y - theta) ** 2)
    return float(-distance / (2 * kernel.bandwidth ** 2) + kernel.log_normalizer(theta.size))


def kernel_log_matrix(atoms, ys, kernel: GaussianKernel) -> np.ndarray:
    """
    log k(theta_j, y_m) for every sample m and atom j

    :return: M x J array
    """
    atoms = np.asarray(atoms, dtype=float)
    ys = _as_points(ys, atoms.shape[1])
    # |y|^2 - 2 y.theta + |theta|^2 is cheaper but loses precision for close points
    distances = np.sum((ys[:, None, :] - atoms[None, :, :]) ** 2, axis=-1)
    return -distances / (2 * kernel.bandwidth ** 2) + kernel.log_normalizer(atoms.shape[1])


def log_weights(weights) -> np.ndarray:
    with np.errstate(divide='ignore'):
        return np.log(np.asarray(weights, dtype=float))


def log_mixture_from_kernel(log_kernel: np.ndarray, weights) -> np.ndarray:
    """
    log sum_j lambda_j k(theta_j, y_m) given an M x J matrix of log kernel values
    """
    if not np.any(np.asarray(weights) > 0):
        raise DegenerateWeights("all mixture weights are zero")
    # zero weights give -inf terms, dropped by logsumexp
    return logsumexp(log_kernel + log_weights(weights)[None, :], axis=1)


def log_mixture_density(mix: ParticleMixture, kernel: GaussianKernel, y):
    """
    log mu_lambda k(y); accepts a single point (returns float) or an M x d array (returns M values)
    """
    values = log_mixture_from_kernel(kernel_log_matrix(mix.atoms, y, kernel), mix.weights)
    return float(values[0]) if np.ndim(y) <= 1 else values


def select_atoms(weights, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Inverse CDF selection of `count` atom indices; ties go to the lower index
    """
    cumulative = np.cumsum(weights)
    uniforms = rng.random(count) * cumulative[-1]
    indices = np.searchsorted(cumulative, uniforms, side='right')
    return np.minimum(indices, len(cumulative) - 1)


def sample_mixture(mix: ParticleMixture, kernel: GaussianKernel, count: int, rng: np.random.Generator,
                   return_indices: bool = False):
    """
    Draw i.i.d. points from mu_lambda k: pick atom j with probability lambda_j, add h * N(0, I_d)

    :return: count x d array (and the selected atom indices if requested)
    """
    if count < 1:
        raise ValueError("number of samples must be >= 1, got {}".format(count))

    indices = select_atoms(mix.weights, count, rng)
    samples = mix.atoms[indices] + kernel.bandwidth * rng.standard_normal((count, mix.dim))
    if return_indices:
        return samples, indices
    return samples
