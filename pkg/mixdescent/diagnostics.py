"""
Numerical checks shared by the tests and the oracle suite
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .divergence import check_simplex, psi_exact
from .exceptions import DimensionMismatch
from .exact import DiscreteProblem, exact_gradient
from .settings import MIXDESCENT
from .transforms import Family, TransformConfig, is_kl

logger = logging.getLogger(__name__)


def tv_distance(weights_a, weights_b) -> float:
    """
    1/2 sum_j |lambda_j - lambda'_j| for weights on the same atoms
    """
    weights_a = np.asarray(weights_a, dtype=float)
    weights_b = np.asarray(weights_b, dtype=float)
    if weights_a.shape != weights_b.shape:
        raise DimensionMismatch("weights of different lengths: {} vs {}".format(weights_a.size, weights_b.size))
    return float(min(0.5 * np.abs(weights_a - weights_b).sum(), 1.0))


def gradient_variance(weights, gradient) -> float:
    """
    Var_lambda(b) = sum_j lambda_j (b_j - lambda.b)^2, centered for precision
    """
    weights = check_simplex(weights)
    gradient = np.asarray(gradient, dtype=float)
    centered = gradient - np.dot(weights, gradient)
    return float(max(np.dot(weights, centered ** 2), 0.0))


@dataclass(frozen=True)
class MonotonicityConstants:
    # c in Psi(lambda) - Psi(lambda') >= c / 2 Var_lambda(b)
    c: float
    # max |Gamma''|
    L: float
    # 1 / inf (-log Gamma)'
    L_alpha_1: float
    # 1 / inf Gamma
    L_alpha_2: float


def _domain_bounds(config: TransformConfig) -> Tuple[float, float]:
    if config.family is Family.EXPONENTIAL or is_kl(config.alpha):
        return -np.inf, np.inf
    edge = -1 / (config.alpha - 1)
    return (edge, np.inf) if config.alpha > 1 else (-np.inf, edge)


def gradient_domain(config: TransformConfig, gradients: Sequence[float],
                    padding: float = None) -> Tuple[float, float]:
    """
    Range of the observed gradients (before adding kappa) padded by a fraction of its width and kept
    inside the transform domain: a padded end that leaves the domain stops halfway to its boundary
    """
    padding = MIXDESCENT['DOMAIN_PADDING'] if padding is None else padding
    gradients = np.asarray(gradients, dtype=float)
    low, high = float(gradients.min()), float(gradients.max())
    width = max(high - low, 1e-12) * padding

    lower_edge, upper_edge = _domain_bounds(config)
    padded_low, padded_high = low - width, high + width
    if padded_low + config.kappa <= lower_edge:
        padded_low = low - 0.5 * (low + config.kappa - lower_edge)
    if padded_high + config.kappa >= upper_edge:
        padded_high = high + 0.5 * (upper_edge - high - config.kappa)
    return padded_low, padded_high


def monotonicity_constants(config: TransformConfig, b_range: Tuple[float, float], eta: float = None,
                           grid_size: int = None) -> MonotonicityConstants:
    """
    Constants of the refined decrease, infima taken on a uniform grid over b_range + kappa

    :param eta: learning rate, config.eta0 by default
    :raises PowerDomainError: when b_range + kappa leaves the transform domain
    """
    eta = config.eta0 if eta is None else eta
    grid_size = grid_size or MIXDESCENT['CONSTANTS_GRID_SIZE']
    low, high = b_range
    v = np.linspace(low + config.kappa, high + config.kappa, grid_size)
    transform = config.transform

    log_gamma_prime = transform.log_gamma_prime(v, eta)
    gamma = np.exp(transform.log_gamma(v, eta))
    gamma_prime = gamma * log_gamma_prime

    c = float(np.min(transform.monotonicity_term(v, config.kappa, eta)) * np.min(-gamma_prime))
    with np.errstate(divide='ignore'):
        L_alpha_1 = float(1 / np.min(-log_gamma_prime))
        L_alpha_2 = float(1 / np.min(gamma))
    L = float(np.max(np.abs(transform.gamma_second(v, eta))))
    return MonotonicityConstants(c, L, L_alpha_1, L_alpha_2)


def _directional_derivative(problem: DiscreteProblem, weights, atom: int, alpha: float, epsilon: float) -> float:
    direction = np.zeros_like(weights)
    direction[atom] = 1.0
    moved = (1 - epsilon) * weights + epsilon * direction
    moved /= moved.sum()
    return (psi_exact(problem, moved, alpha) - psi_exact(problem, weights, alpha)) / epsilon


def first_variation_check(problem: DiscreteProblem, weights, alpha: float, epsilon: float = 1e-5,
                          richardson: bool = True) -> float:
    """
    Largest discrepancy over atoms between the one-sided derivative of Psi towards delta_theta_j and
    b_j - lambda.b, relative to max(|b_j - lambda.b|, 1)

    :param richardson: combine steps epsilon and epsilon / 2 to cancel the first-order error term
    """
    weights = check_simplex(weights, problem.atom_count)
    gradient = exact_gradient(problem, weights, alpha)
    expected = gradient - np.dot(weights, gradient)

    errors = []
    for j in range(problem.atom_count):
        derivative = _directional_derivative(problem, weights, j, alpha, epsilon)
        if richardson:
            derivative = 2 * _directional_derivative(problem, weights, j, alpha, epsilon / 2) - derivative
        errors.append(abs(derivative - expected[j]) / max(abs(expected[j]), 1.0))
    return float(max(errors))


def refined_decrease_margin(psi_before: float, psi_after: float, constants: MonotonicityConstants,
                            variance: float) -> float:
    """
    Psi(lambda) - Psi(lambda') - c / 2 Var; negative values falsify the refined decrease
    """
    return (psi_before - psi_after) - 0.5 * constants.c * variance
