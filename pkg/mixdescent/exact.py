"""
Exact descent on finite problems: Theta is a finite atom set, Y a finite grid and nu the counting
measure on it, so the objective and its gradient are computed by summation.

This is the oracle every theorem-level check runs against.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .divergence import _f_alpha_prime_log, check_simplex, psi_exact
from .exceptions import DimensionMismatch, DomainError, InadmissibleConfig, InfiniteGradient
from .mixture import kernel_log_matrix, log_weights
from .trace import DescentTrace
from .transforms import TransformConfig, ValidationReport, learning_rate, validate_monotonicity

logger = logging.getLogger(__name__)

# ||lambda' - lambda||_1 at or below which lambda is a fixed point
FIXED_POINT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteProblem:
    """
    kernel_matrix[j, i] = k(theta_j, y_i) > 0, target_masses[i] = p(y_i) > 0
    """
    kernel_matrix: np.ndarray
    target_masses: np.ndarray

    def __post_init__(self):
        kernel = np.array(self.kernel_matrix, dtype=float)
        target = np.array(self.target_masses, dtype=float)
        if kernel.ndim != 2 or target.ndim != 1 or kernel.shape[1] != target.size:
            raise DimensionMismatch("kernel matrix {} does not match {} target masses".format(
                kernel.shape, target.shape))
        if not (np.all(kernel > 0) and np.all(np.isfinite(kernel))):
            raise DomainError("kernel entries must be positive and finite")
        if not (np.all(target > 0) and np.isfinite(target.sum())):
            raise DomainError("target masses must be positive with a finite sum")
        kernel.setflags(write=False)
        target.setflags(write=False)
        object.__setattr__(self, 'kernel_matrix', kernel)
        object.__setattr__(self, 'target_masses', target)
        object.__setattr__(self, 'log_kernel', np.log(kernel))
        object.__setattr__(self, 'log_target', np.log(target))

    @property
    def atom_count(self) -> int:
        return self.kernel_matrix.shape[0]

    @property
    def grid_count(self) -> int:
        return self.kernel_matrix.shape[1]

    def log_mixture(self, weights) -> np.ndarray:
        """
        log mu_lambda k(y_i) for every grid point
        """
        return logsumexp(self.log_kernel + log_weights(weights)[:, None], axis=0)

    @classmethod
    def from_grid(cls, atoms, kernel, target, grid, cell_volume: float) -> 'DiscreteProblem':
        """
        Quadrature of a continuous problem: nu becomes cell_volume times the counting measure on `grid`

        :param atoms: J x d atom positions
        :param kernel: GaussianKernel
        :param target: TargetModel evaluated on the grid
        :param grid: I x d grid points
        """
        grid = np.asarray(grid, dtype=float)
        log_kernel = kernel_log_matrix(atoms, grid, kernel).T + np.log(cell_volume)
        log_target = np.asarray(target.log_density(grid), dtype=float) + np.log(cell_volume)
        return cls(np.exp(log_kernel), np.exp(log_target))

    @classmethod
    def random(cls, rng: np.random.Generator, atoms: int = None, grid: int = None,
               normalize_kernel: bool = True) -> 'DiscreteProblem':
        """
        Random instance: J in {2..8}, I in {5..50}, kernel entries and target masses log-uniform in
        [e^-3, e^3]. Kernel rows are then normalized to sum to one (k(theta_j, .) is a probability
        on the grid) which keeps power-transform gradients inside their domain; target masses are
        scaled to a total of one.
        """
        atoms = atoms or int(rng.integers(2, 9))
        grid = grid or int(rng.integers(5, 51))
        kernel = np.exp(rng.uniform(-3, 3, size=(atoms, grid)))
        if normalize_kernel:
            kernel /= kernel.sum(axis=1, keepdims=True)
        target = np.exp(rng.uniform(-3, 3, size=grid))
        target /= target.sum()
        return cls(kernel, target)

    def __repr__(self):
        return "<DiscreteProblem J={} I={}>".format(self.atom_count, self.grid_count)


def random_problem(rng: np.random.Generator, atoms: int = None, grid: int = None) -> DiscreteProblem:
    return DiscreteProblem.random(rng, atoms, grid)


def random_simplex(rng: np.random.Generator, size: int, count: int = None) -> np.ndarray:
    """
    Uniform draw(s) on the simplex
    """
    shape = (size,) if count is None else (count, size)
    return rng.dirichlet(np.ones(size), size=None if count is None else count).reshape(shape)


def exact_gradient(problem: DiscreteProblem, weights, alpha: float) -> np.ndarray:
    """
    b_j = sum_i k(theta_j, y_i) f_alpha'(mu k(y_i) / p(y_i))
    """
    weights = check_simplex(weights, problem.atom_count)
    log_ratio = problem.log_mixture(weights) - problem.log_target
    with np.errstate(over='ignore', invalid='ignore'):
        gradient = problem.kernel_matrix @ _f_alpha_prime_log(log_ratio, alpha)
    if not np.all(np.isfinite(gradient)):
        raise InfiniteGradient("gradient overflow for alpha = {:g}, atoms {}".format(
            alpha, np.flatnonzero(~np.isfinite(gradient)).tolist()))
    return gradient


def reweight(weights, log_gamma) -> np.ndarray:
    """
    lambda_j exp(log_gamma_j) normalized, shifted by the largest logit
    """
    logits = log_weights(weights) + log_gamma
    logits -= logits.max()
    updated = np.exp(logits)
    return updated / updated.sum()


def apply_transform(weights, gradient, config: TransformConfig, eta: float) -> np.ndarray:
    """
    lambda_j Gamma(b_j + kappa) / sum_i lambda_i Gamma(b_i + kappa), normalized in log-domain

    :raises PowerDomainError: with the index of the first atom outside the transform domain
    """
    log_gamma = config.transform.log_gamma(np.asarray(gradient, dtype=float) + config.kappa, eta)
    return reweight(weights, log_gamma)


def exact_one_step(problem: DiscreteProblem, weights, config: TransformConfig, eta: float) -> np.ndarray:
    gradient = exact_gradient(problem, weights, config.alpha)
    return apply_transform(weights, gradient, config, eta)


def is_fixed_point(weights, updated) -> bool:
    return float(np.abs(np.asarray(updated) - np.asarray(weights)).sum()) <= FIXED_POINT_TOLERANCE


def require_admissible(report: ValidationReport, override: bool = False):
    if report.violated:
        if not override:
            raise InadmissibleConfig(report)
        logger.warning("Running with an inadmissible transform: %s", report)
    elif not report.ok:
        logger.info("Transform admissibility is %s", report)


def run_exact(problem: DiscreteProblem, initial_weights, config: TransformConfig, steps: int,
              override: bool = False) -> DescentTrace:
    """
    Iterate the exact step `steps` times

    :param override: run even when the configuration is not admissible for monotonicity
    :return: trace with steps + 1 states; every record carries the weights and psi. Once a step
        leaves the weights in place the remaining states repeat them without further updates.
    """
    require_admissible(validate_monotonicity(config), override)

    weights = check_simplex(initial_weights, problem.atom_count)
    trace = DescentTrace()
    fixed = False
    psi = psi_exact(problem, weights, config.alpha)
    for n in range(steps + 1):
        eta = learning_rate(config, n + 1, steps) if n < steps else None
        trace.record(0, n, weights, eta=eta, psi=psi)
        if n < steps and not fixed:
            updated = exact_one_step(problem, weights, config, eta)
            if is_fixed_point(weights, updated):
                logger.debug("Fixed point reached after %d steps", n + 1)
                fixed = True
            else:
                weights = updated
                psi = psi_exact(problem, weights, config.alpha)

    logger.debug("Exact run of %d steps: psi %g -> %g", steps, trace[0].metrics['psi'], trace[-1].metrics['psi'])
    return trace
