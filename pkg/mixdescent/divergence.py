"""
The f_alpha family of convex functions generating the alpha-divergences,
the exact objective Psi_alpha on discrete problems and the ELBO / Renyi bound diagnostics.

    f_0(u) = u - 1 - log u                                  (reverse KL)
    f_1(u) = 1 - u + u log u                                (forward KL)
    f_alpha(u) = [u^alpha - 1 - alpha (u - 1)] / (alpha (alpha - 1))   otherwise

All functions accept scalars or numpy arrays and are pure.
"""
import numpy as np
from scipy.special import logsumexp

from .exceptions import BoundUndefined, DimensionMismatch, DomainError, SimplexError
from .settings import MIXDESCENT


def _limit(alpha: float):
    """
    Returns 0 or 1 if alpha should be dispatched to a limit formula, otherwise None
    """
    band = MIXDESCENT['ALPHA_LIMIT_BAND']
    if abs(alpha) < band:
        return 0
    if abs(alpha - 1) < band:
        return 1
    return None


def _check_positive(u):
    u = np.asarray(u, dtype=float)
    if np.any(~(u > 0)):
        raise DomainError("f_alpha is defined for positive arguments only, got {!r}".format(
            u[~(u > 0)].ravel()[0] if u.ndim else float(u)))
    return u


def _result(value, like):
    return float(value) if np.ndim(like) == 0 else value


def f_alpha(u, alpha: float):
    u = _check_positive(u)
    limit = _limit(alpha)
    if limit == 0:
        value = u - 1 - np.log(u)
    elif limit == 1:
        value = 1 - u + u * np.log(u)
    else:
        # expm1 keeps precision for alpha close to the limits
        value = (np.expm1(alpha * np.log(u)) - alpha * (u - 1)) / (alpha * (alpha - 1))
    return _result(value, u)


def f_alpha_prime(u, alpha: float):
    u = _check_positive(u)
    return _result(_f_alpha_prime_log(np.log(u), alpha), u)


def _f_alpha_prime_log(log_u, alpha: float):
    """
    f_alpha'(u) given log u; +inf log u is allowed and yields the limit value
    """
    if _limit(alpha) == 1:
        return log_u
    with np.errstate(over='ignore', invalid='ignore'):
        return np.expm1((alpha - 1) * log_u) / (alpha - 1)


def f_alpha_second(u, alpha: float):
    """
    f_alpha''(u) = u^(alpha - 2)
    """
    u = _check_positive(u)
    return _result(np.power(u, alpha - 2), u)


def f_alpha_tilde(u, alpha: float):
    """
    The perspective u * f_alpha(1/u) used by the lower bound of Psi_alpha
    """
    u = _check_positive(u)
    return _result(u * f_alpha(1 / u, alpha), u)


def check_simplex(weights, length: int = None):
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or weights.size == 0:
        raise DomainError("weights must be a non-empty vector")
    if length is not None and weights.size != length:
        raise DimensionMismatch("expected {} weights, got {}".format(length, weights.size))
    if np.any(weights < 0) or abs(weights.sum() - 1) > MIXDESCENT['SIMPLEX_TOLERANCE']:
        raise SimplexError("weights are not on the simplex (sum = {!r}, min = {!r})".format(
            weights.sum(), weights.min()))
    return weights


def psi_exact(problem, weights, alpha: float) -> float:
    """
    Psi_alpha(mu_lambda) = sum_i f_alpha(mu k(y_i) / p_i) p_i with nu the counting measure on the grid

    :param problem: DiscreteProblem
    :param weights: simplex vector of length problem.atom_count
    :param alpha: divergence order
    :return: value of the objective
    :raises DomainError: when a density ratio or the sum is not representable as a float
    """
    weights = check_simplex(weights, problem.atom_count)
    log_ratio = problem.log_mixture(weights) - problem.log_target
    with np.errstate(over='ignore', under='ignore'):
        ratio = np.exp(log_ratio)
    outside = ~((ratio > 0) & np.isfinite(ratio))
    if np.any(outside):
        index = int(np.flatnonzero(outside)[0])
        raise DomainError("density ratio at grid point {} is not representable (log ratio {:.6g})".format(
            index, log_ratio[index]))
    with np.errstate(over='ignore', invalid='ignore'):
        value = float(np.sum(f_alpha(ratio, alpha) * problem.target_masses))
    if not np.isfinite(value):
        raise DomainError("Psi overflows for alpha = {:g}".format(alpha))
    return value


def psi_lower_bound(problem, alpha: float) -> float:
    """
    Lower bound of Psi_alpha valid for every mixing measure: f~_alpha(sum_i p_i)
    """
    return f_alpha_tilde(float(np.sum(problem.target_masses)), alpha)


def elbo_renyi_bound(weights, gradient, alpha: float) -> float:
    """
    Bound on the log marginal likelihood computed from mixture weights and gradient values

        L_1 = - sum_j lambda_j b_j
        L_alpha = log((alpha - 1) sum_j lambda_j b_j + 1) / (1 - alpha)

    :param weights: simplex vector
    :param gradient: GradientEstimate or a plain vector of b_j
    :param alpha: divergence order
    :raises BoundUndefined: when the gradient has flagged entries or the log argument is not positive
    """
    values = getattr(gradient, 'values', gradient)
    mask = getattr(gradient, 'undefined_mask', None)
    if mask is not None and np.any(mask):
        raise BoundUndefined("gradient estimate has non-finite entries, bound undefined")

    weights = check_simplex(weights, len(values))
    log_mass = getattr(gradient, 'log_mass', None)
    if log_mass is not None and _limit(alpha) != 1:
        with np.errstate(divide='ignore'):
            bound = float(logsumexp(log_mass, b=weights) / (1 - alpha))
        if not np.isfinite(bound):
            raise BoundUndefined("bound undefined: sum_j lambda_j exp(log mass) = 0")
        return bound

    mean = float(np.dot(weights, values))
    if not np.isfinite(mean):
        raise BoundUndefined("bound undefined: non-finite mean gradient")

    if _limit(alpha) == 1:
        return -mean

    argument = (alpha - 1) * mean + 1
    if argument <= 0:
        raise BoundUndefined("bound undefined: (alpha - 1) mu(b) + 1 = {!r} <= 0".format(argument))
    return float(np.log(argument) / (1 - alpha))
