"""
Catalogue of transforms Gamma applied to the gradient in the weight update

    lambda_j <- lambda_j * Gamma(b_j + kappa) / sum_i lambda_i * Gamma(b_i + kappa)

Two families are provided:
- exponential (Entropic Mirror Descent): Gamma(v) = exp(-eta * v)
- power (Power Descent): Gamma(v) = [(alpha - 1) * v + 1] ^ (eta / (1 - alpha))

Each family validates configurations on two levels: monotonicity of the objective after one step
and convergence of the iterates, which differ (ie. power with alpha > 1 and kappa = 0 is monotone
but needs kappa > 0 to converge).
"""
import enum
import logging
import math
from abc import abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .exceptions import DomainError, PowerDomainError
from .plugins import Interface
from .settings import MIXDESCENT

logger = logging.getLogger(__name__)


class Family(enum.Enum):
    EXPONENTIAL = 'exponential'
    POWER = 'power'


class RatePolicy(enum.Enum):
    CONSTANT = 'constant'
    INVERSE_SQRT_N = 'inverse_sqrt_n'
    INVERSE_SQRT_HORIZON = 'inverse_sqrt_horizon'


def is_kl(alpha: float) -> bool:
    return abs(alpha - 1) < MIXDESCENT['ALPHA_LIMIT_BAND']


@dataclass(frozen=True)
class TransformConfig:
    alpha: float
    family: Family = Family.POWER
    eta0: float = 1.0
    kappa: float = 0.0
    rate_policy: RatePolicy = RatePolicy.CONSTANT

    def __post_init__(self):
        # accept plain strings coming from config files
        object.__setattr__(self, 'family', Family(self.family))
        object.__setattr__(self, 'rate_policy', RatePolicy(self.rate_policy))
        if not self.eta0 > 0:
            raise DomainError("eta0 must be positive, got {!r}".format(self.eta0))
        if not math.isfinite(self.alpha):
            raise DomainError("alpha must be a finite real, got {!r}".format(self.alpha))

    @classmethod
    def from_dict(cls, alpha: float, options: dict) -> 'TransformConfig':
        return cls(alpha=float(alpha), family=options.get('family', 'power'), eta0=float(options.get('eta0', 1.0)),
                   kappa=float(options.get('kappa', 0.0)),
                   rate_policy=options.get('rate_policy', 'constant'))

    @property
    def transform(self) -> 'GammaTransform':
        return GammaTransform.get(self.family.value)(self.alpha)

    def __str__(self):
        return "{}(alpha={:g}, eta0={:g}, kappa={:g}, {})".format(
            self.family.value, self.alpha, self.eta0, self.kappa, self.rate_policy.value)


@dataclass
class ValidationReport:
    OK = 'ok'
    VIOLATION = 'violation'
    CONDITIONAL = 'conditional'

    status: str = OK
    reasons: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == self.OK

    @property
    def violated(self) -> bool:
        return self.status == self.VIOLATION

    def violation(self, reason: str) -> 'ValidationReport':
        self.status = self.VIOLATION
        self.reasons.append(reason)
        return self

    def __str__(self):
        return self.status if not self.reasons else "{}: {}".format(self.status, '; '.join(self.reasons))


def _check_eta(report: ValidationReport, eta: float, closed: bool = True):
    if closed and not 0 < eta <= 1:
        report.violation("eta = {:g} outside (0, 1]".format(eta))
    elif not closed and not 0 < eta < 1:
        report.violation("eta = {:g} outside (0, 1)".format(eta))


class GammaTransform(Interface):
    """
    Transform family evaluated in log-domain.

    Implementations define log Gamma and its first derivative; the rest is derived.
    """
    slug_suffix = 'Transform'

    def __init__(self, alpha: float):
        self.alpha = alpha

    @abstractmethod
    def log_gamma(self, v, eta: float):
        pass

    @abstractmethod
    def log_gamma_prime(self, v, eta: float):
        pass

    @abstractmethod
    def gamma_second(self, v, eta: float):
        pass

    @abstractmethod
    def monotonicity_report(self, config: TransformConfig) -> ValidationReport:
        pass

    @abstractmethod
    def convergence_report(self, config: TransformConfig, b_infty: Optional[float]) -> ValidationReport:
        pass

    def contains(self, v) -> np.ndarray:
        """
        Mask of arguments inside the transform domain
        """
        return np.isfinite(np.asarray(v, dtype=float))

    def evaluate(self, v, eta: float):
        return np.exp(self.log_gamma(v, eta))

    def gamma_prime(self, v, eta: float):
        return self.evaluate(v, eta) * self.log_gamma_prime(v, eta)

    def monotonicity_term(self, v, kappa: float, eta: float):
        """
        [(alpha - 1)(v - kappa) + 1] (log Gamma)'(v) + 1, must be nonnegative on the domain for the
        objective to decrease after each step
        """
        v = np.asarray(v, dtype=float)
        return ((self.alpha - 1) * (v - kappa) + 1) * self.log_gamma_prime(v, eta) + 1


class ExponentialTransform(GammaTransform):
    def log_gamma(self, v, eta):
        return -eta * np.asarray(v, dtype=float)

    def log_gamma_prime(self, v, eta):
        return np.full_like(np.asarray(v, dtype=float), -eta)

    def gamma_second(self, v, eta):
        return eta ** 2 * self.evaluate(v, eta)

    def monotonicity_report(self, config):
        report = ValidationReport()
        if is_kl(self.alpha):
            _check_eta(report, config.eta0)
            return report

        # holds only on a bounded gradient range, see convergence_report
        report.status = ValidationReport.CONDITIONAL
        report.reasons.append("exponential transform with alpha != 1 depends on the gradient range")
        return report

    def convergence_report(self, config, b_infty):
        report = ValidationReport()
        if is_kl(self.alpha):
            _check_eta(report, config.eta0, closed=False)
            return report

        if b_infty is None:
            report.status = ValidationReport.CONDITIONAL
            report.reasons.append("gradient bound b_infty unknown, checked against observed gradients at run time")
            return report

        limit = 1 / (abs(self.alpha - 1) * b_infty + 1)
        if not 0 < config.eta0 < limit:
            report.violation("eta = {:g} outside (0, {:g}) for b_infty = {:g}".format(config.eta0, limit, b_infty))
        return report


class PowerTransform(GammaTransform):
    def _base(self, v):
        return (self.alpha - 1) * np.asarray(v, dtype=float) + 1

    def _exponent(self, eta):
        if is_kl(self.alpha):
            raise DomainError("power transform is undefined for alpha = 1")
        return eta / (1 - self.alpha)

    def contains(self, v):
        return self._base(v) > 0

    def check_domain(self, v):
        base = self._base(v)
        outside = ~(base > 0)
        if np.any(outside):
            index = int(np.flatnonzero(np.atleast_1d(outside))[0])
            raise PowerDomainError(index, float(np.atleast_1d(v)[index]))
        return base

    def log_gamma(self, v, eta):
        exponent = self._exponent(eta)
        return exponent * np.log(self.check_domain(v))

    def log_gamma_from_log_base(self, log_base, eta):
        """
        log Gamma from log((alpha - 1) v + 1), for bases too close to zero to be formed from v
        """
        log_base = np.asarray(log_base, dtype=float)
        outside = ~(log_base > -np.inf)
        if np.any(outside):
            index = int(np.flatnonzero(np.atleast_1d(outside))[0])
            raise PowerDomainError(index, float(np.expm1(np.atleast_1d(log_base)[index]) / (self.alpha - 1)))
        return self._exponent(eta) * log_base

    def log_gamma_prime(self, v, eta):
        self._exponent(eta)
        return -eta / self.check_domain(v)

    def gamma_second(self, v, eta):
        base = self.check_domain(v)
        return eta * (eta + self.alpha - 1) * np.exp((self._exponent(eta) - 2) * np.log(base))

    def monotonicity_report(self, config):
        report = ValidationReport()
        if is_kl(self.alpha):
            return report.violation("power transform requires alpha != 1")
        _check_eta(report, config.eta0)
        if (self.alpha - 1) * config.kappa < 0:
            report.violation("(alpha - 1) * kappa = {:g} < 0".format((self.alpha - 1) * config.kappa))
        return report

    def convergence_report(self, config, b_infty):
        report = ValidationReport()
        if is_kl(self.alpha):
            return report.violation("power transform requires alpha != 1")
        _check_eta(report, config.eta0)
        if self.alpha > 1 and not config.kappa > 0:
            report.violation("alpha > 1 requires kappa > 0, got {:g}".format(config.kappa))
        if self.alpha < 1 and not config.kappa <= 0:
            report.violation("alpha < 1 requires kappa <= 0, got {:g}".format(config.kappa))
        return report


def gamma_eval(v, config: TransformConfig, eta: float):
    """
    Gamma(v) for the configured family

    :raises PowerDomainError: when (alpha - 1) v + 1 <= 0 for the power family
    """
    value = config.transform.evaluate(v, eta)
    return float(value) if np.ndim(value) == 0 else value


def validate_monotonicity(config: TransformConfig) -> ValidationReport:
    return config.transform.monotonicity_report(config)


def validate_convergence(config: TransformConfig, b_infty: Optional[float]) -> ValidationReport:
    """
    :param b_infty: bound on |b|; math.inf fails the exponential alpha != 1 check, None defers it
    """
    return config.transform.convergence_report(config, b_infty)


def learning_rate(config: TransformConfig, n: int, horizon: int = 1) -> float:
    """
    eta_n for step n (1-based) of a run with `horizon` steps
    """
    if n < 1:
        raise ValueError("iteration index must be >= 1, got {}".format(n))

    if config.rate_policy is RatePolicy.CONSTANT:
        return config.eta0
    if config.rate_policy is RatePolicy.INVERSE_SQRT_N:
        return config.eta0 / math.sqrt(n)
    if n > horizon:
        raise ValueError("iteration {} is past the horizon {}".format(n, horizon))
    return config.eta0 / math.sqrt(horizon)
