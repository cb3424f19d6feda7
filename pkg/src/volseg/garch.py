"""GARCH-family parameter types and volatility filters.

Conventions: a return series is a 1-D float array ``y`` of length n; a
volatility path is the array of conditional variances ``sigma_t^2`` of the
same length.  All filters take the first variance explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidInputError, ParameterError

__all__ = [
    "GarchParams",
    "AsymGarchParams",
    "garch11_filter",
    "gjr11_filter",
    "egarch11_filter",
    "garch_pq_filter",
]


@dataclass(frozen=True)
class GarchParams:
    """GARCH(1,1) coefficients: omega >= 0, alpha >= 0, beta >= 0, alpha + beta < 1."""

    omega: float
    alpha: float
    beta: float

    def __post_init__(self):
        vals = (self.omega, self.alpha, self.beta)
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError("GARCH parameters must be finite")
        if self.omega < 0 or self.alpha < 0 or self.beta < 0:
            raise ParameterError("omega, alpha, beta must be non-negative")
        if self.alpha + self.beta >= 1:
            raise ParameterError("covariance stationarity requires alpha + beta < 1")

    @property
    def persistence(self) -> float:
        return self.alpha + self.beta

    @property
    def unconditional_variance(self) -> float:
        return self.omega / (1.0 - self.alpha - self.beta)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.omega, self.alpha, self.beta)


@dataclass(frozen=True)
class AsymGarchParams:
    """Asymmetric-GARCH coefficients (gamma is the asymmetry term).

    The admissible region depends on the model: GJR requires all four
    coefficients non-negative with alpha + gamma/2 + beta < 1, EGARCH only
    |beta| < 1.  Use :meth:`validate_gjr` / :meth:`validate_egarch`.
    """

    omega: float
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        vals = (self.omega, self.alpha, self.beta, self.gamma)
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError("parameters must be finite")

    def validate_gjr(self) -> "AsymGarchParams":
        if min(self.omega, self.alpha, self.beta, self.gamma) < 0:
            raise ParameterError("GJR requires omega, alpha, beta, gamma >= 0")
        if self.alpha + 0.5 * self.gamma + self.beta >= 1:
            raise ParameterError("GJR stationarity requires alpha + gamma/2 + beta < 1")
        return self

    def validate_egarch(self) -> "AsymGarchParams":
        if abs(self.beta) >= 1:
            raise ParameterError("EGARCH requires |beta| < 1")
        return self

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.omega, self.alpha, self.beta, self.gamma)


def as_return_series(values) -> np.ndarray:
    """Validate and convert a return series to a float64 array."""
    y = np.ascontiguousarray(values, dtype=float)
    if y.ndim != 1 or y.size < 1:
        raise InvalidInputError("return series must be a non-empty 1-D array")
    if not np.all(np.isfinite(y)):
        raise InvalidInputError("return series contains non-finite values")
    return y


def _check_sigma1_sq(sigma1_sq) -> float:
    s = float(sigma1_sq)
    if not (s > 0) or not math.isfinite(s):
        raise InvalidInputError("sigma1_sq must be a positive finite real")
    return s


def garch11_filter(params: GarchParams, returns, sigma1_sq) -> np.ndarray:
    """Conditional variances sigma_t^2 = omega + alpha y_{t-1}^2 + beta sigma_{t-1}^2."""
    y = as_return_series(returns)
    s1 = _check_sigma1_sq(sigma1_sq)
    return _kernels.garch11_filter_core(y, params.omega, params.alpha, params.beta, s1)


def gjr11_filter(params: AsymGarchParams, returns, sigma1_sq) -> np.ndarray:
    """GJR variance recursion: the squared-return load is alpha + gamma when y_{t-1} < 0."""
    params.validate_gjr()
    y = as_return_series(returns)
    s1 = _check_sigma1_sq(sigma1_sq)
    return _kernels.gjr11_filter_core(
        y, params.omega, params.alpha, params.gamma, params.beta, s1
    )


def egarch11_filter(params: AsymGarchParams, returns, sigma1_sq, e_abs_z) -> np.ndarray:
    """EGARCH recursion in Nelson form.

    log sigma_t^2 = omega + alpha (|z_{t-1}| - e_abs_z) + gamma z_{t-1}
    + beta log sigma_{t-1}^2, with z = y/sigma.  ``e_abs_z`` is E|Z| of the
    innovation family (sqrt(2/pi) for the Gaussian).
    """
    params.validate_egarch()
    y = as_return_series(returns)
    s1 = _check_sigma1_sq(sigma1_sq)
    e = float(e_abs_z)
    if not (e > 0) or not math.isfinite(e):
        raise InvalidInputError("e_abs_z must be a positive finite real")
    return _kernels.egarch11_filter_core(
        y, params.omega, params.alpha, params.gamma, params.beta, s1, e
    )


def garch_pq_filter(omega, alphas, betas, returns, sigma1_sq) -> np.ndarray:
    """General GARCH(p,q) recursion with a flat backcast.

    Presample y^2 and sigma^2 terms are set to sigma1_sq, so unlike the
    (1,1) filter the first variance is omega + (sum alpha + sum beta) *
    sigma1_sq rather than sigma1_sq itself.  Provided for completeness;
    fitting supports (1,1) only.
    """
    a = np.atleast_1d(np.asarray(alphas, dtype=float))
    b = np.atleast_1d(np.asarray(betas, dtype=float))
    if omega < 0 or np.any(a < 0) or np.any(b < 0):
        raise ParameterError("omega, alphas, betas must be non-negative")
    if a.sum() + b.sum() >= 1:
        raise ParameterError("covariance stationarity requires sum(alpha) + sum(beta) < 1")
    y = as_return_series(returns)
    s1 = _check_sigma1_sq(sigma1_sq)
    return _kernels.garch_pq_filter_core(y, float(omega), a, b, s1)
