"""Likelihood objectives and parameter fitting.

Two estimation methods for the GARCH volatility scale:

* QMLE: -2 log-likelihood with a fixed parametric innovation density
  (available for GARCH(1,1), EGARCH(1,1) and GJR(1,1));
* one-step SMLE (GARCH(1,1)): the innovation density is replaced by a
  Gaussian-kernel estimate built from the residuals implied by the very
  parameter vector being evaluated, so the density estimate (and its
  bandwidth) changes inside the optimization.

Both share sigma_1 = sd(y), so their objectives differ only in the density
term.  Optimization is Nelder-Mead over a transformed space that keeps the
parameters inside the stationarity region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .distributions import InnovationDist, gaussian
from .errors import ConfigError, InvalidInputError, ParameterError
from .garch import AsymGarchParams, GarchParams, as_return_series

__all__ = [
    "EstimatorSpec",
    "FitConfig",
    "FitResult",
    "qmle_neg2ll",
    "smle_neg2ll",
    "residuals",
    "fit",
]

_MODELS = ("garch11", "egarch11", "gjr11")
_MODEL_CODES = {
    "garch11": _kernels.MODEL_GARCH11,
    "gjr11": _kernels.MODEL_GJR11,
    "egarch11": _kernels.MODEL_EGARCH11,
}
_DIST_CODES = {"gaussian": 0.0, "ged": 1.0, "student_t": 2.0}

# deterministic perturbation directions for restart starting points
_RESTART_STEPS = (
    (0.5, -0.5, 0.5, -0.5),
    (-0.5, 0.5, -0.5, 0.5),
    (1.0, 1.0, 0.0, -1.0),
    (-1.0, 0.0, 1.0, 1.0),
    (0.3, -1.0, -0.3, 0.6),
)


@dataclass(frozen=True)
class EstimatorSpec:
    """Which estimator drives a likelihood: method, model, and (for QMLE) density."""

    method: str = "smle"
    model: str = "garch11"
    qmle_dist: InnovationDist = field(default_factory=gaussian)

    def __post_init__(self):
        if self.method not in ("qmle", "smle"):
            raise ConfigError("method must be 'qmle' or 'smle'")
        if self.model not in _MODELS:
            raise ConfigError(f"model must be one of {_MODELS}")
        if self.method == "smle" and self.model != "garch11":
            raise ConfigError("the one-step SMLE is defined for garch11 only")

    @property
    def label(self) -> str:
        if self.method == "smle":
            return "smle"
        return f"qmle[{self.model},{self.qmle_dist.name}]"


@dataclass(frozen=True)
class FitConfig:
    """Optimizer configuration (all documented knobs of the fit).

    The simplex search runs from the better of the standard start
    ((1-0.05-0.9)*var(y), 0.05, 0.9) and, for the SMLE, a Gaussian-QMLE warm
    start.  Perturbed restarts are taken only while the search has not
    converged (up to ``max_restarts``); ``extra_restarts`` adds confirming
    restarts after convergence, stopping as soon as one fails to improve the
    objective by more than ``improve_tol``.
    """

    fatol: float = 1e-6
    xatol: float = 1e-6
    maxfev: int = 2000
    max_restarts: int = 5
    extra_restarts: int = 0
    improve_tol: float = 1e-3
    qmle_warm_start: bool = True
    nrd_constant: float = 1.06
    bandwidth: float | None = None
    min_len: int = 100


@dataclass(frozen=True)
class FitResult:
    """Outcome of a likelihood fit."""

    params: GarchParams | AsymGarchParams
    neg2ll: float
    converged: bool
    iterations: int
    n: int
    method: str
    model: str
    n_floored: int = 0
    restarts_used: int = 0


# ---------------------------------------------------------------------------
# distribution / parameter packing
# ---------------------------------------------------------------------------

def _dist_pack(dist: InnovationDist) -> np.ndarray:
    pack = np.zeros(8)
    pack[0] = _DIST_CODES[dist.family]
    pack[1] = dist.shape if dist.shape is not None else 0.0
    pack[2] = dist.xi
    if dist.xi != 1.0:
        mu, sigma = dist._skew_loc_scale
        pack[3] = mu
        pack[4] = sigma
        pack[7] = math.log(sigma) + math.log(2.0 / (dist.xi + 1.0 / dist.xi))
    pack[5] = dist._ged_lambda if dist.family == "ged" else 1.0
    pack[6] = dist._base_log_const
    return pack


def _params4(params, model: str) -> np.ndarray:
    if model == "garch11":
        if not isinstance(params, GarchParams):
            raise ParameterError("garch11 takes GarchParams")
        return np.array([params.omega, params.alpha, 0.0, params.beta])
    if not isinstance(params, AsymGarchParams):
        raise ParameterError(f"{model} takes AsymGarchParams")
    if model == "gjr11":
        params.validate_gjr()
    else:
        params.validate_egarch()
    return np.array([params.omega, params.alpha, params.gamma, params.beta])


def _params_from4(p4: np.ndarray, model: str):
    if model == "garch11":
        return GarchParams(float(p4[0]), float(p4[1]), float(p4[3]))
    return AsymGarchParams(float(p4[0]), float(p4[1]), float(p4[3]), float(p4[2]))


def _infer_model(params, model: str | None) -> str:
    if model is not None:
        if model not in _MODELS:
            raise ConfigError(f"model must be one of {_MODELS}")
        return model
    if isinstance(params, GarchParams):
        return "garch11"
    raise ConfigError("pass model='gjr11' or 'egarch11' for AsymGarchParams")


def _logit(p: float) -> float:
    p = min(max(p, 1e-12), 1.0 - 1e-12)
    return math.log(p / (1.0 - p))


def _params_to_u(model: str, p4: np.ndarray) -> np.ndarray:
    """Inverse of the fitting reparameterization (for starting points)."""
    d = 1.0 - _kernels.DELTA
    if model == "garch11":
        s = p4[1] + p4[3]
        s = min(max(s, 1e-10), d - 1e-10)
        a = p4[1] / s if s > 0 else 0.5
        return np.array([math.log(max(p4[0], 1e-300)), _logit(s / d), _logit(a)])
    if model == "gjr11":
        s = p4[1] + 0.5 * p4[2] + p4[3]
        s = min(max(s, 1e-10), d - 1e-10)
        pb = max(p4[3] / s, 1e-12)
        pa = max(p4[1] / s, 1e-12)
        pg = max(0.5 * p4[2] / s, 1e-12)
        return np.array([
            math.log(max(p4[0], 1e-300)), _logit(s / d),
            math.log(pa / pb), math.log(pg / pb),
        ])
    b = min(max(p4[3] / d, -1.0 + 1e-12), 1.0 - 1e-12)
    return np.array([p4[0], p4[1], p4[2], math.atanh(b)])


# ---------------------------------------------------------------------------
# objectives
# ---------------------------------------------------------------------------

def qmle_neg2ll(params, returns, dist: InnovationDist, sigma1_sq,
                model: str | None = None) -> float:
    """-2 sum_t log[(1/sigma_t) f(y_t/sigma_t)] with parametric density f.

    Non-finite intermediates yield +inf rather than raising, so optimizers
    can reject the point.
    """
    y = as_return_series(returns)
    model = _infer_model(params, model)
    p4 = _params4(params, model)
    s1 = float(sigma1_sq)
    if not (s1 > 0) or not math.isfinite(s1):
        raise InvalidInputError("sigma1_sq must be a positive finite real")
    e_abs_z = dist.mean_abs() if model == "egarch11" else 0.0
    val, _ = _kernels.qmle_neg2ll_core(
        y, _MODEL_CODES[model], p4, _dist_pack(dist), s1, e_abs_z
    )
    return float(val)


def smle_neg2ll(params: GarchParams, returns, nrd_constant: float = 1.06,
                bandwidth: float | None = None, density: str = "kde") -> float:
    """One-step semiparametric -2 log-likelihood for GARCH(1,1).

    sigma_1 = sd(y); residuals eps_t = y_t/sigma_t are standardized to
    eps*_t, the rule-of-thumb bandwidth and Gaussian KDE are built on eps*_t,
    and each observation contributes log[(1/(sigma_t s)) fhat(eps*_t)]
    (the change-of-variables-correct density of y_t).

    ``density="gaussian"`` is a white-box hook replacing the residual-density
    estimate with the standard normal evaluated at the raw residuals; it
    must then agree with the Gaussian QMLE, which checks that the two
    objectives share all plumbing outside the density term.
    """
    y = as_return_series(returns)
    if y.size < 10:
        raise InvalidInputError("SMLE needs n >= 10 residuals for a density estimate")
    if not isinstance(params, GarchParams):
        raise ParameterError("SMLE is defined for GARCH(1,1) parameters")
    s1 = float(np.var(y, ddof=1))
    if density == "gaussian":
        return qmle_neg2ll(params, y, gaussian(), s1)
    if density != "kde":
        raise ConfigError("density must be 'kde' or 'gaussian'")
    h_override = -1.0 if bandwidth is None else float(bandwidth)
    val, _ = _kernels.smle_neg2ll_core(
        y, params.omega, params.alpha, params.beta, s1, nrd_constant, h_override
    )
    return float(val)


def residuals(params, returns, model: str | None = None, sigma1_sq=None,
              standardized: bool = False, dist: InnovationDist | None = None):
    """Model residuals eps_t = y_t / sigma_t(theta).

    With ``standardized`` the residuals are recentered and rescaled to
    sample mean 0 and sd 1.  ``sigma1_sq`` defaults to var(y); ``dist`` is
    only consulted for the EGARCH E|z| constant (default Gaussian).
    """
    y = as_return_series(returns)
    model = _infer_model(params, model)
    p4 = _params4(params, model)
    s1 = float(np.var(y, ddof=1)) if sigma1_sq is None else float(sigma1_sq)
    if not (s1 > 0) or not math.isfinite(s1):
        raise InvalidInputError("sigma1_sq must be a positive finite real")
    e_abs_z = (dist or gaussian()).mean_abs() if model == "egarch11" else 0.0
    sig2 = _kernels.filter_dispatch(_MODEL_CODES[model], y, p4, s1, e_abs_z)
    eps = y / np.sqrt(sig2)
    if standardized:
        eps = (eps - eps.mean()) / eps.std(ddof=1)
    return eps


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _standard_start(model: str, var_y: float) -> np.ndarray:
    """Small-alpha / large-beta start typical of financial data."""
    if model == "garch11":
        p4 = np.array([0.05 * var_y, 0.05, 0.0, 0.9])
    elif model == "gjr11":
        p4 = np.array([0.05 * var_y, 0.05, 0.05, 0.875])
    else:
        p4 = np.array([0.1 * math.log(max(var_y, 1e-300)), 0.2, -0.05, 0.9])
    return _params_to_u(model, p4)


def fit(spec: EstimatorSpec, returns, config: FitConfig | None = None) -> FitResult:
    """Minimize the configured -2 log-likelihood over the stationarity region.

    Never raises on optimizer failure: a non-converged FitResult carries the
    best point found.
    """
    cfg = config or FitConfig()
    y = as_return_series(returns)
    if y.size < cfg.min_len:
        raise InvalidInputError(
            f"series of length {y.size} is below the minimum fit length {cfg.min_len}"
        )
    var_y = float(np.var(y, ddof=1))
    if not (var_y > 0):
        raise InvalidInputError("constant series cannot be fitted")

    model = spec.model
    mcode = _MODEL_CODES[model]
    method_code = _kernels.METHOD_SMLE if spec.method == "smle" else _kernels.METHOD_QMLE
    dist = gaussian() if spec.method == "smle" else spec.qmle_dist
    pack = _dist_pack(dist)
    e_abs_z = dist.mean_abs() if model == "egarch11" else 0.0
    h_override = -1.0 if cfg.bandwidth is None else float(cfg.bandwidth)

    def run(u0):
        return _kernels.nelder_mead(
            np.asarray(u0, dtype=float), method_code, mcode, y, pack, var_y,
            cfg.nrd_constant, h_override, e_abs_z,
            cfg.fatol, cfg.xatol, cfg.maxfev,
        )

    def objective(u):
        return float(_kernels.fit_objective(
            np.asarray(u, dtype=float), method_code, mcode, y, pack, var_y,
            cfg.nrd_constant, h_override, e_abs_z,
        ))

    starts = [_standard_start(model, var_y)]
    if spec.method == "smle" and cfg.qmle_warm_start:
        warm = fit(EstimatorSpec("qmle", "garch11"), y,
                   replace(cfg, qmle_warm_start=False))
        starts.append(_params_to_u(model, _params4(warm.params, model)))
    start = min(starts, key=objective)

    u_best, f_best, nfev, converged = run(start)
    total_fev = nfev
    restarts_used = 0
    dim = u_best.shape[0]
    while not converged and restarts_used < cfg.max_restarts:
        step = np.array(_RESTART_STEPS[restarts_used % len(_RESTART_STEPS)][:dim])
        u, f, nfev, conv = run(u_best + step)
        total_fev += nfev
        restarts_used += 1
        if f < f_best:
            u_best, f_best = u, f
        converged = conv
    extra = 0
    while converged and extra < cfg.extra_restarts:
        step = np.array(_RESTART_STEPS[(restarts_used + extra) % len(_RESTART_STEPS)][:dim])
        u, f, nfev, conv = run(u_best + step)
        total_fev += nfev
        extra += 1
        if f < f_best - cfg.improve_tol:
            u_best, f_best, converged = u, f, conv
        else:
            break

    p4 = _kernels.u_to_params(mcode, u_best)
    if spec.method == "smle":
        _, n_floored = _kernels.smle_neg2ll_core(
            y, p4[0], p4[1], p4[3], var_y, cfg.nrd_constant, h_override
        )
    else:
        _, n_floored = _kernels.qmle_neg2ll_core(y, mcode, p4, pack, var_y, e_abs_z)
    return FitResult(
        params=_params_from4(p4, model),
        neg2ll=float(f_best),
        converged=bool(converged),
        iterations=int(total_fev),
        n=int(y.size),
        method=spec.method,
        model=model,
        n_floored=int(n_floored),
        restarts_used=restarts_used + extra,
    )
