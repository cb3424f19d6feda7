"""Forward simulation of return series from piecewise GARCH-family processes.

A simulated path is a contiguous concatenation of segments, each with its own
model, parameters and innovation distribution.  The conditional-variance
state carries across segment boundaries (the parameters change abruptly, the
state does not), and a burn-in prefix is discarded so the retained series
starts near stationarity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .changepoints import ChangePointSet
from .distributions import InnovationDist, gaussian
from .errors import ConfigError, ParameterError
from .garch import AsymGarchParams, GarchParams

__all__ = [
    "DgpSegmentSpec",
    "simulate",
    "DGP1",
    "DGP2",
    "DGP3",
]

# the three GARCH(1,1) designs used throughout the simulation studies
DGP1 = GarchParams(0.1, 0.05, 0.9)
DGP2 = GarchParams(0.15, 0.2, 0.7)
DGP3 = GarchParams(0.2, 0.075, 0.85)

MODEL_CODES = {
    "garch11": _kernels.MODEL_GARCH11,
    "gjr11": _kernels.MODEL_GJR11,
    "egarch11": _kernels.MODEL_EGARCH11,
}


@dataclass(frozen=True)
class DgpSegmentSpec:
    """One segment of a piecewise data-generating process."""

    model: str
    params: GarchParams | AsymGarchParams
    length: int
    dist: InnovationDist = gaussian()

    def __post_init__(self):
        if self.model not in MODEL_CODES:
            raise ParameterError(f"unknown model {self.model!r}; "
                                 f"expected one of {sorted(MODEL_CODES)}")
        if self.length < 1:
            raise ParameterError("segment length must be >= 1")
        if self.model == "garch11":
            if not isinstance(self.params, GarchParams):
                raise ParameterError("garch11 segments take GarchParams")
        else:
            if not isinstance(self.params, AsymGarchParams):
                raise ParameterError(f"{self.model} segments take AsymGarchParams")
            if self.model == "gjr11":
                self.params.validate_gjr()
            else:
                self.params.validate_egarch()

    def params4(self) -> np.ndarray:
        p = self.params
        gamma = p.gamma if isinstance(p, AsymGarchParams) else 0.0
        return np.array([p.omega, p.alpha, gamma, p.beta], dtype=float)


def _initial_variance(seg: DgpSegmentSpec) -> float:
    """Stationary-level variance used to seed the very first recursion step."""
    p = seg.params
    if seg.model == "garch11":
        return p.unconditional_variance
    if seg.model == "gjr11":
        return p.omega / (1.0 - p.alpha - 0.5 * p.gamma - p.beta)
    return math.exp(p.omega / (1.0 - p.beta))


def simulate(segments, seed, burn_in: int = 200):
    """Simulate a piecewise process.

    Parameters
    ----------
    segments : sequence of DgpSegmentSpec
    seed : int
        Drives a fresh PRNG; identical seeds give bitwise-identical output.
    burn_in : int
        Presample draws (from the first segment's process) discarded before
        the first retained observation.

    Returns
    -------
    (returns, sigma_sq, truth) : (ndarray, ndarray, ChangePointSet)
        The simulated returns, their conditional variances, and the segment
        boundaries as the true change-point set.
    """
    segments = list(segments)
    if not segments:
        raise ConfigError("at least one DGP segment is required")
    if burn_in < 0:
        raise ConfigError("burn_in must be >= 0")
    rng = np.random.default_rng(seed)

    ys = []
    sig2s = []
    y_prev = 0.0
    sig2_prev = 1.0
    for i, seg in enumerate(segments):
        if not isinstance(seg, DgpSegmentSpec):
            raise ConfigError("segments must be DgpSegmentSpec instances")
        n_draw = seg.length + (burn_in if i == 0 else 0)
        eps = seg.dist.sample(n_draw, rng)
        e_abs_z = seg.dist.mean_abs() if seg.model == "egarch11" else 0.0
        y_seg, sig2_seg = _kernels.segment_recursion(
            MODEL_CODES[seg.model], seg.params4(), eps,
            y_prev, sig2_prev,
            _initial_variance(seg), i == 0, e_abs_z,
        )
        if i == 0:
            y_seg = y_seg[burn_in:]
            sig2_seg = sig2_seg[burn_in:]
        ys.append(y_seg)
        sig2s.append(sig2_seg)
        y_prev = float(ys[-1][-1]) if ys[-1].size else y_prev
        sig2_prev = float(sig2s[-1][-1]) if sig2s[-1].size else sig2_prev

    y = np.concatenate(ys)
    sig2 = np.concatenate(sig2s)
    lengths = [seg.length for seg in segments]
    cps = tuple(np.cumsum(lengths)[:-1].tolist())
    return y, sig2, ChangePointSet(n=int(sum(lengths)), cps=cps)
