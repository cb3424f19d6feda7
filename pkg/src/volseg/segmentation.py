"""Penalized-cost change-point detection by binary segmentation.

The segment cost is -2 x the maximized log-likelihood of the configured
estimator, fitted fresh on the segment.  A split of an interval is accepted
when the cost reduction

    Lambda(tau) = C(y[s:t]) - C(y[s:tau]) - C(y[tau:t])

exceeds the rejection threshold, which equals the penalty increment of one
extra change-point (SIC: p log n, computed once from the full series length
and held constant across recursion levels).  Accepted splits recurse on both
halves while they remain longer than the step length.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .changepoints import ChangePointSet
from .errors import ConfigError, InvalidInputError
from .estimators import EstimatorSpec, FitConfig, FitResult, fit
from .garch import as_return_series

__all__ = [
    "PenaltySpec",
    "penalty_value",
    "default_penalty",
    "SegmentationConfig",
    "SplitDecision",
    "segment_cost",
    "single_cp_search",
    "binary_segmentation",
]


@dataclass(frozen=True)
class PenaltySpec:
    """Linear-in-k penalty: SIC (p log n), AIC (2p), or a custom constant.

    ``p`` is the number of parameters added per extra change-point (3 for
    GARCH(1,1), 4 for EGARCH/GJR).  ``scale`` multiplies the base value,
    which supports penalty-ladder experiments.
    """

    kind: str = "sic"
    p: int = 3
    custom_value: float | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("sic", "aic", "custom"):
            raise ConfigError("penalty kind must be 'sic', 'aic' or 'custom'")
        if self.p < 1:
            raise ConfigError("penalty parameter count p must be >= 1")
        if self.kind == "custom" and (self.custom_value is None or self.custom_value <= 0):
            raise ConfigError("custom penalty needs a positive custom_value")
        if self.scale <= 0:
            raise ConfigError("penalty scale must be positive")

    def value(self, n: int) -> float:
        if n < 2:
            raise InvalidInputError("penalty is defined for n >= 2")
        if self.kind == "sic":
            base = self.p * math.log(n)
        elif self.kind == "aic":
            base = 2.0 * self.p
        else:
            base = self.custom_value
        return self.scale * base


def penalty_value(spec: PenaltySpec, n: int) -> float:
    return spec.value(n)


def default_penalty(model: str, kind: str = "sic") -> PenaltySpec:
    """SIC/AIC with the model's parameter count (3 for garch11, else 4)."""
    return PenaltySpec(kind=kind, p=3 if model == "garch11" else 4)


@dataclass(frozen=True)
class SplitDecision:
    """Best single split of a segment.

    ``tau`` is the left-part length within the searched segment (None when
    the segment admits no candidate).  ``accepted`` is lam > threshold.
    """

    tau: int | None
    lam: float
    accepted: bool
    threshold: float


@dataclass(frozen=True)
class SegmentationConfig:
    estimator: EstimatorSpec = field(default_factory=EstimatorSpec)
    penalty: PenaltySpec | None = None
    min_seg: int = 100
    step_length: int = 200
    candidate_stride: int | None = None
    fit_config: FitConfig = field(default_factory=FitConfig)

    def __post_init__(self):
        if self.min_seg < 50:
            raise ConfigError("min_seg must be >= 50 (shorter GARCH fits are unreliable)")
        if self.step_length < self.min_seg:
            raise ConfigError("step_length must be >= min_seg")
        if self.candidate_stride is not None and self.candidate_stride < 1:
            raise ConfigError("candidate_stride must be >= 1")

    def resolved_penalty(self) -> PenaltySpec:
        return self.penalty or default_penalty(self.estimator.model)

    def resolved_stride(self, n: int) -> int:
        """Default stride: 25 up to n = 2000, then max(10, n // 100)."""
        if self.candidate_stride is not None:
            return self.candidate_stride
        return 25 if n <= 2000 else max(10, n // 100)

    def _fit_config(self) -> FitConfig:
        if self.fit_config.min_len == self.min_seg:
            return self.fit_config
        return replace(self.fit_config, min_len=self.min_seg)


def segment_cost(returns_segment, estimator: EstimatorSpec,
                 fit_config: FitConfig | None = None) -> float:
    """C(segment) = neg2ll at the freshly fitted parameters."""
    return _segment_fit(returns_segment, estimator, fit_config or FitConfig()).neg2ll


def _segment_fit(y_seg, estimator: EstimatorSpec, cfg: FitConfig) -> FitResult:
    return fit(estimator, y_seg, cfg)


class _CostCache:
    """Per-run memo of segment costs keyed by (start, end) in the full series.

    Purely an evaluation-count saver: segment_cost is a pure function of the
    slice values, so cached and uncached runs give identical output.
    """

    def __init__(self, y: np.ndarray, estimator: EstimatorSpec, cfg: FitConfig):
        self.y = y
        self.estimator = estimator
        self.cfg = cfg
        self.fits: dict[tuple[int, int], FitResult] = {}

    def fit(self, s: int, t: int) -> FitResult:
        key = (s, t)
        res = self.fits.get(key)
        if res is None:
            res = _segment_fit(self.y[s:t], self.estimator, self.cfg)
            self.fits[key] = res
        return res

    def cost(self, s: int, t: int) -> float:
        return self.fit(s, t).neg2ll


def _search_interval(cache: _CostCache, s: int, t: int, min_seg: int,
                     stride: int, threshold: float) -> SplitDecision:
    length = t - s
    if length < 2 * min_seg:
        return SplitDecision(None, -math.inf, False, threshold)
    total = cache.cost(s, t)
    best_tau = None
    best_lam = -math.inf
    for c in range(min_seg, length - min_seg + 1, stride):
        lam = total - cache.cost(s, s + c) - cache.cost(s + c, t)
        if lam > best_lam:
            best_lam = lam
            best_tau = c
    return SplitDecision(best_tau, best_lam, best_lam > threshold, threshold)


def single_cp_search(returns_segment, config: SegmentationConfig,
                     threshold: float | None = None) -> SplitDecision:
    """Best single split of a segment over the candidate grid.

    Candidates are left-part lengths min_seg, min_seg + stride, ... up to
    length - min_seg; ties break toward the smallest.  ``threshold``
    defaults to the configured penalty evaluated at this segment's length.
    """
    y = as_return_series(returns_segment)
    if threshold is None:
        threshold = config.resolved_penalty().value(y.size) if y.size >= 2 else math.inf
    cache = _CostCache(y, config.estimator, config._fit_config())
    return _search_interval(cache, 0, y.size, config.min_seg,
                            config.resolved_stride(y.size), threshold)


def binary_segmentation(returns, config: SegmentationConfig,
                        return_details: bool = False):
    """Detect change-points by recursive penalized splitting.

    Returns a ChangePointSet; with ``return_details`` also a dict holding the
    per-segment fits of the final segmentation and the split trace.
    """
    y = as_return_series(returns)
    n = y.size
    cps: list[int] = []
    cache = _CostCache(y, config.estimator, config._fit_config())
    trace = []
    if n >= 2 * config.min_seg:
        threshold = config.resolved_penalty().value(n)
        stride = config.resolved_stride(n)
        work = deque([(0, n)])
        while work:
            s, t = work.popleft()
            dec = _search_interval(cache, s, t, config.min_seg, stride, threshold)
            trace.append({"start": s, "end": t, "tau": dec.tau, "lambda": dec.lam,
                          "accepted": dec.accepted})
            if not dec.accepted:
                continue
            g = s + dec.tau
            cps.append(g)
            if g - s > config.step_length:
                work.append((s, g))
            if t - g > config.step_length:
                work.append((g, t))
    result = ChangePointSet(n=n, cps=tuple(sorted(cps)))
    if not return_details:
        return result
    seg_fits = {(s, t): cache.fit(s, t) for s, t in result.segments()}
    details = {
        "segment_fits": seg_fits,
        "trace": trace,
        "penalty_value": config.resolved_penalty().value(n) if n >= 2 else None,
        "stride": config.resolved_stride(n),
    }
    return result, details
