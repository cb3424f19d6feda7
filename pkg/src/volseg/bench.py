"""Monte-Carlo study harness: repeated simulation plus detection.

Two study kinds mirror the simulation designs used to judge the detectors:

* single change-point: the true number of splits is fixed at one, the split
  search runs without a penalty, and the scaled position tau/n is scored by
  bias and variance against the designed fraction q;
* multiple change-points: full penalized binary segmentation per estimator,
  scored by the distribution of the detected count k, positional accuracy
  within +/-m observations, and per-interval boxplot summaries.

Replication r uses seed base_seed + r; replications run in parallel across
processes and aggregate order-independently, so results are reproducible
bit-for-bit regardless of the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .changepoints import ChangePointSet
from .distributions import InnovationDist
from .errors import ConfigError, InvalidInputError
from .estimators import EstimatorSpec, FitConfig
from .segmentation import (
    PenaltySpec,
    SegmentationConfig,
    binary_segmentation,
    single_cp_search,
)
from .simulation import DgpSegmentSpec, simulate

__all__ = [
    "StudyConfig",
    "StudyResult",
    "run_single_cp_study",
    "run_multi_cp_study",
    "accuracy_band",
    "bias_variance",
    "aggregate_single_cp",
    "aggregate_multi_cp",
]


@dataclass(frozen=True)
class StudyConfig:
    """Design of one Monte-Carlo study."""

    dgp: tuple[DgpSegmentSpec, ...]
    estimators: tuple[EstimatorSpec, ...]
    replications: int = 20
    base_seed: int = 0
    fixed_k: int | None = None
    dist: InnovationDist | None = None  # when set, overrides every segment's dist
    penalty: PenaltySpec | None = None
    min_seg: int = 100
    step_length: int = 200
    candidate_stride: int | None = None
    fit_config: FitConfig = field(default_factory=FitConfig)
    burn_in: int = 200
    accuracy_bands: tuple[int, ...] = (10, 25, 50)
    position_bin_fractions: tuple[float, ...] = (0.375, 0.625, 0.875)
    workers: int | None = None

    def __post_init__(self):
        if not self.dgp:
            raise ConfigError("study needs at least one DGP segment")
        if not self.estimators:
            raise ConfigError("study needs at least one estimator")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        object.__setattr__(self, "dgp", tuple(self.dgp))
        object.__setattr__(self, "estimators", tuple(self.estimators))

    def segments(self) -> tuple[DgpSegmentSpec, ...]:
        if self.dist is None:
            return self.dgp
        return tuple(replace(s, dist=self.dist) for s in self.dgp)

    def seg_config(self, estimator: EstimatorSpec) -> SegmentationConfig:
        return SegmentationConfig(
            estimator=estimator,
            penalty=self.penalty,
            min_seg=self.min_seg,
            step_length=self.step_length,
            candidate_stride=self.candidate_stride,
            fit_config=self.fit_config,
        )

    @property
    def n(self) -> int:
        return sum(s.length for s in self.segments())

    def truth(self) -> ChangePointSet:
        lengths = [s.length for s in self.segments()]
        return ChangePointSet(n=self.n, cps=tuple(np.cumsum(lengths)[:-1].tolist()))


@dataclass
class StudyResult:
    kind: str
    truth: ChangePointSet
    records: list[dict]
    aggregates: dict
    config_echo: dict


# ---------------------------------------------------------------------------
# scoring primitives
# ---------------------------------------------------------------------------

def accuracy_band(estimates, truth, m: int) -> float:
    """Fraction of true change-points matched by an estimate within +/-m.

    Matching is truth-anchored, one-to-one and greedy-nearest: each estimate
    can serve at most one truth, closest pairs first.
    """
    t_list = list(truth.cps if isinstance(truth, ChangePointSet) else truth)
    e_list = list(estimates.cps if isinstance(estimates, ChangePointSet) else estimates)
    if not t_list:
        raise InvalidInputError("accuracy band needs a non-empty truth set")
    if m < 1:
        raise InvalidInputError("band half-width m must be >= 1")
    pairs = sorted(
        (abs(e - t), ti, ei)
        for ti, t in enumerate(t_list)
        for ei, e in enumerate(e_list)
    )
    used_t: set[int] = set()
    used_e: set[int] = set()
    matched = 0
    for d, ti, ei in pairs:
        if d <= m and ti not in used_t and ei not in used_e:
            used_t.add(ti)
            used_e.add(ei)
            matched += 1
    return matched / len(t_list)


def bias_variance(scaled_positions, q: float) -> tuple[float, float]:
    """(mean(x) - q, sample variance of x); variance is 0 for a single value."""
    x = np.asarray(list(scaled_positions), dtype=float)
    if x.size == 0:
        raise InvalidInputError("bias/variance need at least one position")
    bias = float(x.mean() - q)
    var = float(x.var(ddof=1)) if x.size > 1 else 0.0
    return bias, var


# ---------------------------------------------------------------------------
# per-replication workers (module-level for multiprocessing)
# ---------------------------------------------------------------------------

def _single_cp_replication(args) -> dict:
    config, rep = args
    seed = config.base_seed + rep
    y, _, _ = simulate(config.segments(), seed, burn_in=config.burn_in)
    rec = {"rep": rep, "seed": seed, "estimators": {}}
    for est in config.estimators:
        dec = single_cp_search(y, config.seg_config(est), threshold=-np.inf)
        rec["estimators"][est.label] = {
            "tau": None if dec.tau is None else int(dec.tau),
            "scaled": None if dec.tau is None else dec.tau / y.size,
            "lambda": float(dec.lam),
        }
    return rec


def _multi_cp_replication(args) -> dict:
    config, rep = args
    seed = config.base_seed + rep
    y, _, _ = simulate(config.segments(), seed, burn_in=config.burn_in)
    rec = {"rep": rep, "seed": seed, "estimators": {}}
    for est in config.estimators:
        cps = binary_segmentation(y, config.seg_config(est))
        rec["estimators"][est.label] = {"cps": list(cps.cps), "k": cps.k}
    return rec


def _run_replications(config: StudyConfig, worker) -> list[dict]:
    jobs = [(config, r) for r in range(config.replications)]
    n_workers = config.workers if config.workers is not None else (os.cpu_count() or 1)
    if n_workers <= 1 or config.replications == 1:
        records = [worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(n_workers, config.replications)) as ex:
            records = list(ex.map(worker, jobs))
    return sorted(records, key=lambda r: r["rep"])


# ---------------------------------------------------------------------------
# aggregation (pure functions of the records, reused by round-trip tests)
# ---------------------------------------------------------------------------

def aggregate_single_cp(records, truth: ChangePointSet) -> dict:
    q = truth.cps[0] / truth.n
    agg = {}
    labels = records[0]["estimators"].keys() if records else []
    for label in labels:
        scaled = [r["estimators"][label]["scaled"] for r in records
                  if r["estimators"][label]["scaled"] is not None]
        bias, var = bias_variance(scaled, q)
        agg[label] = {"q": q, "bias": bias, "variance": var, "count": len(scaled)}
    return agg


def _five_number(values) -> dict:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return {"count": 0}
    q1, med, q3 = np.percentile(v, [25.0, 50.0, 75.0])
    return {
        "count": int(v.size),
        "min": float(v.min()),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(v.max()),
    }


def aggregate_multi_cp(records, truth: ChangePointSet, bands, bin_fractions) -> dict:
    n = truth.n
    edges = [0.0, *[f * n for f in bin_fractions], float(n)]
    agg = {}
    labels = records[0]["estimators"].keys() if records else []
    for label in labels:
        all_k = [r["estimators"][label]["k"] for r in records]
        k_hist = {int(k): int(c) for k, c in
                  zip(*np.unique(np.asarray(all_k), return_counts=True))}
        positions = [cp for r in records for cp in r["estimators"][label]["cps"]]
        bins = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            inside = [p for p in positions if lo < p <= hi] if lo > 0 else \
                     [p for p in positions if p <= hi]
            bins.append({"lo": lo, "hi": hi, **_five_number(inside)})
        entry = {
            "k_hist": k_hist,
            "k_mode": int(max(k_hist, key=lambda k: (k_hist[k], -k))),
            "mean_k": float(np.mean(all_k)),
            "position_bins": bins,
        }
        if truth.k > 0:
            acc = {}
            for m in bands:
                matched = 0.0
                for r in records:
                    matched += accuracy_band(r["estimators"][label]["cps"], truth, m)
                acc[int(m)] = matched / len(records)
            entry["accuracy"] = acc
        agg[label] = entry
    return agg


# ---------------------------------------------------------------------------
# studies
# ---------------------------------------------------------------------------

def run_single_cp_study(config: StudyConfig) -> StudyResult:
    """Fixed-k = 1 study on a two-segment design: no penalty, best split taken."""
    if len(config.segments()) != 2:
        raise ConfigError("the single change-point study needs exactly 2 DGP segments")
    if config.fixed_k not in (None, 1):
        raise ConfigError("the single change-point study runs with fixed_k = 1")
    truth = config.truth()
    records = _run_replications(config, _single_cp_replication)
    return StudyResult(
        kind="single_cp",
        truth=truth,
        records=records,
        aggregates=aggregate_single_cp(records, truth),
        config_echo=config_to_jsonable(config),
    )


def run_multi_cp_study(config: StudyConfig) -> StudyResult:
    """Penalized binary segmentation study (also covers the no-change design)."""
    if config.fixed_k is not None:
        raise ConfigError("the multi change-point study runs with the penalty, "
                          "not a fixed k")
    truth = config.truth()
    records = _run_replications(config, _multi_cp_replication)
    return StudyResult(
        kind="multi_cp",
        truth=truth,
        records=records,
        aggregates=aggregate_multi_cp(
            records, truth, config.accuracy_bands, config.position_bin_fractions
        ),
        config_echo=config_to_jsonable(config),
    )


def config_to_jsonable(config: StudyConfig) -> dict:
    """Full effective configuration, sufficient to rerun the study exactly."""
    from .configio import study_config_to_dict

    return study_config_to_dict(config)
