"""JSON-dict round-tripping for configuration objects.

This is the documented schema behind study config files and report echoes.
Every ``*_to_dict`` output feeds back through the matching ``*_from_dict``.
"""

from __future__ import annotations

from .bench import StudyConfig
from .distributions import parse_dist
from .errors import ConfigError
from .estimators import EstimatorSpec, FitConfig
from .garch import AsymGarchParams, GarchParams
from .segmentation import PenaltySpec
from .simulation import DgpSegmentSpec

__all__ = [
    "params_to_dict", "params_from_dict",
    "segment_to_dict", "segment_from_dict",
    "estimator_to_dict", "estimator_from_dict",
    "penalty_to_dict", "penalty_from_dict",
    "fit_config_to_dict", "fit_config_from_dict",
    "study_config_to_dict", "study_config_from_dict",
]


def params_to_dict(params) -> dict:
    d = {"omega": params.omega, "alpha": params.alpha, "beta": params.beta}
    if isinstance(params, AsymGarchParams):
        d["gamma"] = params.gamma
    return d


def params_from_dict(d: dict):
    try:
        if "gamma" in d:
            return AsymGarchParams(float(d["omega"]), float(d["alpha"]),
                                   float(d["beta"]), float(d["gamma"]))
        return GarchParams(float(d["omega"]), float(d["alpha"]), float(d["beta"]))
    except KeyError as exc:
        raise ConfigError(f"parameter dict missing key {exc}") from exc


def segment_to_dict(seg: DgpSegmentSpec) -> dict:
    return {
        "model": seg.model,
        "params": params_to_dict(seg.params),
        "length": seg.length,
        "dist": seg.dist.spec_string,
    }


def segment_from_dict(d: dict) -> DgpSegmentSpec:
    try:
        return DgpSegmentSpec(
            model=d.get("model", "garch11"),
            params=params_from_dict(d["params"]),
            length=int(d["length"]),
            dist=parse_dist(d.get("dist", "gaussian")),
        )
    except KeyError as exc:
        raise ConfigError(f"segment dict missing key {exc}") from exc


def estimator_to_dict(est: EstimatorSpec) -> dict:
    d = {"method": est.method, "model": est.model}
    if est.method == "qmle":
        d["dist"] = est.qmle_dist.spec_string
    return d


def estimator_from_dict(d: dict) -> EstimatorSpec:
    kwargs = {"method": d.get("method", "smle"), "model": d.get("model", "garch11")}
    if "dist" in d:
        kwargs["qmle_dist"] = parse_dist(d["dist"])
    return EstimatorSpec(**kwargs)


def penalty_to_dict(pen: PenaltySpec | None) -> dict | None:
    if pen is None:
        return None
    return {"kind": pen.kind, "p": pen.p, "custom_value": pen.custom_value,
            "scale": pen.scale}


def penalty_from_dict(d: dict | None) -> PenaltySpec | None:
    if d is None:
        return None
    return PenaltySpec(
        kind=d.get("kind", "sic"),
        p=int(d.get("p", 3)),
        custom_value=d.get("custom_value"),
        scale=float(d.get("scale", 1.0)),
    )


def fit_config_to_dict(cfg: FitConfig) -> dict:
    return {
        "fatol": cfg.fatol,
        "xatol": cfg.xatol,
        "maxfev": cfg.maxfev,
        "max_restarts": cfg.max_restarts,
        "extra_restarts": cfg.extra_restarts,
        "improve_tol": cfg.improve_tol,
        "qmle_warm_start": cfg.qmle_warm_start,
        "nrd_constant": cfg.nrd_constant,
        "bandwidth": cfg.bandwidth,
        "min_len": cfg.min_len,
    }


def fit_config_from_dict(d: dict | None) -> FitConfig:
    if not d:
        return FitConfig()
    allowed = set(fit_config_to_dict(FitConfig()))
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown fit config keys: {sorted(unknown)}")
    return FitConfig(**d)


def study_config_to_dict(config: StudyConfig) -> dict:
    return {
        "dgp": [segment_to_dict(s) for s in config.dgp],
        "estimators": [estimator_to_dict(e) for e in config.estimators],
        "replications": config.replications,
        "base_seed": config.base_seed,
        "fixed_k": config.fixed_k,
        "dist": None if config.dist is None else config.dist.spec_string,
        "penalty": penalty_to_dict(config.penalty),
        "min_seg": config.min_seg,
        "step_length": config.step_length,
        "candidate_stride": config.candidate_stride,
        "fit_config": fit_config_to_dict(config.fit_config),
        "burn_in": config.burn_in,
        "accuracy_bands": list(config.accuracy_bands),
        "position_bin_fractions": list(config.position_bin_fractions),
        "workers": config.workers,
    }


def study_config_from_dict(d: dict) -> StudyConfig:
    try:
        dgp = tuple(segment_from_dict(s) for s in d["dgp"])
        estimators = tuple(estimator_from_dict(e) for e in d["estimators"])
    except KeyError as exc:
        raise ConfigError(f"study config missing key {exc}") from exc
    return StudyConfig(
        dgp=dgp,
        estimators=estimators,
        replications=int(d.get("replications", 20)),
        base_seed=int(d.get("base_seed", 0)),
        fixed_k=d.get("fixed_k"),
        dist=parse_dist(d["dist"]) if d.get("dist") else None,
        penalty=penalty_from_dict(d.get("penalty")),
        min_seg=int(d.get("min_seg", 100)),
        step_length=int(d.get("step_length", 200)),
        candidate_stride=d.get("candidate_stride"),
        fit_config=fit_config_from_dict(d.get("fit_config")),
        burn_in=int(d.get("burn_in", 200)),
        accuracy_bands=tuple(d.get("accuracy_bands", (10, 25, 50))),
        position_bin_fractions=tuple(d.get("position_bin_fractions",
                                           (0.375, 0.625, 0.875))),
        workers=d.get("workers"),
    )
