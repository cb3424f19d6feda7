"""volseg: volatility change-point detection for financial return series.

The package pairs one-step semiparametric GARCH likelihood estimation
(kernel-estimated innovation density) with penalized binary segmentation,
alongside parametric QMLE and asymmetric-GARCH baselines and a seeded
Monte-Carlo benchmark harness.
"""

__version__ = "0.1.0"

from .changepoints import ChangePointSet
from .distributions import InnovationDist, gaussian, ged, parse_dist, student_t
from .errors import (
    ConfigError,
    DegenerateDataError,
    IngestionError,
    InvalidInputError,
    ParameterError,
    VolsegError,
)
from .garch import (
    AsymGarchParams,
    GarchParams,
    egarch11_filter,
    garch11_filter,
    garch_pq_filter,
    gjr11_filter,
)
from .kde import KernelDensity, kde_pdf, nrd_bandwidth
from .simulation import DGP1, DGP2, DGP3, DgpSegmentSpec, simulate
from .estimators import (
    EstimatorSpec,
    FitConfig,
    FitResult,
    fit,
    qmle_neg2ll,
    residuals,
    smle_neg2ll,
)
from .segmentation import (
    PenaltySpec,
    SegmentationConfig,
    SplitDecision,
    binary_segmentation,
    default_penalty,
    penalty_value,
    segment_cost,
    single_cp_search,
)
from .bench import (
    StudyConfig,
    StudyResult,
    accuracy_band,
    bias_variance,
    run_multi_cp_study,
    run_single_cp_study,
)
from .prices import PriceSeries, ingest_prices, to_returns

__all__ = [
    "__version__",
    # errors
    "VolsegError", "InvalidInputError", "ParameterError", "DegenerateDataError",
    "ConfigError", "IngestionError",
    # model core
    "GarchParams", "AsymGarchParams", "garch11_filter", "gjr11_filter",
    "egarch11_filter", "garch_pq_filter",
    # distributions
    "InnovationDist", "gaussian", "ged", "student_t", "parse_dist",
    # kde
    "KernelDensity", "nrd_bandwidth", "kde_pdf",
    # simulation
    "DgpSegmentSpec", "simulate", "DGP1", "DGP2", "DGP3",
    # estimators
    "EstimatorSpec", "FitConfig", "FitResult", "fit", "qmle_neg2ll",
    "smle_neg2ll", "residuals",
    # segmentation
    "ChangePointSet", "PenaltySpec", "SegmentationConfig", "SplitDecision",
    "penalty_value", "default_penalty", "segment_cost", "single_cp_search",
    "binary_segmentation",
    # benchmark harness
    "StudyConfig", "StudyResult", "run_single_cp_study", "run_multi_cp_study",
    "accuracy_band", "bias_variance",
    # prices
    "PriceSeries", "ingest_prices", "to_returns",
]
